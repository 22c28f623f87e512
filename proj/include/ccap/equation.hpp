// Copyright 2026 The ccap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Expansion of a core description into its characteristic equation
//
//     sum_i c_i * X^(-tau_i) = 1
//
// where c_i counts the distinct instruction variants (mnemonic plus concrete
// operand values) whose total execution time is tau_i cycles.

#ifndef CCAP_EQUATION_HPP_
#define CCAP_EQUATION_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ccap/model.hpp"

namespace ccap {

using Coefficient = boost::multiprecision::cpp_int;

struct Term {
  Coefficient coefficient;
  std::int64_t exponent = 1;

  friend bool operator==(const Term&, const Term&) = default;
};

// Canonical form: sorted by ascending exponent, one term per exponent, every
// coefficient >= 1, at least one term. Only constructible through
// canonicalize(), so holding one means the invariants hold.
class CharacteristicEquation {
 public:
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const Term& operator[](std::size_t i) const { return terms_[i]; }

  // Coefficient of X^-exponent, zero if absent.
  Coefficient coefficient_at(std::int64_t exponent) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), exponent,
        [](const Term& t, std::int64_t e) { return t.exponent < e; });
    return (it != terms_.end() && it->exponent == exponent) ? it->coefficient
                                                           : Coefficient(0);
  }

  friend bool operator==(const CharacteristicEquation&,
                         const CharacteristicEquation&) = default;

 private:
  CharacteristicEquation() = default;
  friend CharacteristicEquation canonicalize(std::span<const Term>);
  std::vector<Term> terms_;
};

// Merges equal exponents, drops zero coefficients and sorts. Throws on an
// exponent < 1, a negative coefficient or an empty result.
inline CharacteristicEquation canonicalize(std::span<const Term> terms) {
  std::map<std::int64_t, Coefficient> merged;
  for (const auto& t : terms) {
    if (t.exponent < 1) {
      throw DomainError("term exponent must be >= 1, got " +
                        std::to_string(t.exponent));
    }
    if (t.coefficient < 0) {
      throw DomainError("term coefficient must be non-negative");
    }
    if (t.coefficient == 0) continue;
    merged[t.exponent] += t.coefficient;
  }
  if (merged.empty()) {
    throw Error("characteristic equation has no terms");
  }
  CharacteristicEquation eq;
  eq.terms_.reserve(merged.size());
  for (auto& [exponent, coefficient] : merged) {
    eq.terms_.push_back(Term{std::move(coefficient), exponent});
  }
  return eq;
}

inline CharacteristicEquation canonicalize(std::initializer_list<Term> terms) {
  return canonicalize(std::span<const Term>(terms.begin(), terms.size()));
}

// One term per assignment of a hierarchy level to each memory operand. The
// coefficient multiplies the register file sizes, the immediate domains and
// the cell count of every chosen level; the exponent adds the cumulative
// access time down to each chosen level to the execute cycles.
inline std::vector<Term> expand_instruction(const InstructionClassSpec& instr,
                                            const CoreSpec& core) {
  Coefficient fixed = 1;
  std::size_t memory_operands = 0;
  for (const auto& op : instr.operands) {
    if (const auto* reg = std::get_if<RegisterOperand>(&op)) {
      const auto* file = core.find_register_file(reg->file);
      if (file == nullptr) {
        throw UnknownTargetError("instruction '" + instr.mnemonic +
                                 "' references undeclared register file '" +
                                 reg->file + "'");
      }
      fixed *= file->count;
    } else if (const auto* imm = std::get_if<ImmediateOperand>(&op)) {
      fixed *= imm->domain;
    } else {
      ++memory_operands;
    }
  }

  const auto& levels = core.memory.levels;
  if (memory_operands == 0) {
    return {Term{fixed, instr.execute_cycles}};
  }
  if (levels.empty()) {
    throw Error("instruction '" + instr.mnemonic +
                "' addresses memory but the hierarchy is empty");
  }

  std::vector<std::int64_t> cumulative(levels.size());
  std::int64_t latency = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    latency += levels[k].access_cycles;
    cumulative[k] = latency;
  }

  // Odometer over the Cartesian product of levels, first operand slowest.
  std::vector<std::size_t> choice(memory_operands, 0);
  std::vector<Term> out;
  while (true) {
    Term t{fixed, instr.execute_cycles};
    for (auto k : choice) {
      t.coefficient *= levels[k].cells;
      t.exponent += cumulative[k];
    }
    out.push_back(std::move(t));

    std::size_t pos = memory_operands;
    while (pos > 0 && ++choice[pos - 1] == levels.size()) {
      choice[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  return out;
}

// Concatenated expansion of every instruction class, in declaration order,
// before equal exponents are merged.
inline std::vector<Term> expand_core(const CoreSpec& core) {
  std::vector<Term> terms;
  for (const auto& instr : core.instructions) {
    auto part = expand_instruction(instr, core);
    terms.insert(terms.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  return terms;
}

inline CharacteristicEquation build_equation(const CoreSpec& core) {
  if (core.instructions.empty()) {
    throw Error("core has no instruction classes: equation would be empty");
  }
  return canonicalize(expand_core(core));
}

inline std::int64_t gcd_of_exponents(const CharacteristicEquation& eq) {
  std::int64_t g = 0;
  for (const auto& t : eq.terms()) g = std::gcd(g, t.exponent);
  return g;
}

}  // namespace ccap

#endif  // CCAP_EQUATION_HPP_
