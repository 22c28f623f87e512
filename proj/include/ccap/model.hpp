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

// Declarative machine descriptions: register files, memory hierarchy,
// instruction classes, threads and core groups.

#ifndef CCAP_MODEL_HPP_
#define CCAP_MODEL_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ccap {

// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A perturbation or lookup names something that does not exist.
class UnknownTargetError : public Error {
 public:
  using Error::Error;
};

struct RegisterFileSpec {
  std::string name;
  std::int64_t count = 1;

  friend bool operator==(const RegisterFileSpec&,
                         const RegisterFileSpec&) = default;
};

struct MemoryLevelSpec {
  std::string name;
  std::int64_t cells = 1;
  // Clock cycles added when an access reaches this level.
  std::int64_t access_cycles = 1;

  friend bool operator==(const MemoryLevelSpec&,
                         const MemoryLevelSpec&) = default;
};

// Levels are ordered fastest first. An access to level k pays the access
// cycles of levels 0..k.
struct MemoryHierarchySpec {
  std::vector<MemoryLevelSpec> levels;

  friend bool operator==(const MemoryHierarchySpec&,
                         const MemoryHierarchySpec&) = default;
};

struct RegisterOperand {
  std::string file;
  friend bool operator==(const RegisterOperand&,
                         const RegisterOperand&) = default;
};

struct MemoryOperand {
  friend bool operator==(const MemoryOperand&, const MemoryOperand&) = default;
};

// An operand taking one of `domain` distinct encoded values.
struct ImmediateOperand {
  std::int64_t domain = 1;
  friend bool operator==(const ImmediateOperand&,
                         const ImmediateOperand&) = default;
};

using OperandSpec = std::variant<RegisterOperand, MemoryOperand, ImmediateOperand>;

struct InstructionClassSpec {
  std::string mnemonic;
  std::vector<OperandSpec> operands;
  // Cycles spent executing, excluding any memory access.
  std::int64_t execute_cycles = 1;

  friend bool operator==(const InstructionClassSpec&,
                         const InstructionClassSpec&) = default;
};

struct CoreSpec {
  std::vector<RegisterFileSpec> register_files;
  MemoryHierarchySpec memory;
  std::vector<InstructionClassSpec> instructions;
  std::int64_t threads = 1;
  std::optional<std::vector<std::int64_t>> stage_throughputs;

  // Returns nullptr when no file of that name exists.
  const RegisterFileSpec* find_register_file(std::string_view name) const {
    auto it = std::find_if(register_files.begin(), register_files.end(),
                           [&](const auto& f) { return f.name == name; });
    return it == register_files.end() ? nullptr : &*it;
  }

  friend bool operator==(const CoreSpec&, const CoreSpec&) = default;
};

struct CoreGroup {
  CoreSpec core;
  std::int64_t count = 1;

  friend bool operator==(const CoreGroup&, const CoreGroup&) = default;
};

struct MachineSpec {
  std::string name;
  std::vector<CoreGroup> core_groups;
  std::optional<double> clock_ghz;

  friend bool operator==(const MachineSpec&, const MachineSpec&) = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
  friend bool operator==(const ValidationReport&,
                         const ValidationReport&) = default;
};

// The thread count of a pipeline is the narrowest stage width.
inline std::int64_t derive_thread_count(
    std::span<const std::int64_t> stage_throughputs) {
  if (stage_throughputs.empty()) {
    throw Error("cannot derive thread count: no pipeline stages");
  }
  return *std::min_element(stage_throughputs.begin(), stage_throughputs.end());
}

namespace detail {

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == ',' || c == '=' || c == ':' ||
           static_cast<unsigned char>(c) <= ' ';
  });
}

inline bool touches_memory(const InstructionClassSpec& instr) {
  return std::any_of(instr.operands.begin(), instr.operands.end(), [](const auto& op) {
    return std::holds_alternative<MemoryOperand>(op);
  });
}

inline void validate_core(const CoreSpec& core, const std::string& where,
                          ValidationReport& report) {
  auto error = [&](std::string msg) {
    report.errors.push_back(where + ": " + std::move(msg));
  };

  std::set<std::string> seen;
  for (const auto& file : core.register_files) {
    if (!is_identifier(file.name)) {
      error("register file name '" + file.name + "' is not an identifier");
    }
    if (!seen.insert(file.name).second) {
      error("duplicate register file name '" + file.name + "'");
    }
    if (file.count < 1) {
      error("register file '" + file.name + "' must have count >= 1");
    }
  }

  if (core.memory.levels.empty()) {
    error("memory hierarchy has no levels");
  }
  seen.clear();
  for (const auto& level : core.memory.levels) {
    if (!is_identifier(level.name)) {
      error("memory level name '" + level.name + "' is not an identifier");
    }
    if (!seen.insert(level.name).second) {
      error("duplicate memory level name '" + level.name + "'");
    }
    if (level.cells < 1) {
      error("memory level '" + level.name + "' must have cells >= 1");
    }
    if (level.access_cycles < 1) {
      error("memory level '" + level.name + "' must have access_cycles >= 1");
    }
  }

  if (core.instructions.empty()) {
    error("core has no instruction classes");
  }
  bool any_memory = false;
  for (const auto& instr : core.instructions) {
    const std::string label = "instruction '" + instr.mnemonic + "'";
    if (!is_identifier(instr.mnemonic)) {
      error(label + " has an invalid mnemonic");
    }
    if (instr.execute_cycles < 1) {
      error(label + " must have cycles >= 1");
    }
    for (const auto& op : instr.operands) {
      if (const auto* reg = std::get_if<RegisterOperand>(&op)) {
        if (core.find_register_file(reg->file) == nullptr) {
          error(label + " references undeclared register file '" + reg->file + "'");
        }
      } else if (const auto* imm = std::get_if<ImmediateOperand>(&op)) {
        if (imm->domain < 1) error(label + " has immediate domain < 1");
      }
    }
    any_memory = any_memory || touches_memory(instr);
  }
  if (!core.instructions.empty() && !any_memory) {
    report.warnings.push_back(where + ": no instruction class addresses memory");
  }

  if (core.threads < 1) {
    error("threads must be >= 1");
  }
  if (core.stage_throughputs) {
    const auto& stages = *core.stage_throughputs;
    if (stages.empty()) {
      error("stage_throughputs is present but empty");
    } else if (std::any_of(stages.begin(), stages.end(),
                           [](auto w) { return w < 1; })) {
      error("stage throughputs must be >= 1");
    } else if (const auto derived = derive_thread_count(stages);
               derived != core.threads) {
      error("threads = " + std::to_string(core.threads) +
            " but narrowest pipeline stage allows " + std::to_string(derived));
    }
  }
}

}  // namespace detail

// Checks every structural invariant of a machine description. Problems are
// returned as data; nothing is thrown.
inline ValidationReport validate_spec(const MachineSpec& spec) {
  ValidationReport report;
  if (!detail::is_identifier(spec.name)) {
    report.errors.push_back("machine name '" + spec.name + "' is not an identifier");
  }
  if (spec.core_groups.empty()) {
    report.errors.push_back("machine has no core groups");
  }
  if (spec.clock_ghz && !(*spec.clock_ghz > 0.0)) {
    report.errors.push_back("clock_ghz must be positive");
  }
  for (std::size_t i = 0; i < spec.core_groups.size(); ++i) {
    const auto& group = spec.core_groups[i];
    const std::string where = "cores[" + std::to_string(i) + "]";
    if (group.count < 1) {
      report.errors.push_back(where + ": count must be >= 1");
    }
    detail::validate_core(group.core, where, report);
  }
  return report;
}

}  // namespace ccap

#endif  // CCAP_MODEL_HPP_
