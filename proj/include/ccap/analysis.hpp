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

// Aggregation over threads and cores, what-if perturbations, parameter
// sweeps and relative comparisons.

#ifndef CCAP_ANALYSIS_HPP_
#define CCAP_ANALYSIS_HPP_

#include <cmath>
#include <functional>
#include <limits>
#include <future>
#include <map>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ccap/equation.hpp"
#include "ccap/model.hpp"
#include "ccap/solver.hpp"

namespace ccap {

class InvalidSpecError : public Error {
 public:
  explicit InvalidSpecError(ValidationReport report)
      : Error(summarize(report)), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  static std::string summarize(const ValidationReport& r) {
    std::string msg = "invalid machine spec";
    for (const auto& e : r.errors) msg += "\n  " + e;
    return msg;
  }
  ValidationReport report_;
};

// A bare characteristic equation, e.g. transcribed from a publication,
// with no recoverable register or memory structure.
struct RawEquationSpec {
  std::string name;
  std::int64_t threads = 1;
  CharacteristicEquation equation;

  friend bool operator==(const RawEquationSpec&,
                         const RawEquationSpec&) = default;
};

using Model = std::variant<MachineSpec, RawEquationSpec>;

inline const std::string& model_name(const Model& m) {
  return std::visit([](const auto& v) -> const std::string& { return v.name; }, m);
}

// --- Capacity ------------------------------------------------------------

struct CoreCapacity {
  // Solution of the shared-memory equation for one thread.
  CapacityResult single_thread;
  std::int64_t threads = 1;
  // threads * single_thread.capacity_bits_per_clock
  double capacity_bits_per_clock = 0;
};

struct GroupCapacity {
  std::int64_t count = 1;
  CoreCapacity core;
  // count * core.capacity_bits_per_clock
  double capacity_bits_per_clock = 0;
};

struct MachineCapacity {
  std::string name;
  std::vector<GroupCapacity> groups;
  double capacity_bits_per_clock = 0;
  std::optional<double> bits_per_second;
};

namespace detail {

inline CoreCapacity thread_scaled(CapacityResult single, std::int64_t threads) {
  CoreCapacity out;
  out.capacity_bits_per_clock =
      static_cast<double>(threads) * single.capacity_bits_per_clock;
  out.single_thread = std::move(single);
  out.threads = threads;
  return out;
}

}  // namespace detail

// Threads share every register and memory cell, so the equation is solved
// once and the capacity multiplied by the thread count.
inline CoreCapacity core_capacity(const CoreSpec& core,
                                  double rel_tol = kDefaultRelTol) {
  if (core.threads < 1) throw DomainError("threads must be >= 1");
  return detail::thread_scaled(solve_root(build_equation(core), rel_tol),
                               core.threads);
}

inline CoreCapacity core_capacity(const RawEquationSpec& raw,
                                  double rel_tol = kDefaultRelTol) {
  if (raw.threads < 1) throw DomainError("threads must be >= 1");
  return detail::thread_scaled(solve_root(raw.equation, rel_tol), raw.threads);
}

// Sum over core groups of count * core capacity.
inline MachineCapacity machine_capacity(const MachineSpec& spec,
                                        double rel_tol = kDefaultRelTol) {
  if (auto report = validate_spec(spec); !report.ok()) {
    throw InvalidSpecError(std::move(report));
  }
  MachineCapacity out;
  out.name = spec.name;
  for (const auto& group : spec.core_groups) {
    GroupCapacity g;
    g.count = group.count;
    g.core = core_capacity(group.core, rel_tol);
    g.capacity_bits_per_clock =
        static_cast<double>(group.count) * g.core.capacity_bits_per_clock;
    out.capacity_bits_per_clock += g.capacity_bits_per_clock;
    out.groups.push_back(std::move(g));
  }
  if (spec.clock_ghz) {
    out.bits_per_second = out.capacity_bits_per_clock * *spec.clock_ghz * 1e9;
  }
  return out;
}

inline MachineCapacity machine_capacity(const RawEquationSpec& raw,
                                        double rel_tol = kDefaultRelTol) {
  MachineCapacity out;
  out.name = raw.name;
  GroupCapacity g;
  g.core = core_capacity(raw, rel_tol);
  g.capacity_bits_per_clock = g.core.capacity_bits_per_clock;
  out.capacity_bits_per_clock = g.capacity_bits_per_clock;
  out.groups.push_back(std::move(g));
  return out;
}

inline MachineCapacity machine_capacity(const Model& model,
                                        double rel_tol = kDefaultRelTol) {
  return std::visit([&](const auto& m) { return machine_capacity(m, rel_tol); },
                    model);
}

// --- Perturbations -------------------------------------------------------

struct ScaleRegisterFile {
  std::string file;
  double factor = 1;
};
struct ScaleMemoryCells {
  std::string level;
  double factor = 1;
};
struct SetAccessCycles {
  std::string level;
  std::int64_t cycles = 1;
};
struct SetExecuteCycles {
  std::string mnemonic;
  std::int64_t cycles = 1;
};
struct AddInstructionClass {
  InstructionClassSpec instr;
};
struct SetThreads {
  std::int64_t threads = 1;
};
// Raw-equation mode only.
struct ScaleTermCoefficient {
  std::int64_t exponent = 1;
  double factor = 1;
};

using Perturbation =
    std::variant<ScaleRegisterFile, ScaleMemoryCells, SetAccessCycles,
                 SetExecuteCycles, AddInstructionClass, SetThreads,
                 ScaleTermCoefficient>;

namespace detail {

inline void check_factor(double factor) {
  if (!(factor > 0) || !std::isfinite(factor)) {
    throw DomainError("scale factor must be a positive finite number");
  }
}

inline void check_cycles(std::int64_t cycles, const char* what) {
  if (cycles < 1) throw DomainError(std::string(what) + " must be >= 1");
}

// Rounds to nearest, never below 1.
inline std::int64_t scale_count(std::int64_t value, double factor) {
  return std::max<std::int64_t>(
      1, std::llround(static_cast<double>(value) * factor));
}

inline Coefficient scale_coefficient(const Coefficient& value, double factor) {
  using Wide = boost::multiprecision::cpp_bin_float_100;
  Wide scaled = value.convert_to<Wide>() * Wide(factor);
  Coefficient out = boost::multiprecision::round(scaled).convert_to<Coefficient>();
  return out < 1 ? Coefficient(1) : out;
}

struct MachinePerturber {
  MachineSpec& spec;

  template <class F>
  bool for_each_core(F&& f) {
    bool hit = false;
    for (auto& group : spec.core_groups) hit = f(group.core) || hit;
    return hit;
  }

  void operator()(const ScaleRegisterFile& p) {
    check_factor(p.factor);
    const bool hit = for_each_core([&](CoreSpec& core) {
      for (auto& file : core.register_files) {
        if (file.name == p.file) {
          file.count = scale_count(file.count, p.factor);
          return true;
        }
      }
      return false;
    });
    if (!hit) throw UnknownTargetError("no register file named '" + p.file + "'");
  }

  void operator()(const ScaleMemoryCells& p) {
    check_factor(p.factor);
    const bool hit = for_each_core([&](CoreSpec& core) {
      for (auto& level : core.memory.levels) {
        if (level.name == p.level) {
          level.cells = scale_count(level.cells, p.factor);
          return true;
        }
      }
      return false;
    });
    if (!hit) throw UnknownTargetError("no memory level named '" + p.level + "'");
  }

  void operator()(const SetAccessCycles& p) {
    check_cycles(p.cycles, "access cycles");
    const bool hit = for_each_core([&](CoreSpec& core) {
      for (auto& level : core.memory.levels) {
        if (level.name == p.level) {
          level.access_cycles = p.cycles;
          return true;
        }
      }
      return false;
    });
    if (!hit) throw UnknownTargetError("no memory level named '" + p.level + "'");
  }

  void operator()(const SetExecuteCycles& p) {
    check_cycles(p.cycles, "execute cycles");
    const bool hit = for_each_core([&](CoreSpec& core) {
      bool any = false;
      for (auto& instr : core.instructions) {
        if (instr.mnemonic == p.mnemonic) {
          instr.execute_cycles = p.cycles;
          any = true;
        }
      }
      return any;
    });
    if (!hit) {
      throw UnknownTargetError("no instruction class named '" + p.mnemonic + "'");
    }
  }

  void operator()(const AddInstructionClass& p) {
    check_cycles(p.instr.execute_cycles, "execute cycles");
    for (auto& group : spec.core_groups) {
      for (const auto& op : p.instr.operands) {
        const auto* reg = std::get_if<RegisterOperand>(&op);
        if (reg != nullptr && group.core.find_register_file(reg->file) == nullptr) {
          throw UnknownTargetError("added instruction references undeclared "
                                   "register file '" + reg->file + "'");
        }
        const auto* imm = std::get_if<ImmediateOperand>(&op);
        if (imm != nullptr && imm->domain < 1) {
          throw DomainError("immediate domain must be >= 1");
        }
      }
      group.core.instructions.push_back(p.instr);
    }
  }

  void operator()(const SetThreads& p) {
    check_cycles(p.threads, "threads");
    for (auto& group : spec.core_groups) {
      group.core.threads = p.threads;
      // The stage widths no longer describe the edited pipeline.
      group.core.stage_throughputs.reset();
    }
  }

  void operator()(const ScaleTermCoefficient&) {
    throw UnknownTargetError(
        "scale-coefficient applies to raw equations only; edit the machine "
        "structure instead");
  }
};

struct RawPerturber {
  RawEquationSpec& raw;

  void operator()(const SetThreads& p) {
    check_cycles(p.threads, "threads");
    raw.threads = p.threads;
  }

  void operator()(const ScaleTermCoefficient& p) {
    check_factor(p.factor);
    std::vector<Term> terms = raw.equation.terms();
    auto it = std::find_if(terms.begin(), terms.end(),
                           [&](const Term& t) { return t.exponent == p.exponent; });
    if (it == terms.end()) {
      throw UnknownTargetError("equation has no term with exponent " +
                               std::to_string(p.exponent));
    }
    it->coefficient = scale_coefficient(it->coefficient, p.factor);
    raw.equation = canonicalize(terms);
  }

  template <class Other>
  void operator()(const Other&) {
    throw UnknownTargetError(
        "raw equations support only set-threads and scale-coefficient");
  }
};

}  // namespace detail

// Returns an edited copy; the input is left untouched.
inline MachineSpec apply_perturbation(MachineSpec spec, const Perturbation& p) {
  std::visit(detail::MachinePerturber{spec}, p);
  return spec;
}

inline RawEquationSpec apply_perturbation(RawEquationSpec raw,
                                          const Perturbation& p) {
  std::visit(detail::RawPerturber{raw}, p);
  return raw;
}

inline Model apply_perturbation(const Model& model, const Perturbation& p) {
  return std::visit(
      [&](const auto& m) -> Model { return apply_perturbation(m, p); }, model);
}

// --- What-if -------------------------------------------------------------

struct WhatIfReport {
  double baseline_capacity = 0;
  double perturbed_capacity = 0;
  // perturbed - baseline
  double delta = 0;
  // delta / baseline
  double relative_change = 0;
  // Linearized delta: dC = log2(e) * dX0 / X0 per thread, with dX0 from the
  // root sensitivities at the baseline, plus the exact effect of any change
  // in thread or core counts.
  double first_order_estimate = 0;
};

namespace detail {

using WhatIfReal = boost::multiprecision::cpp_bin_float_50;

// What-if deltas can sit far below the double solver's bracket width (an
// added 10-cycle term moves the root by ~1e-16 relative), so both sides are
// solved with 50 digits and rounded once. Rounding is monotone, so a
// positive true delta never comes out negative.
inline CapacityResult solve_rounded(const CharacteristicEquation& eq) {
  const auto wide = solve_root<WhatIfReal>(eq, WhatIfReal("1e-40"));
  CapacityResult r;
  r.root = wide.root.convert_to<double>();
  r.capacity_bits_per_clock = wide.capacity_bits_per_clock.convert_to<double>();
  r.iterations = wide.iterations;
  r.bracket_lo = wide.bracket_lo.convert_to<double>();
  r.bracket_hi = wide.bracket_hi.convert_to<double>();
  r.gcd_warning = wide.gcd_warning;
  r.residual = wide.residual.convert_to<double>();
  return r;
}

struct SolvedGroup {
  CharacteristicEquation equation;
  std::int64_t threads;
  std::int64_t count;
  CapacityResult single;
};

inline std::vector<SolvedGroup> solve_groups(const Model& model) {
  std::vector<SolvedGroup> out;
  if (const auto* spec = std::get_if<MachineSpec>(&model)) {
    if (auto report = validate_spec(*spec); !report.ok()) {
      throw InvalidSpecError(std::move(report));
    }
    for (const auto& g : spec->core_groups) {
      auto eq = build_equation(g.core);
      auto solved = solve_rounded(eq);
      out.push_back({std::move(eq), g.core.threads, g.count, std::move(solved)});
    }
  } else {
    const auto& raw = std::get<RawEquationSpec>(model);
    if (raw.threads < 1) throw DomainError("threads must be >= 1");
    out.push_back({raw.equation, raw.threads, 1, solve_rounded(raw.equation)});
  }
  return out;
}

inline double total_capacity(const std::vector<SolvedGroup>& groups) {
  double total = 0;
  for (const auto& g : groups) {
    total += static_cast<double>(g.count) *
             (static_cast<double>(g.threads) * g.single.capacity_bits_per_clock);
  }
  return total;
}

inline WhatIfReport compare_solved(const std::vector<SolvedGroup>& base,
                                   const std::vector<SolvedGroup>& next) {
  WhatIfReport r;
  r.baseline_capacity = total_capacity(base);
  r.perturbed_capacity = total_capacity(next);
  r.delta = r.perturbed_capacity - r.baseline_capacity;
  if (r.baseline_capacity != 0) {
    r.relative_change = r.delta / r.baseline_capacity;
  } else {
    r.relative_change = r.delta == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }

  // Perturbations never add or remove core groups, so groups line up by index.
  double estimate = 0;
  for (std::size_t i = 0; i < base.size() && i < next.size(); ++i) {
    const auto& b = base[i];
    const auto& n = next[i];
    std::set<std::int64_t> exponents;
    for (const auto& t : b.equation.terms()) exponents.insert(t.exponent);
    for (const auto& t : n.equation.terms()) exponents.insert(t.exponent);
    double d_root = 0;
    for (auto e : exponents) {
      const Coefficient dc = n.equation.coefficient_at(e) - b.equation.coefficient_at(e);
      if (dc == 0) continue;
      d_root += root_sensitivity_at(b.equation, b.single.root, e) *
                dc.convert_to<double>();
    }
    const double base_weight = static_cast<double>(b.count * b.threads);
    const double next_weight = static_cast<double>(n.count * n.threads);
    estimate += (next_weight - base_weight) * b.single.capacity_bits_per_clock +
                next_weight * std::numbers::log2e * d_root / b.single.root;
  }
  r.first_order_estimate = estimate;
  return r;
}

}  // namespace detail

inline WhatIfReport what_if(const Model& model, const Perturbation& p) {
  const auto base = detail::solve_groups(model);
  const auto next = detail::solve_groups(apply_perturbation(model, p));
  return detail::compare_solved(base, next);
}

struct SweepPoint {
  double value = 0;
  WhatIfReport report;
};

// Maps each value through `family` to a perturbation and evaluates it
// against the same baseline. Points are solved concurrently and returned in
// input order.
inline std::vector<SweepPoint> sweep(
    const Model& model, const std::function<Perturbation(double)>& family,
    std::span<const double> values) {
  if (values.empty()) throw Error("sweep needs at least one value");
  const auto base = detail::solve_groups(model);

  // Build perturbations up front so a bad target fails before any work.
  std::vector<Model> variants;
  variants.reserve(values.size());
  for (double v : values) variants.push_back(apply_perturbation(model, family(v)));

  std::vector<std::future<WhatIfReport>> pending;
  pending.reserve(values.size());
  for (const auto& variant : variants) {
    pending.push_back(std::async(std::launch::async, [&base, &variant] {
      return detail::compare_solved(base, detail::solve_groups(variant));
    }));
  }
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push_back({values[i], pending[i].get()});
  }
  return out;
}

// --- Comparison ----------------------------------------------------------

struct ComparisonEntry {
  std::string name;
  double capacity = 0;
  double relative_to_baseline = 0;

  friend bool operator==(const ComparisonEntry&, const ComparisonEntry&) = default;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  std::string baseline;
  // (predecessor, successor) pairs along the lineage where capacity drops.
  std::vector<std::pair<std::string, std::string>> regressions;

  friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

struct NamedCapacity {
  std::string name;
  double capacity = 0;
};

inline ComparisonReport compare(std::span<const NamedCapacity> results,
                                std::string_view baseline,
                                std::span<const std::string> lineage = {}) {
  std::map<std::string, double, std::less<>> by_name;
  for (const auto& r : results) {
    if (!by_name.emplace(r.name, r.capacity).second) {
      throw Error("duplicate entry name '" + r.name + "'");
    }
  }
  const auto base_it = by_name.find(baseline);
  if (base_it == by_name.end()) {
    throw UnknownTargetError("baseline '" + std::string(baseline) +
                             "' is not among the compared entries");
  }
  if (base_it->second == 0) {
    throw DomainError("baseline capacity is zero; relative values undefined");
  }

  ComparisonReport report;
  report.baseline = std::string(baseline);
  for (const auto& r : results) {
    report.entries.push_back({r.name, r.capacity, r.capacity / base_it->second});
  }
  for (const auto& name : lineage) {
    if (!by_name.contains(name)) {
      throw UnknownTargetError("lineage entry '" + name +
                               "' is not among the compared entries");
    }
  }
  for (std::size_t i = 1; i < lineage.size(); ++i) {
    if (by_name.at(lineage[i]) < by_name.at(lineage[i - 1])) {
      report.regressions.emplace_back(lineage[i - 1], lineage[i]);
    }
  }
  return report;
}

}  // namespace ccap

#endif  // CCAP_ANALYSIS_HPP_
