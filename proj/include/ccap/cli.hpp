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

// Command-line frontend. Exit status: 0 success, 1 parse or validation
// failure, 2 usage error.

#ifndef CCAP_CLI_HPP_
#define CCAP_CLI_HPP_

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "ccap/analysis.hpp"
#include "ccap/ingest.hpp"
#include "ccap/report.hpp"

namespace ccap::cli {

class UsageError : public Error {
 public:
  using Error::Error;
};

// "key:name=value,name=value"
struct PerturbationText {
  std::string key;
  std::map<std::string, std::string, std::less<>> args;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double to_real(std::string_view s, std::string_view what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("expected a number for " + std::string(what) + ", got '" +
                     std::string(s) + "'");
  }
  return v;
}

inline std::int64_t to_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("expected an integer for " + std::string(what) + ", got '" +
                     std::string(s) + "'");
  }
  return v;
}

struct KeySchema {
  std::vector<std::string_view> required;
  std::vector<std::string_view> optional;
  // Parameters that may be swept.
  std::vector<std::string_view> numeric;
};

inline const std::map<std::string, KeySchema, std::less<>>& key_schemas() {
  static const std::map<std::string, KeySchema, std::less<>> schemas = {
      {"scale-registers", {{"file", "factor"}, {}, {"factor"}}},
      {"scale-memory", {{"level", "factor"}, {}, {"factor"}}},
      {"set-access", {{"level", "cycles"}, {}, {"cycles"}}},
      {"set-execute", {{"mnemonic", "cycles"}, {}, {"cycles"}}},
      {"add-instruction",
       {{"mnemonic", "cycles"}, {"registers", "memory", "immediate"}, {"cycles"}}},
      {"set-threads", {{"threads"}, {}, {"threads"}}},
      {"scale-coefficient", {{"exponent", "factor"}, {}, {"exponent", "factor"}}},
  };
  return schemas;
}

inline const KeySchema& schema_for(std::string_view key) {
  const auto& schemas = key_schemas();
  auto it = schemas.find(key);
  if (it == schemas.end()) {
    throw UsageError("unknown perturbation '" + std::string(key) + "'");
  }
  return it->second;
}

}  // namespace detail

inline PerturbationText split_perturbation(std::string_view text) {
  PerturbationText out;
  const auto colon = text.find(':');
  out.key = std::string(text.substr(0, colon));
  detail::schema_for(out.key);
  if (colon == std::string_view::npos || colon + 1 == text.size()) return out;
  for (const auto& pair : detail::split(text.substr(colon + 1), ',')) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("malformed perturbation argument '" + pair + "' (want name=value)");
    }
    auto name = pair.substr(0, eq);
    if (!out.args.emplace(name, pair.substr(eq + 1)).second) {
      throw UsageError("perturbation argument '" + name + "' given twice");
    }
  }
  return out;
}

inline Perturbation make_perturbation(const PerturbationText& p) {
  const auto& schema = detail::schema_for(p.key);
  for (const auto& [name, value] : p.args) {
    const bool known =
        std::find(schema.required.begin(), schema.required.end(), name) !=
            schema.required.end() ||
        std::find(schema.optional.begin(), schema.optional.end(), name) !=
            schema.optional.end();
    if (!known) {
      throw UsageError("'" + p.key + "' does not take argument '" + name + "'");
    }
  }
  for (auto name : schema.required) {
    auto it = p.args.find(name);
    if (it == p.args.end() || it->second.empty() || it->second == "?") {
      throw UsageError("'" + p.key + "' needs argument '" + std::string(name) + "'");
    }
  }
  auto arg = [&](std::string_view name) { return p.args.find(name)->second; };

  if (p.key == "scale-registers") {
    return ScaleRegisterFile{arg("file"), detail::to_real(arg("factor"), "factor")};
  }
  if (p.key == "scale-memory") {
    return ScaleMemoryCells{arg("level"), detail::to_real(arg("factor"), "factor")};
  }
  if (p.key == "set-access") {
    return SetAccessCycles{arg("level"), detail::to_int(arg("cycles"), "cycles")};
  }
  if (p.key == "set-execute") {
    return SetExecuteCycles{arg("mnemonic"), detail::to_int(arg("cycles"), "cycles")};
  }
  if (p.key == "set-threads") {
    return SetThreads{detail::to_int(arg("threads"), "threads")};
  }
  if (p.key == "scale-coefficient") {
    return ScaleTermCoefficient{detail::to_int(arg("exponent"), "exponent"),
                                detail::to_real(arg("factor"), "factor")};
  }
  // add-instruction
  InstructionClassSpec instr;
  instr.mnemonic = arg("mnemonic");
  instr.execute_cycles = detail::to_int(arg("cycles"), "cycles");
  if (auto it = p.args.find("registers"); it != p.args.end()) {
    for (const auto& file : detail::split(it->second, '+')) {
      instr.operands.push_back(RegisterOperand{file});
    }
  }
  if (auto it = p.args.find("immediate"); it != p.args.end()) {
    instr.operands.push_back(ImmediateOperand{detail::to_int(it->second, "immediate")});
  }
  if (auto it = p.args.find("memory"); it != p.args.end()) {
    const auto n = detail::to_int(it->second, "memory");
    if (n < 0) throw UsageError("memory operand count must be >= 0");
    for (std::int64_t i = 0; i < n; ++i) instr.operands.push_back(MemoryOperand{});
  }
  return AddInstructionClass{std::move(instr)};
}

inline Perturbation parse_perturbation(std::string_view text) {
  return make_perturbation(split_perturbation(text));
}

// A perturbation with exactly one numeric argument left open, either
// omitted or written as "?".
struct PerturbationFamily {
  PerturbationText base;
  std::string free_parameter;

  Perturbation operator()(double value) const {
    PerturbationText p = base;
    p.args[free_parameter] = ccap::detail::exact(value);
    return make_perturbation(p);
  }
};

inline PerturbationFamily parse_perturbation_family(std::string_view text) {
  PerturbationFamily family;
  family.base = split_perturbation(text);
  const auto& schema = detail::schema_for(family.base.key);
  std::vector<std::string> open;
  for (auto name : schema.required) {
    auto it = family.base.args.find(name);
    if (it == family.base.args.end() || it->second == "?") {
      open.emplace_back(name);
    }
  }
  if (open.size() != 1 ||
      std::find(schema.numeric.begin(), schema.numeric.end(), open.front()) ==
          schema.numeric.end()) {
    throw UsageError("sweep perturbation '" + std::string(text) +
                     "' must leave exactly one numeric argument open");
  }
  family.free_parameter = open.front();
  family.base.args.erase(family.free_parameter);
  return family;
}

namespace detail {

inline void warn_gcd(const MachineCapacity& m, std::ostream& err) {
  for (std::size_t i = 0; i < m.groups.size(); ++i) {
    if (const auto g = m.groups[i].core.single_thread.gcd_warning) {
      err << "warning: " << m.name << ": core group " << i << " has exponent gcd "
          << *g << "; the capacity is still well defined\n";
    }
  }
}

inline CharacteristicEquation single_equation(const Model& model) {
  if (const auto* raw = std::get_if<RawEquationSpec>(&model)) return raw->equation;
  const auto& spec = std::get<MachineSpec>(model);
  if (spec.core_groups.size() != 1) {
    throw Error("enumerate needs a raw equation or a machine with one core group");
  }
  return build_equation(spec.core_groups.front().core);
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Computer capacity of processor architectures"};
  app.name("ccap");
  app.require_subcommand(1);

  std::string format_text = "table";
  double tol = kDefaultRelTol;
  std::string input;
  std::vector<std::string> inputs;
  std::string baseline;
  std::string lineage_text;
  std::string perturb_text;
  std::vector<double> values;
  std::int64_t t = 0;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format_text, "json, csv or table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "relative bracket width at which bisection stops")
        ->check(CLI::PositiveNumber);
  };

  auto* capacity = app.add_subcommand("capacity", "Solve a machine spec or raw equation");
  capacity->add_option("file", input, "spec or raw equation, '-' for stdin")->required();
  add_format(capacity);
  add_tol(capacity);

  auto* compare_cmd = app.add_subcommand("compare", "Compare capacities against a baseline");
  compare_cmd->add_option("files", inputs, "specs or raw equations")->required();
  compare_cmd->add_option("--baseline", baseline, "name of the baseline entry")->required();
  compare_cmd->add_option("--lineage", lineage_text,
                          "comma-separated predecessor-to-successor order");
  add_format(compare_cmd);
  add_tol(compare_cmd);

  auto* whatif = app.add_subcommand("whatif", "Capacity change under one perturbation");
  whatif->add_option("file", input)->required();
  whatif->add_option("--perturb", perturb_text, "KEY:name=value,...")->required();
  add_format(whatif);

  auto* sweep_cmd = app.add_subcommand("sweep", "Capacity over a range of one parameter");
  sweep_cmd->add_option("file", input)->required();
  sweep_cmd->add_option("--perturb", perturb_text, "KEY:name=value,... with one open value")
      ->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")
      ->required()
      ->delimiter(',');
  add_format(sweep_cmd);

  auto* validate = app.add_subcommand("validate", "Check a document");
  validate->add_option("file", input)->required();
  add_format(validate);

  auto* enumerate = app.add_subcommand("enumerate", "Count task sequences of length t");
  enumerate->add_option("file", input)->required();
  enumerate->add_option("--t", t, "total execution time in cycles")
      ->required()
      ->check(CLI::NonNegativeNumber);
  add_format(enumerate);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ccap: " << e.what() << "\n";
    return 2;
  }

  try {
    const Format format = parse_format(format_text);

    if (*capacity) {
      const auto doc = load_document(input);
      const auto result = machine_capacity(doc.model, tol);
      detail::warn_gcd(result, err);
      out << serialize_report(result, format);
    } else if (*compare_cmd) {
      std::vector<NamedCapacity> results;
      for (const auto& path : inputs) {
        const auto doc = load_document(path);
        const auto result = machine_capacity(doc.model, tol);
        detail::warn_gcd(result, err);
        results.push_back({result.name, result.capacity_bits_per_clock});
      }
      std::vector<std::string> lineage;
      if (!lineage_text.empty()) lineage = detail::split(lineage_text, ',');
      out << serialize_report(compare(results, baseline, lineage), format);
    } else if (*whatif) {
      const auto perturbation = parse_perturbation(perturb_text);
      const auto doc = load_document(input);
      out << serialize_report(what_if(doc.model, perturbation), format);
    } else if (*sweep_cmd) {
      const auto family = parse_perturbation_family(perturb_text);
      family(values.front());  // surface syntax errors as usage errors
      const auto doc = load_document(input);
      const auto points = sweep(doc.model, family, values);
      out << serialize_report(std::span<const SweepPoint>(points), format);
    } else if (*validate) {
      const auto report = check_document(read_source(input));
      out << serialize_report(report, format);
      return report.ok() ? 0 : 1;
    } else if (*enumerate) {
      const auto doc = load_document(input);
      const auto eq = detail::single_equation(doc.model);
      if (const auto g = gcd_of_exponents(eq); g > 1) {
        err << "warning: exponent gcd is " << g
            << "; N(t) vanishes unless t is a multiple of it\n";
      }
      out << serialize_report(make_enumeration_report(eq, t), format);
    }
  } catch (const UsageError& e) {
    err << "ccap: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "ccap: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ccap::cli

#endif  // CCAP_CLI_HPP_
