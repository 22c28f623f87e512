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

// JSON documents for machine specs and raw characteristic equations.
//
// Machine spec:
//   {"name": str, "clock_ghz"?: number,
//    "cores": [{"count": int, "threads": int, "stage_throughputs"?: [int],
//               "register_files": [{"name": str, "count": int}],
//               "memory": [{"name": str, "cells": int, "access_cycles": int}],
//               "instructions": [{"mnemonic": str, "cycles": int,
//                                 "operands": [{"kind": "register", "file": str}
//                                            | {"kind": "memory"}
//                                            | {"kind": "immediate", "domain": int}]}]}]}
//
// Raw equation:
//   {"name": str, "threads"?: int,
//    "terms": [{"coefficient": "<decimal digits>", "exponent": int}]}

#ifndef CCAP_INGEST_HPP_
#define CCAP_INGEST_HPP_

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ccap/analysis.hpp"
#include "ccap/equation.hpp"
#include "ccap/model.hpp"

namespace ccap {

using Json = nlohmann::ordered_json;

struct Diagnostic {
  // 1-based; 0 when the position is not known.
  std::size_t line = 0;
  std::size_t column = 0;
  // JSON pointer to the offending value, empty for syntax errors.
  std::string path;
  std::string message;

  std::string to_string() const {
    std::string out;
    if (line > 0) {
      out += std::to_string(line) + ":" + std::to_string(column) + ": ";
    }
    if (!path.empty()) out += path + ": ";
    return out + message;
  }
};

class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics)
      : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string join(const std::vector<Diagnostic>& ds) {
    std::string out;
    for (const auto& d : ds) {
      if (!out.empty()) out += '\n';
      out += d.to_string();
    }
    return out;
  }
  std::vector<Diagnostic> diagnostics_;
};

namespace detail {

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    Diagnostic d;
    d.message = e.what();
    // e.byte is 1-based and points just past the offending character.
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    d.line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') {
        ++d.line;
        line_start = i + 1;
      }
    }
    d.column = end > line_start ? end - line_start : 1;
    throw ParseError({d});
  }
}

// Schema walker that records every problem instead of stopping at the first.
class SchemaReader {
 public:
  std::vector<Diagnostic> diagnostics;

  void fail(const std::string& path, std::string message) {
    diagnostics.push_back({0, 0, path.empty() ? "/" : path, std::move(message)});
  }

  bool expect_object(const Json& j, const std::string& path,
                     std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(path + "/" + key, "unknown field \"" + key + "\"");
      }
    }
    return true;
  }

  const Json* field(const Json& obj, const std::string& path,
                    const std::string& key, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path, "missing required field \"" + key + "\"");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string_field(const Json& obj, const std::string& path,
                                          const std::string& key,
                                          bool required = true) {
    const Json* v = field(obj, path, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      fail(path + "/" + key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::int64_t> int_field(const Json& obj, const std::string& path,
                                        const std::string& key,
                                        bool required = true) {
    const Json* v = field(obj, path, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer() ||
        (v->is_number_unsigned() &&
         v->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))) {
      fail(path + "/" + key, "expected an integer");
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  const Json* array_field(const Json& obj, const std::string& path,
                          const std::string& key, bool required = true) {
    const Json* v = field(obj, path, key, required);
    if (v == nullptr) return nullptr;
    if (!v->is_array()) {
      fail(path + "/" + key, "expected an array");
      return nullptr;
    }
    return v;
  }
};

inline std::string child(const std::string& path, std::string_view key,
                         std::size_t index) {
  return path + "/" + std::string(key) + "/" + std::to_string(index);
}

inline std::optional<OperandSpec> read_operand(SchemaReader& r, const Json& j,
                                               const std::string& path) {
  if (!r.expect_object(j, path, {"kind", "file", "domain"})) return std::nullopt;
  const auto kind = r.string_field(j, path, "kind");
  if (!kind) return std::nullopt;
  if (*kind == "register") {
    const auto file = r.string_field(j, path, "file");
    if (j.contains("domain")) r.fail(path + "/domain", "not allowed on a register operand");
    if (!file) return std::nullopt;
    return RegisterOperand{*file};
  }
  if (*kind == "memory") {
    if (j.contains("file")) r.fail(path + "/file", "not allowed on a memory operand");
    if (j.contains("domain")) r.fail(path + "/domain", "not allowed on a memory operand");
    return MemoryOperand{};
  }
  if (*kind == "immediate") {
    const auto domain = r.int_field(j, path, "domain");
    if (j.contains("file")) r.fail(path + "/file", "not allowed on an immediate operand");
    if (!domain) return std::nullopt;
    return ImmediateOperand{*domain};
  }
  r.fail(path + "/kind", "unknown operand kind \"" + *kind + "\"");
  return std::nullopt;
}

inline CoreGroup read_core_group(SchemaReader& r, const Json& j,
                                 const std::string& path) {
  CoreGroup group;
  if (!r.expect_object(j, path,
                       {"count", "threads", "stage_throughputs", "register_files",
                        "memory", "instructions"})) {
    return group;
  }
  CoreSpec& core = group.core;
  if (auto v = r.int_field(j, path, "count")) group.count = *v;

  if (const Json* stages = r.array_field(j, path, "stage_throughputs", false)) {
    std::vector<std::int64_t> widths;
    for (std::size_t i = 0; i < stages->size(); ++i) {
      const auto& w = (*stages)[i];
      if (!w.is_number_integer()) {
        r.fail(path + "/stage_throughputs/" + std::to_string(i), "expected an integer");
      } else {
        widths.push_back(w.get<std::int64_t>());
      }
    }
    core.stage_throughputs = std::move(widths);
  }
  if (auto v = r.int_field(j, path, "threads", false)) {
    core.threads = *v;
  } else if (core.stage_throughputs && !core.stage_throughputs->empty()) {
    core.threads = derive_thread_count(*core.stage_throughputs);
  }

  if (const Json* files = r.array_field(j, path, "register_files")) {
    for (std::size_t i = 0; i < files->size(); ++i) {
      const auto p = child(path, "register_files", i);
      const auto& f = (*files)[i];
      if (!r.expect_object(f, p, {"name", "count"})) continue;
      auto name = r.string_field(f, p, "name");
      auto count = r.int_field(f, p, "count");
      if (name && count) core.register_files.push_back({*name, *count});
    }
  }
  if (const Json* levels = r.array_field(j, path, "memory")) {
    for (std::size_t i = 0; i < levels->size(); ++i) {
      const auto p = child(path, "memory", i);
      const auto& l = (*levels)[i];
      if (!r.expect_object(l, p, {"name", "cells", "access_cycles"})) continue;
      auto name = r.string_field(l, p, "name");
      auto cells = r.int_field(l, p, "cells");
      auto access = r.int_field(l, p, "access_cycles");
      if (name && cells && access) core.memory.levels.push_back({*name, *cells, *access});
    }
  }
  if (const Json* instrs = r.array_field(j, path, "instructions")) {
    for (std::size_t i = 0; i < instrs->size(); ++i) {
      const auto p = child(path, "instructions", i);
      const auto& in = (*instrs)[i];
      if (!r.expect_object(in, p, {"mnemonic", "cycles", "operands"})) continue;
      InstructionClassSpec instr;
      auto mnemonic = r.string_field(in, p, "mnemonic");
      auto cycles = r.int_field(in, p, "cycles");
      if (const Json* ops = r.array_field(in, p, "operands")) {
        for (std::size_t k = 0; k < ops->size(); ++k) {
          if (auto op = read_operand(r, (*ops)[k], child(p, "operands", k))) {
            instr.operands.push_back(std::move(*op));
          }
        }
      }
      if (mnemonic && cycles) {
        instr.mnemonic = *mnemonic;
        instr.execute_cycles = *cycles;
        core.instructions.push_back(std::move(instr));
      }
    }
  }
  return group;
}

inline MachineSpec read_machine_spec(SchemaReader& r, const Json& root) {
  MachineSpec spec;
  if (!r.expect_object(root, "", {"name", "clock_ghz", "cores"})) return spec;
  if (auto v = r.string_field(root, "", "name")) spec.name = *v;
  if (const Json* clock = r.field(root, "", "clock_ghz", false)) {
    if (clock->is_number()) {
      spec.clock_ghz = clock->get<double>();
    } else {
      r.fail("/clock_ghz", "expected a number");
    }
  }
  if (const Json* cores = r.array_field(root, "", "cores")) {
    for (std::size_t i = 0; i < cores->size(); ++i) {
      spec.core_groups.push_back(
          read_core_group(r, (*cores)[i], "/cores/" + std::to_string(i)));
    }
  }
  return spec;
}

inline std::optional<Coefficient> parse_decimal(std::string_view digits) {
  if (digits.empty() || digits.size() > 100000) return std::nullopt;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  return Coefficient(std::string(digits));
}

inline RawEquationSpec read_raw_equation(SchemaReader& r, const Json& root) {
  std::string name;
  std::int64_t threads = 1;
  std::vector<Term> terms;
  if (r.expect_object(root, "", {"name", "threads", "terms"})) {
    if (auto v = r.string_field(root, "", "name")) {
      name = *v;
      if (!is_identifier(name)) {
        r.fail("/name", "name '" + name + "' is not an identifier");
      }
    }
    if (auto v = r.int_field(root, "", "threads", false)) {
      threads = *v;
      if (threads < 1) r.fail("/threads", "threads must be >= 1");
    }
    if (const Json* list = r.array_field(root, "", "terms")) {
      if (list->empty()) r.fail("/terms", "equation has no terms");
      for (std::size_t i = 0; i < list->size(); ++i) {
        const auto p = "/terms/" + std::to_string(i);
        const auto& t = (*list)[i];
        if (!r.expect_object(t, p, {"coefficient", "exponent"})) continue;
        auto coeff = r.string_field(t, p, "coefficient");
        auto exponent = r.int_field(t, p, "exponent");
        std::optional<Coefficient> value;
        if (coeff) {
          value = parse_decimal(*coeff);
          if (!value) {
            r.fail(p + "/coefficient", "expected a string of decimal digits");
          } else if (*value < 1) {
            r.fail(p + "/coefficient", "coefficient must be >= 1");
            value.reset();
          }
        }
        if (exponent && *exponent < 1) {
          r.fail(p + "/exponent", "exponent must be >= 1");
          exponent.reset();
        }
        if (value && exponent) terms.push_back({std::move(*value), *exponent});
      }
    }
  }
  if (!r.diagnostics.empty()) throw ParseError(std::move(r.diagnostics));
  return RawEquationSpec{name, threads, canonicalize(terms)};
}

}  // namespace detail

// Parses and validates a machine spec. Syntax errors carry line and column,
// schema and validation errors carry a JSON pointer.
inline MachineSpec parse_machine_spec(std::string_view text) {
  const Json root = detail::parse_json_text(text);
  detail::SchemaReader reader;
  MachineSpec spec = detail::read_machine_spec(reader, root);
  if (!reader.diagnostics.empty()) throw ParseError(std::move(reader.diagnostics));
  if (auto report = validate_spec(spec); !report.ok()) {
    std::vector<Diagnostic> ds;
    for (auto& e : report.errors) ds.push_back({0, 0, "", "validation: " + e});
    throw ParseError(std::move(ds));
  }
  return spec;
}

inline RawEquationSpec parse_raw_equation(std::string_view text) {
  const Json root = detail::parse_json_text(text);
  detail::SchemaReader reader;
  return detail::read_raw_equation(reader, root);
}

// A document holding a "terms" array is a raw equation, anything else is
// read as a machine spec.
inline Model parse_model(std::string_view text) {
  const Json root = detail::parse_json_text(text);
  detail::SchemaReader reader;
  if (root.is_object() && root.contains("terms")) {
    return detail::read_raw_equation(reader, root);
  }
  MachineSpec spec = detail::read_machine_spec(reader, root);
  if (!reader.diagnostics.empty()) throw ParseError(std::move(reader.diagnostics));
  if (auto report = validate_spec(spec); !report.ok()) {
    std::vector<Diagnostic> ds;
    for (auto& e : report.errors) ds.push_back({0, 0, "", "validation: " + e});
    throw ParseError(std::move(ds));
  }
  return spec;
}

// Full diagnosis of a document: syntax, schema and validation problems all
// land in the report's errors, plus a warning for every core whose equation
// has exponent gcd > 1. Never throws on bad input.
inline ValidationReport check_document(std::string_view text) {
  ValidationReport report;
  Json root;
  try {
    root = detail::parse_json_text(text);
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) report.errors.push_back(d.to_string());
    return report;
  }
  detail::SchemaReader reader;
  if (root.is_object() && root.contains("terms")) {
    try {
      const auto raw = detail::read_raw_equation(reader, root);
      if (const auto g = gcd_of_exponents(raw.equation); g > 1) {
        report.warnings.push_back("exponent gcd is " + std::to_string(g));
      }
    } catch (const ParseError& e) {
      for (const auto& d : e.diagnostics()) report.errors.push_back(d.to_string());
    }
    return report;
  }
  const MachineSpec spec = detail::read_machine_spec(reader, root);
  if (!reader.diagnostics.empty()) {
    for (const auto& d : reader.diagnostics) report.errors.push_back(d.to_string());
    return report;
  }
  report = validate_spec(spec);
  if (report.ok()) {
    for (std::size_t i = 0; i < spec.core_groups.size(); ++i) {
      const auto g = gcd_of_exponents(build_equation(spec.core_groups[i].core));
      if (g > 1) {
        report.warnings.push_back("cores[" + std::to_string(i) +
                                  "]: exponent gcd is " + std::to_string(g));
      }
    }
  }
  return report;
}

// A parsed model plus where it came from, for error messages.
struct SpecDocument {
  Model model;
  std::string source;
};

inline std::string read_source(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline SpecDocument load_document(const std::string& path) {
  const std::string text = read_source(path);
  try {
    return SpecDocument{parse_model(text), path};
  } catch (const ParseError& e) {
    auto ds = e.diagnostics();
    for (auto& d : ds) d.message = path + ": " + d.message;
    throw ParseError(std::move(ds));
  }
}

// --- Serialization ---------------------------------------------------------

inline Json to_json_value(const MachineSpec& spec) {
  Json root = Json::object();
  root["name"] = spec.name;
  if (spec.clock_ghz) root["clock_ghz"] = *spec.clock_ghz;
  Json cores = Json::array();
  for (const auto& group : spec.core_groups) {
    const auto& core = group.core;
    Json c = Json::object();
    c["count"] = group.count;
    c["threads"] = core.threads;
    if (core.stage_throughputs) c["stage_throughputs"] = *core.stage_throughputs;
    Json files = Json::array();
    for (const auto& f : core.register_files) {
      files.push_back({{"name", f.name}, {"count", f.count}});
    }
    c["register_files"] = std::move(files);
    Json levels = Json::array();
    for (const auto& l : core.memory.levels) {
      levels.push_back(
          {{"name", l.name}, {"cells", l.cells}, {"access_cycles", l.access_cycles}});
    }
    c["memory"] = std::move(levels);
    Json instrs = Json::array();
    for (const auto& in : core.instructions) {
      Json ops = Json::array();
      for (const auto& op : in.operands) {
        if (const auto* reg = std::get_if<RegisterOperand>(&op)) {
          ops.push_back({{"kind", "register"}, {"file", reg->file}});
        } else if (const auto* imm = std::get_if<ImmediateOperand>(&op)) {
          ops.push_back({{"kind", "immediate"}, {"domain", imm->domain}});
        } else {
          ops.push_back({{"kind", "memory"}});
        }
      }
      instrs.push_back(
          {{"mnemonic", in.mnemonic}, {"cycles", in.execute_cycles}, {"operands", ops}});
    }
    c["instructions"] = std::move(instrs);
    cores.push_back(std::move(c));
  }
  root["cores"] = std::move(cores);
  return root;
}

inline Json to_json_value(const RawEquationSpec& raw) {
  Json root = Json::object();
  root["name"] = raw.name;
  root["threads"] = raw.threads;
  Json terms = Json::array();
  for (const auto& t : raw.equation.terms()) {
    terms.push_back({{"coefficient", t.coefficient.str()}, {"exponent", t.exponent}});
  }
  root["terms"] = std::move(terms);
  return root;
}

inline std::string serialize_machine_spec(const MachineSpec& spec) {
  return to_json_value(spec).dump(2) + "\n";
}

inline std::string serialize_raw_equation(const RawEquationSpec& raw) {
  return to_json_value(raw).dump(2) + "\n";
}

inline std::string serialize_model(const Model& model) {
  return std::visit([](const auto& m) { return to_json_value(m).dump(2) + "\n"; },
                    model);
}

}  // namespace ccap

#endif  // CCAP_INGEST_HPP_
