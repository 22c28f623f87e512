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

// Report rendering. json and csv are stable machine formats (json keeps
// full double precision); table is for people and prints three decimals.
// All number formatting goes through std::to_chars, so output does not
// depend on the process locale.

#ifndef CCAP_REPORT_HPP_
#define CCAP_REPORT_HPP_

#include <charconv>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccap/analysis.hpp"
#include "ccap/ingest.hpp"
#include "ccap/solver.hpp"

namespace ccap {

enum class Format { json, csv, table };

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "table") return Format::table;
  throw Error("unknown format '" + std::string(s) + "' (expected json, csv or table)");
}

struct EnumerationReport {
  std::int64_t t = 0;
  Coefficient count;
  // log2(count) / t; absent for t = 0.
  std::optional<double> log2_count_over_t;
  std::optional<double> capacity_bits_per_clock;
};

inline EnumerationReport make_enumeration_report(const CharacteristicEquation& eq,
                                                 std::int64_t t) {
  EnumerationReport r;
  r.t = t;
  r.count = enumerate_tasks(eq, t);
  if (t > 0) r.log2_count_over_t = log2_count(r.count) / static_cast<double>(t);
  r.capacity_bits_per_clock = solve_root(eq).capacity_bits_per_clock;
  return r;
}

namespace detail {

inline std::string format_number(double v, std::chars_format fmt,
                                 std::optional<int> precision) {
  char buf[64];
  auto res = precision ? std::to_chars(buf, buf + sizeof buf, v, fmt, *precision)
                       : std::to_chars(buf, buf + sizeof buf, v, fmt);
  return std::string(buf, res.ptr);
}

inline std::string fixed3(double v) {
  return format_number(v, std::chars_format::fixed, 3);
}
inline std::string sci3(double v) {
  return format_number(v, std::chars_format::scientific, 3);
}
inline std::string exact(double v) {
  return format_number(v, std::chars_format::general, std::nullopt);
}

// Left-aligned text table with two-space column gaps.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      if (width.size() < row.size()) width.resize(row.size(), 0);
      for (std::size_t i = 0; i < row.size(); ++i) {
        width[i] = std::max(width[i], row[i].size());
      }
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        line += row[i];
        if (i + 1 < row.size()) line.append(width[i] - row[i].size() + 2, ' ');
      }
      out += line + "\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline std::string csv_line(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + "\n";
}

}  // namespace detail

// --- JSON mappings -----------------------------------------------------------

inline void to_json(Json& j, const CapacityResult& r) {
  j = Json::object();
  j["root"] = r.root;
  j["capacity_bits_per_clock"] = r.capacity_bits_per_clock;
  j["iterations"] = r.iterations;
  j["bracket"] = Json::array({r.bracket_lo, r.bracket_hi});
  j["residual"] = r.residual;
  j["gcd_warning"] = r.gcd_warning ? Json(*r.gcd_warning) : Json(nullptr);
}

inline void from_json(const Json& j, CapacityResult& r) {
  r.root = j.at("root").get<double>();
  r.capacity_bits_per_clock = j.at("capacity_bits_per_clock").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.bracket_lo = j.at("bracket").at(0).get<double>();
  r.bracket_hi = j.at("bracket").at(1).get<double>();
  r.residual = j.at("residual").get<double>();
  const auto& g = j.at("gcd_warning");
  r.gcd_warning = g.is_null() ? std::nullopt : std::optional(g.get<std::int64_t>());
}

inline void to_json(Json& j, const MachineCapacity& m) {
  j = Json::object();
  j["name"] = m.name;
  j["capacity_bits_per_clock"] = m.capacity_bits_per_clock;
  if (m.bits_per_second) j["bits_per_second"] = *m.bits_per_second;
  Json groups = Json::array();
  for (const auto& g : m.groups) {
    Json e = Json::object();
    e["count"] = g.count;
    e["threads"] = g.core.threads;
    e["capacity_per_core"] = g.core.capacity_bits_per_clock;
    e["capacity"] = g.capacity_bits_per_clock;
    e["single_thread"] = g.core.single_thread;
    groups.push_back(std::move(e));
  }
  j["groups"] = std::move(groups);
}

inline void from_json(const Json& j, MachineCapacity& m) {
  m.name = j.at("name").get<std::string>();
  m.capacity_bits_per_clock = j.at("capacity_bits_per_clock").get<double>();
  m.bits_per_second.reset();
  if (j.contains("bits_per_second")) m.bits_per_second = j["bits_per_second"].get<double>();
  m.groups.clear();
  for (const auto& e : j.at("groups")) {
    GroupCapacity g;
    g.count = e.at("count").get<std::int64_t>();
    g.core.threads = e.at("threads").get<std::int64_t>();
    g.core.capacity_bits_per_clock = e.at("capacity_per_core").get<double>();
    g.capacity_bits_per_clock = e.at("capacity").get<double>();
    g.core.single_thread = e.at("single_thread").get<CapacityResult>();
    m.groups.push_back(std::move(g));
  }
}

inline void to_json(Json& j, const WhatIfReport& r) {
  j = Json::object();
  j["baseline_capacity"] = r.baseline_capacity;
  j["perturbed_capacity"] = r.perturbed_capacity;
  j["delta"] = r.delta;
  j["relative_change"] = r.relative_change;
  j["first_order_estimate"] = r.first_order_estimate;
}

inline void from_json(const Json& j, WhatIfReport& r) {
  r.baseline_capacity = j.at("baseline_capacity").get<double>();
  r.perturbed_capacity = j.at("perturbed_capacity").get<double>();
  r.delta = j.at("delta").get<double>();
  r.relative_change = j.at("relative_change").get<double>();
  r.first_order_estimate = j.at("first_order_estimate").get<double>();
}

inline void to_json(Json& j, const SweepPoint& p) {
  to_json(j, p.report);
  j["value"] = p.value;
}

inline void from_json(const Json& j, SweepPoint& p) {
  p.value = j.at("value").get<double>();
  from_json(j, p.report);
}

inline void to_json(Json& j, const ComparisonReport& r) {
  j = Json::object();
  j["baseline"] = r.baseline;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back(
        {{"name", e.name}, {"capacity", e.capacity}, {"relative", e.relative_to_baseline}});
  }
  j["entries"] = std::move(entries);
  Json regressions = Json::array();
  for (const auto& [from, to] : r.regressions) {
    regressions.push_back({{"predecessor", from}, {"successor", to}});
  }
  j["regressions"] = std::move(regressions);
}

inline void from_json(const Json& j, ComparisonReport& r) {
  r.baseline = j.at("baseline").get<std::string>();
  r.entries.clear();
  for (const auto& e : j.at("entries")) {
    r.entries.push_back({e.at("name").get<std::string>(), e.at("capacity").get<double>(),
                         e.at("relative").get<double>()});
  }
  r.regressions.clear();
  for (const auto& g : j.at("regressions")) {
    r.regressions.emplace_back(g.at("predecessor").get<std::string>(),
                               g.at("successor").get<std::string>());
  }
}

inline void to_json(Json& j, const ValidationReport& r) {
  j = Json::object();
  j["valid"] = r.ok();
  j["errors"] = r.errors;
  j["warnings"] = r.warnings;
}

inline void from_json(const Json& j, ValidationReport& r) {
  r.errors = j.at("errors").get<std::vector<std::string>>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
}

inline void to_json(Json& j, const EnumerationReport& r) {
  j = Json::object();
  j["t"] = r.t;
  j["count"] = r.count.str();
  j["log2_count_over_t"] = r.log2_count_over_t ? Json(*r.log2_count_over_t) : Json(nullptr);
  j["capacity_bits_per_clock"] =
      r.capacity_bits_per_clock ? Json(*r.capacity_bits_per_clock) : Json(nullptr);
}

inline void from_json(const Json& j, EnumerationReport& r) {
  r.t = j.at("t").get<std::int64_t>();
  r.count = Coefficient(j.at("count").get<std::string>());
  const auto& ratio = j.at("log2_count_over_t");
  r.log2_count_over_t = ratio.is_null() ? std::nullopt : std::optional(ratio.get<double>());
  const auto& cap = j.at("capacity_bits_per_clock");
  r.capacity_bits_per_clock = cap.is_null() ? std::nullopt : std::optional(cap.get<double>());
}

// --- serialize_report ----------------------------------------------------------

inline std::string serialize_report(const CapacityResult& r, Format format) {
  switch (format) {
    case Format::json:
      return Json(r).dump(2) + "\n";
    case Format::csv:
      return detail::csv_line({"root", "capacity_bits_per_clock", "iterations",
                               "bracket_lo", "bracket_hi", "residual", "gcd_warning"}) +
             detail::csv_line({detail::exact(r.root),
                               detail::exact(r.capacity_bits_per_clock),
                               std::to_string(r.iterations), detail::exact(r.bracket_lo),
                               detail::exact(r.bracket_hi), detail::exact(r.residual),
                               r.gcd_warning ? std::to_string(*r.gcd_warning) : ""});
    case Format::table: {
      detail::TextTable t({"root", "capacity", "iterations", "residual", "gcd"});
      t.add({detail::fixed3(r.root), detail::fixed3(r.capacity_bits_per_clock),
             std::to_string(r.iterations), detail::sci3(r.residual),
             r.gcd_warning ? std::to_string(*r.gcd_warning) : "1"});
      return t.render();
    }
  }
  return {};
}

inline std::string serialize_report(const MachineCapacity& m, Format format) {
  switch (format) {
    case Format::json:
      return Json(m).dump(2) + "\n";
    case Format::csv: {
      std::string out = detail::csv_line({"name", "group", "count", "threads", "root",
                                          "capacity_per_thread", "capacity_per_core",
                                          "group_capacity", "total_capacity"});
      for (std::size_t i = 0; i < m.groups.size(); ++i) {
        const auto& g = m.groups[i];
        out += detail::csv_line(
            {m.name, std::to_string(i), std::to_string(g.count),
             std::to_string(g.core.threads), detail::exact(g.core.single_thread.root),
             detail::exact(g.core.single_thread.capacity_bits_per_clock),
             detail::exact(g.core.capacity_bits_per_clock),
             detail::exact(g.capacity_bits_per_clock),
             detail::exact(m.capacity_bits_per_clock)});
      }
      return out;
    }
    case Format::table: {
      detail::TextTable t({"group", "count", "threads", "root", "per-thread", "per-core",
                           "capacity"});
      for (std::size_t i = 0; i < m.groups.size(); ++i) {
        const auto& g = m.groups[i];
        t.add({std::to_string(i), std::to_string(g.count), std::to_string(g.core.threads),
               detail::fixed3(g.core.single_thread.root),
               detail::fixed3(g.core.single_thread.capacity_bits_per_clock),
               detail::fixed3(g.core.capacity_bits_per_clock),
               detail::fixed3(g.capacity_bits_per_clock)});
      }
      std::string out = m.name + "\n" + t.render() + "total " +
                        detail::fixed3(m.capacity_bits_per_clock) + " bits/clock";
      if (m.bits_per_second) out += ", " + detail::sci3(*m.bits_per_second) + " bits/s";
      return out + "\n";
    }
  }
  return {};
}

inline std::string serialize_report(const WhatIfReport& r, Format format) {
  switch (format) {
    case Format::json:
      return Json(r).dump(2) + "\n";
    case Format::csv:
      return detail::csv_line({"baseline_capacity", "perturbed_capacity", "delta",
                               "relative_change", "first_order_estimate"}) +
             detail::csv_line({detail::exact(r.baseline_capacity),
                               detail::exact(r.perturbed_capacity), detail::exact(r.delta),
                               detail::exact(r.relative_change),
                               detail::exact(r.first_order_estimate)});
    case Format::table: {
      detail::TextTable t({"baseline", "perturbed", "delta", "relative", "first-order"});
      t.add({detail::fixed3(r.baseline_capacity), detail::fixed3(r.perturbed_capacity),
             detail::fixed3(r.delta), detail::sci3(r.relative_change),
             detail::fixed3(r.first_order_estimate)});
      return t.render();
    }
  }
  return {};
}

inline std::string serialize_report(std::span<const SweepPoint> points, Format format) {
  switch (format) {
    case Format::json: {
      Json j = Json::object();
      j["points"] = Json::array();
      for (const auto& p : points) j["points"].push_back(p);
      return j.dump(2) + "\n";
    }
    case Format::csv: {
      std::string out = detail::csv_line(
          {"value", "capacity", "delta", "relative_change", "first_order_estimate"});
      for (const auto& p : points) {
        out += detail::csv_line({detail::exact(p.value),
                                 detail::exact(p.report.perturbed_capacity),
                                 detail::exact(p.report.delta),
                                 detail::exact(p.report.relative_change),
                                 detail::exact(p.report.first_order_estimate)});
      }
      return out;
    }
    case Format::table: {
      detail::TextTable t({"value", "capacity", "delta", "relative"});
      for (const auto& p : points) {
        t.add({detail::exact(p.value), detail::fixed3(p.report.perturbed_capacity),
               detail::fixed3(p.report.delta), detail::sci3(p.report.relative_change)});
      }
      return t.render();
    }
  }
  return {};
}

inline std::vector<SweepPoint> parse_sweep_report(std::string_view text) {
  const Json j = Json::parse(text.begin(), text.end());
  return j.at("points").get<std::vector<SweepPoint>>();
}

inline std::string serialize_report(const ComparisonReport& r, Format format) {
  switch (format) {
    case Format::json:
      return Json(r).dump(2) + "\n";
    case Format::csv: {
      std::string out = detail::csv_line({"name", "capacity", "relative"});
      for (const auto& e : r.entries) {
        out += detail::csv_line(
            {e.name, detail::exact(e.capacity), detail::exact(e.relative_to_baseline)});
      }
      return out;
    }
    case Format::table: {
      detail::TextTable t({"name", "capacity", "relative"});
      for (const auto& e : r.entries) {
        t.add({e.name, detail::fixed3(e.capacity), detail::fixed3(e.relative_to_baseline)});
      }
      std::string out = t.render();
      for (const auto& [from, to] : r.regressions) {
        out += "regression: " + to + " has lower capacity than its predecessor " + from + "\n";
      }
      return out;
    }
  }
  return {};
}

inline std::string serialize_report(const ValidationReport& r, Format format) {
  switch (format) {
    case Format::json:
      return Json(r).dump(2) + "\n";
    case Format::csv: {
      std::string out = detail::csv_line({"severity", "message"});
      for (const auto& e : r.errors) out += "error," + e + "\n";
      for (const auto& w : r.warnings) out += "warning," + w + "\n";
      return out;
    }
    case Format::table: {
      std::string out = r.ok() ? "valid\n" : "invalid\n";
      for (const auto& e : r.errors) out += "error: " + e + "\n";
      for (const auto& w : r.warnings) out += "warning: " + w + "\n";
      return out;
    }
  }
  return {};
}

inline std::string serialize_report(const EnumerationReport& r, Format format) {
  const std::string ratio = r.log2_count_over_t ? detail::exact(*r.log2_count_over_t) : "";
  switch (format) {
    case Format::json:
      return Json(r).dump(2) + "\n";
    case Format::csv:
      return detail::csv_line({"t", "count", "log2_count_over_t"}) +
             detail::csv_line({std::to_string(r.t), r.count.str(), ratio});
    case Format::table: {
      detail::TextTable t({"t", "count", "log2(N)/t", "capacity"});
      t.add({std::to_string(r.t), r.count.str(),
             r.log2_count_over_t ? detail::fixed3(*r.log2_count_over_t) : "-",
             r.capacity_bits_per_clock ? detail::fixed3(*r.capacity_bits_per_clock) : "-"});
      return t.render();
    }
  }
  return {};
}

template <class T>
T parse_report(std::string_view text) {
  return Json::parse(text.begin(), text.end()).get<T>();
}

}  // namespace ccap

#endif  // CCAP_REPORT_HPP_
