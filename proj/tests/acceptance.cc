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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace {

using namespace ccap;
using ccap::testing::fixture_equation;
using ccap::testing::load_fixture;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <typename T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome toy_pipeline() {
  const auto start = std::chrono::steady_clock::now();
  const auto spec = std::get<MachineSpec>(load_fixture("toy.json"));
  const auto& core = spec.core_groups.at(0).core;
  std::multiset<std::pair<std::string, std::int64_t>> got;
  for (const auto& t : expand_core(core)) got.insert({t.coefficient.str(), t.exponent});
  const std::multiset<std::pair<std::string, std::int64_t>> want = {
      {"64", 1}, {"64", 2}, {"64", 5}, {"128", 2}, {"2048", 7}};
  const auto r = solve_root(build_equation(core));
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = got == want && std::abs(r.root - 66.871) <= 0.01 &&
           std::abs(r.capacity_bits_per_clock - 6.06) <= 0.01 && elapsed < 1.0;
  o.detail = (Detail() << "terms " << (got == want ? "match" : "differ") << ", X0=" << r.root
                       << ", C=" << r.capacity_bits_per_clock << ", " << elapsed << " s")
                 .str();
  return o;
}

Outcome m3_capacity() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = solve_root(fixture_equation("m3.json"));
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = std::abs(r.capacity_bits_per_clock - 25.2) <= 0.01 * 25.2 && elapsed < 1.0;
  o.detail = (Detail() << "C=" << r.capacity_bits_per_clock << ", " << elapsed << " s").str();
  return o;
}

Outcome a57_capacity() {
  const double m3 = solve_root(fixture_equation("m3.json")).capacity_bits_per_clock;
  const double a57 = solve_root(fixture_equation("a57.json")).capacity_bits_per_clock;
  const double increase = a57 / m3 - 1;
  Outcome o;
  o.pass = std::abs(a57 - 29.79) <= 0.005 * 29.79 && std::abs(increase - 0.18) <= 0.01;
  o.detail = (Detail() << "C=" << a57 << ", increase over m3 " << 100 * increase << "%").str();
  return o;
}

Outcome root_to_capacity() {
  const double m3 = capacity_from_root(3.9e7);
  const double a57 = capacity_from_root(9.3e8);
  Outcome o;
  o.pass = std::abs(m3 - 25.2) <= 0.001 * 25.2 && std::abs(a57 - 29.79) <= 0.001 * 29.79;
  o.detail = (Detail() << "log2(3.9e7)=" << m3 << ", log2(9.3e8)=" << a57).str();
  return o;
}

Outcome additivity() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> cores(1, 8);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto eq = ccap::testing::random_equation(rng);
    const auto core = ccap::testing::core_for_equation(eq);
    const std::int64_t n = cores(rng);
    const double single = machine_capacity(MachineSpec{"one", {{core, 1}}, std::nullopt}).capacity_bits_per_clock;
    const double many = machine_capacity(MachineSpec{"many", {{core, n}}, std::nullopt}).capacity_bits_per_clock;
    worst = std::max(worst, std::abs(many - static_cast<double>(n) * single));
  }
  Outcome o;
  o.pass = worst <= 1e-12;
  o.detail = (Detail() << "max |C(n) - n*C(1)| = " << worst << " over 100 machines").str();
  return o;
}

Outcome gcd_scaling() {
  std::mt19937_64 rng(2);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto eq = ccap::testing::random_equation(rng);
    const double base = solve_root(eq).capacity_bits_per_clock;
    for (std::int64_t g : {2, 3, 5}) {
      std::vector<Term> scaled;
      for (const auto& t : eq.terms()) scaled.push_back({t.coefficient, t.exponent * g});
      const double c = solve_root(canonicalize(scaled)).capacity_bits_per_clock;
      worst = std::max(worst, std::abs(c - base / static_cast<double>(g)));
    }
  }
  Outcome o;
  o.pass = worst <= 1e-9;
  o.detail = (Detail() << "max |C(g) - C/g| = " << worst << " over 300 cases").str();
  return o;
}

Outcome sensitivity_gradient() {
  double worst = 0;
  std::size_t checked = 0;
  for (const char* name : {"m3.json", "a57.json"}) {
    const auto eq = fixture_equation(name);
    for (std::size_t i = 0; i < eq.size(); ++i) {
      const double analytic = root_sensitivity(eq, i);
      const double fd = ccap::testing::finite_difference_sensitivity(eq, i);
      worst = std::max(worst, std::abs(analytic - fd) / std::abs(fd));
      ++checked;
    }
  }
  Outcome o;
  o.pass = worst <= 1e-6;
  o.detail =
      (Detail() << "max relative error " << worst << " over " << checked << " terms").str();
  return o;
}

Outcome enumeration_convergence() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0;
  for (const auto& eq : {ccap::testing::toy_equation(), fixture_equation("golden-ratio.json")}) {
    const double c = solve_root(eq).capacity_bits_per_clock;
    for (std::int64_t t : {2000, 3000, 4000, 6000, 8000}) {
      const double rate = log2_count(enumerate_tasks(eq, t)) / static_cast<double>(t);
      worst = std::max(worst, std::abs(rate - c));
    }
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = worst < 0.01 && elapsed < 5.0;
  o.detail = (Detail() << "max |log2 N(t)/t - C| = " << worst
                       << " for t in {2000..8000}, " << elapsed << " s")
                 .str();
  return o;
}

Outcome diminishing_returns() {
  const Model toy{ccap::testing::toy_machine()};
  Outcome o;

  // Register-file doubling.
  const std::vector<double> factors = {1, 2, 4, 8, 16};
  const auto regs = sweep(toy, [](double f) { return Perturbation{ScaleRegisterFile{"r", f}}; },
                          factors);
  std::vector<double> caps;
  for (const auto& p : regs) caps.push_back(p.report.perturbed_capacity);
  bool increasing = true;
  bool shrinking = true;
  Detail d;
  d << "registers C=";
  for (std::size_t i = 0; i < caps.size(); ++i) {
    d << (i ? "," : "") << caps[i];
    if (i > 0 && !(caps[i] > caps[i - 1])) increasing = false;
    if (i > 1 && !(caps[i] - caps[i - 1] < caps[i - 1] - caps[i - 2])) shrinking = false;
  }
  d << " (increasing " << (increasing ? "yes" : "no") << ", increments shrinking "
    << (shrinking ? "yes" : "no") << ", slope per added register ";
  bool concave = true;
  for (std::size_t i = 1; i < caps.size(); ++i) {
    const double slope = (caps[i] - caps[i - 1]) / (factors[i] - factors[i - 1]);
    if (i > 1) {
      const double prev = (caps[i - 1] - caps[i - 2]) / (factors[i - 1] - factors[i - 2]);
      if (!(slope < prev)) concave = false;
    }
  }
  d << (concave ? "concave" : "not concave") << ")";

  // A slow instruction of growing latency.
  const std::vector<double> latencies = {3, 5, 10, 20};
  const auto slow = sweep(toy,
                          [](double tau) {
                            return Perturbation{AddInstructionClass{
                                {"slow", {OperandSpec{ImmediateOperand{2048}}},
                                 static_cast<std::int64_t>(tau)}}};
                          },
                          latencies);
  bool slow_shrinking = true;
  d << "; slow-term deltas=";
  for (std::size_t i = 0; i < slow.size(); ++i) {
    d << (i ? "," : "") << slow[i].report.delta;
    if (i > 0 && !(slow[i].report.delta < slow[i - 1].report.delta)) slow_shrinking = false;
  }
  const double tail = slow.back().report.relative_change;
  d << " (relative at 20 cycles " << tail << ")";

  o.pass = increasing && shrinking && slow_shrinking && tail < 1e-3;
  o.detail = d.str();
  return o;
}

Outcome regression_detection() {
  const std::vector<NamedCapacity> results = {{"P3", 42.021}, {"P4", 39.657}};
  const std::vector<std::string> lineage = {"P3", "P4"};
  const auto report = compare(results, "P3", lineage);
  double relative = 0;
  for (const auto& e : report.entries) {
    if (e.name == "P4") relative = e.relative_to_baseline;
  }
  Outcome o;
  o.pass = report.regressions.size() == 1 && report.regressions[0].first == "P3" &&
           report.regressions[0].second == "P4" && std::abs(relative - 0.9437) <= 1e-4;
  o.detail = (Detail() << report.regressions.size() << " regression(s), P4/P3=" << relative).str();
  return o;
}

Outcome coefficient_monotonicity() {
  std::mt19937_64 rng(11);
  int violations = 0;
  double worst_residual = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto eq = ccap::testing::random_equation(rng);
    std::uniform_int_distribution<std::size_t> pick(0, eq.size() - 1);
    const std::size_t k = pick(rng);
    const auto base = solve_root(eq);
    const auto bumped = solve_root(ccap::testing::with_coefficient(eq, k, eq[k].coefficient + 1));
    if (!(bumped.capacity_bits_per_clock > base.capacity_bits_per_clock)) ++violations;
    worst_residual = std::max({worst_residual, std::abs(base.residual), std::abs(bumped.residual)});
  }
  Outcome o;
  o.pass = violations == 0 && worst_residual <= 1e-9;
  o.detail = (Detail() << violations << " violations in 1000 equations, max residual "
                       << worst_residual)
                 .str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"toy machine end to end", toy_pipeline},
      {"m3 capacity", m3_capacity},
      {"a57 capacity and increase over m3", a57_capacity},
      {"root to capacity conversion", root_to_capacity},
      {"additivity over identical cores", additivity},
      {"latency gcd scaling", gcd_scaling},
      {"root sensitivity against finite differences", sensitivity_gradient},
      {"enumeration converges to capacity", enumeration_convergence},
      {"diminishing returns", diminishing_returns},
      {"regression detection", regression_detection},
      {"coefficient monotonicity", coefficient_monotonicity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
