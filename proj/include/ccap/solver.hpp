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

#ifndef CCAP_SOLVER_HPP_
#define CCAP_SOLVER_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

#include "ccap/equation.hpp"

namespace ccap {

// Dominant root X0 of a characteristic equation and the capacity log2(X0)
// in bits per clock. `Real` is double for normal use; the solver is also
// instantiated with Boost.Multiprecision floats where extra digits matter.
template <class Real>
struct BasicCapacityResult {
  Real root{};
  Real capacity_bits_per_clock{};
  int iterations = 0;
  Real bracket_lo{};
  Real bracket_hi{};
  // gcd of the exponents when it exceeds 1.
  std::optional<std::int64_t> gcd_warning;
  // |LHS(root) - 1|
  Real residual{};

  friend bool operator==(const BasicCapacityResult&,
                         const BasicCapacityResult&) = default;
};

using CapacityResult = BasicCapacityResult<double>;

inline constexpr double kDefaultRelTol = 1e-13;

namespace detail {

// Natural log of an arbitrarily large positive integer.
inline double log_coefficient(const Coefficient& c) {
  const auto bits = boost::multiprecision::msb(c);
  if (bits < 1000) return std::log(c.convert_to<double>());
  const auto shift = bits - 60;
  const Coefficient top = c >> shift;
  return std::log(top.convert_to<double>()) +
         static_cast<double>(shift) * std::log(2.0);
}

template <class Real>
Real int_pow(Real base, std::int64_t n) {
  Real result = 1;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// Per-equation data reused across LHS evaluations. For double the terms are
// summed in log space, exp(ln c - tau ln x), so coefficients near 1e9 and
// roots near 1e7 with exponents up to ~20 neither overflow nor underflow.
// Multiprecision floats have exponent range to spare and are summed
// directly.
template <class Real>
class PreparedEquation {
 public:
  explicit PreparedEquation(const CharacteristicEquation& eq) {
    for (const auto& t : eq.terms()) {
      exponents_.push_back(t.exponent);
      if constexpr (std::is_floating_point_v<Real>) {
        values_.push_back(static_cast<Real>(log_coefficient(t.coefficient)));
      } else {
        values_.push_back(t.coefficient.template convert_to<Real>());
      }
    }
  }

  Real lhs(const Real& x) const {
    if constexpr (std::is_floating_point_v<Real>) {
      const Real lnx = std::log(x);
      Real sum = 0;
      for (std::size_t i = 0; i < values_.size(); ++i) {
        sum += std::exp(values_[i] - static_cast<Real>(exponents_[i]) * lnx);
      }
      return sum;
    } else {
      const Real inv = Real(1) / x;
      Real power = 1;
      std::int64_t reached = 0;
      Real sum = 0;
      for (std::size_t i = 0; i < values_.size(); ++i) {
        power *= int_pow(inv, exponents_[i] - reached);
        reached = exponents_[i];
        sum += values_[i] * power;
      }
      return sum;
    }
  }

  // Provable bracket: every term alone reaches 1 at c^(1/tau), so LHS >= 1
  // at the largest such point; LHS <= sum(c)/x <= 1 at x = sum(c).
  std::pair<Real, Real> bracket(const CharacteristicEquation& eq) const {
    using std::exp;
    using std::log;
    Real lo = 1;
    Coefficient total = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      Real candidate;
      if constexpr (std::is_floating_point_v<Real>) {
        candidate = std::exp(values_[i] / static_cast<Real>(exponents_[i]));
      } else {
        candidate = exp(log(values_[i]) / Real(exponents_[i]));
      }
      if (candidate > lo) lo = candidate;
      total += eq[i].coefficient;
    }
    Real hi;
    if constexpr (std::is_floating_point_v<Real>) {
      hi = boost::multiprecision::msb(total) < 1000
               ? total.template convert_to<Real>()
               : std::numeric_limits<Real>::max();
    } else {
      hi = total.template convert_to<Real>();
    }
    if (hi < lo) hi = lo;
    return {lo, hi};
  }

 private:
  std::vector<Real> values_;
  std::vector<std::int64_t> exponents_;
};

}  // namespace detail

template <class Real = double>
Real evaluate_lhs(const CharacteristicEquation& eq, const Real& x) {
  if (!(x > 0)) throw DomainError("evaluate_lhs requires x > 0");
  return detail::PreparedEquation<Real>(eq).lhs(x);
}

template <class Real = double>
Real capacity_from_root(const Real& root) {
  if (!(root >= 1)) {
    throw DomainError("root below 1 gives a negative capacity");
  }
  if constexpr (std::is_floating_point_v<Real>) {
    return std::log2(root);
  } else {
    using std::log;
    return log(root) / log(Real(2));
  }
}

// Bisection for the unique positive root of LHS(x) = 1. LHS is strictly
// decreasing on (0, inf), so the root inside the bracket is the dominant
// one. Stops once (hi - lo) <= rel_tol * hi.
template <class Real = double>
BasicCapacityResult<Real> solve_root(const CharacteristicEquation& eq,
                                     Real rel_tol = Real(kDefaultRelTol)) {
  if (!(rel_tol > 0)) throw DomainError("rel_tol must be positive");
  const detail::PreparedEquation<Real> prepared(eq);
  auto [lo, hi] = prepared.bracket(eq);

  BasicCapacityResult<Real> result;
  result.bracket_lo = lo;
  result.bracket_hi = hi;
  while (hi - lo > rel_tol * hi) {
    const Real mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    if (prepared.lhs(mid) > 1) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++result.iterations;
  }
  result.root = (lo + hi) / 2;
  result.capacity_bits_per_clock = capacity_from_root(result.root);
  using std::abs;
  result.residual = abs(prepared.lhs(result.root) - 1);
  if (const auto g = gcd_of_exponents(eq); g > 1) result.gcd_warning = g;
  return result;
}

namespace detail {

// dX0/dc for the coefficient of X^-exponent, by implicit differentiation of
// F(X, c) = sum c_j X^-tau_j - 1 at the known root. The exponent need not
// be present in the equation.
inline double root_sensitivity_at(const CharacteristicEquation& eq,
                                  double root, std::int64_t exponent) {
  const double lnx = std::log(root);
  double denom = 0;
  for (const auto& t : eq.terms()) {
    const double tau = static_cast<double>(t.exponent);
    denom += std::exp(log_coefficient(t.coefficient) + std::log(tau) -
                      (tau + 1) * lnx);
  }
  return std::exp(-static_cast<double>(exponent) * lnx) / denom;
}

}  // namespace detail

// Derivative of the dominant root with respect to the coefficient of the
// term at `term_index`.
inline double root_sensitivity(const CharacteristicEquation& eq,
                               std::size_t term_index,
                               double rel_tol = kDefaultRelTol) {
  if (term_index >= eq.size()) {
    throw UnknownTargetError("term index " + std::to_string(term_index) +
                             " out of range for " + std::to_string(eq.size()) +
                             "-term equation");
  }
  const auto solved = solve_root(eq, rel_tol);
  return detail::root_sensitivity_at(eq, solved.root, eq[term_index].exponent);
}

// Exact number of instruction sequences whose times sum to t:
// N(0) = 1, N(t) = sum_i c_i N(t - tau_i).
inline Coefficient enumerate_tasks(const CharacteristicEquation& eq,
                                   std::int64_t t) {
  if (t < 0) throw DomainError("enumerate_tasks requires t >= 0");
  const std::int64_t window = eq.terms().back().exponent + 1;
  std::vector<Coefficient> ring(static_cast<std::size_t>(window));
  auto slot = [&](std::int64_t s) -> Coefficient& {
    return ring[static_cast<std::size_t>(s % window)];
  };
  slot(0) = 1;
  for (std::int64_t s = 1; s <= t; ++s) {
    Coefficient n = 0;
    for (const auto& term : eq.terms()) {
      if (term.exponent > s) break;
      n += term.coefficient * slot(s - term.exponent);
    }
    slot(s) = std::move(n);
  }
  return slot(t);
}

// log2 of a non-negative integer; -inf for zero.
inline double log2_count(const Coefficient& n) {
  if (n <= 0) return -std::numeric_limits<double>::infinity();
  return detail::log_coefficient(n) / std::log(2.0);
}

}  // namespace ccap

#endif  // CCAP_SOLVER_HPP_
