// Copyright 2026 The cmpvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// -----------------------------------------------------------------------------
//
// Interval subdivisions of [0, inf) for the exponential and half-normal
// densities. On interval k = [a_{k-1}, a_k) the exponent is shifted so that
//
//   exponential:  G_k(x) = x - a_{k-1}
//   half-normal:  G_k(x) = (x^2 - a_{k-1}^2) / 2
//
// stays inside [0, 1], which the comparison kernel requires.
//
// Dyadic tables (exp_brent, normal_brent) put mass 2^-k on interval k and need
// no stored probabilities; k comes from counting leading zero bits. The other
// two carry explicit selection probabilities.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cmpvar/bitstream.hpp"

namespace cmpvar {

enum class Scheme { exp_vn, exp_brent, normal_forsythe, normal_brent };

inline constexpr int kMaxTableLength = 64;

inline std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::exp_vn: return "exp_vn";
    case Scheme::exp_brent: return "exp_brent";
    case Scheme::normal_forsythe: return "normal_forsythe";
    case Scheme::normal_brent: return "normal_brent";
  }
  return "unknown";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::exp_vn, Scheme::exp_brent, Scheme::normal_forsythe,
                   Scheme::normal_brent}) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

/// sqrt(2/pi) * integral_x^inf exp(-t^2/2) dt
inline double half_normal_tail(double x) {
  if (!(x >= 0.0)) {
    throw contract_violation("half_normal_tail needs x >= 0");
  }
  return std::erfc(x / std::numbers::sqrt2);
}

class IntervalTable {
 public:
  Scheme scheme() const noexcept { return scheme_; }
  int size() const noexcept { return static_cast<int>(bounds_.size()) - 1; }
  bool dyadic() const noexcept {
    return scheme_ == Scheme::exp_brent || scheme_ == Scheme::normal_brent;
  }

  /// a_0 .. a_K
  std::span<const double> boundaries() const noexcept { return bounds_; }
  double lower(int k) const { return bounds_.at(k - 1); }
  double upper(int k) const { return bounds_.at(k); }

  /// Stored probabilities q_1..q_K; empty for dyadic tables.
  const std::optional<std::vector<double>>& select_probs() const noexcept {
    return probs_;
  }

  double selection_probability(int k) const {
    check_index(k);
    if (probs_) return (*probs_)[k - 1];
    return std::ldexp(1.0, -k);
  }

  /// Supremum of G_k over interval k.
  double max_exponent(int k) const {
    check_index(k);
    return gmax_[k - 1];
  }

  /// G_k(x). Inside the closed interval the result is held to [0, gmax_k],
  /// which only absorbs rounding in x*x at the endpoints.
  double shifted_exponent(int k, double x) const {
    check_index(k);
    double g;
    if (is_normal()) {
      g = 0.5 * (x * x - lower_sq_[k - 1]);
    } else {
      g = x - bounds_[k - 1];
    }
    if (x >= bounds_[k - 1] && x <= bounds_[k]) {
      g = std::clamp(g, 0.0, gmax_[k - 1]);
    }
    return g;
  }

  /// Interval index for a uniform in the cumulative table; clamped to K.
  int locate(double u) const {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const int k = static_cast<int>(it - cumulative_.begin()) + 1;
    return std::min(k, size());
  }

  friend bool operator==(const IntervalTable&, const IntervalTable&) = default;

 private:
  friend IntervalTable build_exp_brent(int);
  friend IntervalTable build_exp_vn(int);
  friend IntervalTable build_normal_forsythe(int);
  friend IntervalTable build_normal_brent(int);

  bool is_normal() const noexcept {
    return scheme_ == Scheme::normal_forsythe ||
           scheme_ == Scheme::normal_brent;
  }
  void check_index(int k) const {
    if (k < 1 || k > size()) {
      throw contract_violation("interval index " + std::to_string(k) +
                               " outside [1, " + std::to_string(size()) + "]");
    }
  }
  void finish() {
    if (probs_) {
      cumulative_.clear();
      double acc = 0.0;
      for (double q : *probs_) cumulative_.push_back(acc += q);
    }
  }

  Scheme scheme_ = Scheme::exp_brent;
  std::vector<double> bounds_;
  std::vector<double> lower_sq_;  // a_{k-1}^2, normal schemes only
  std::vector<double> gmax_;
  std::optional<std::vector<double>> probs_;
  std::vector<double> cumulative_;
};

namespace detail {

inline void check_table_length(int K) {
  if (K < 1 || K > kMaxTableLength) {
    throw contract_violation("table length K must be in [1, " +
                             std::to_string(kMaxTableLength) + "], got " +
                             std::to_string(K));
  }
}

/// Solves half_normal_tail(a) = 2^-k: bisection to 1e-10, then Newton on
/// log(tail) to 1e-13.
inline double invert_dyadic_tail(int k) {
  const double log_target = -k * std::numbers::ln2;
  const double target = std::ldexp(1.0, -k);
  double lo = 0.0;
  double hi = 40.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (half_normal_tail(mid) > target ? lo : hi) = mid;
  }
  const double density_scale = std::sqrt(2.0 / std::numbers::pi);
  double a = 0.5 * (lo + hi);
  for (int iter = 0; iter < 50; ++iter) {
    const double tail = half_normal_tail(a);
    const double f = std::log(tail) - log_target;
    const double df = -density_scale * std::exp(-0.5 * a * a) / tail;
    const double step = f / df;
    a -= step;
    if (std::abs(step) <= 1e-13) return a;
  }
  throw std::runtime_error("tail inversion did not converge for k = " +
                           std::to_string(k));
}

}  // namespace detail

/// a_k = k ln 2, mass 2^-k per interval.
inline IntervalTable build_exp_brent(int K) {
  detail::check_table_length(K);
  IntervalTable t;
  t.scheme_ = Scheme::exp_brent;
  for (int k = 0; k <= K; ++k) t.bounds_.push_back(k * std::numbers::ln2);
  t.gmax_.assign(K, std::numbers::ln2);
  return t;
}

/// a_k = k, q_k = (e - 1) / e^k.
inline IntervalTable build_exp_vn(int K) {
  detail::check_table_length(K);
  IntervalTable t;
  t.scheme_ = Scheme::exp_vn;
  std::vector<double> q;
  for (int k = 0; k <= K; ++k) t.bounds_.push_back(k);
  for (int k = 1; k <= K; ++k) {
    q.push_back(-std::expm1(-1.0) * std::exp(-(k - 1.0)));
  }
  t.gmax_.assign(K, 1.0);
  t.probs_ = std::move(q);
  t.finish();
  return t;
}

/// a_k = sqrt(2k - 1), so a_k^2 - a_{k-1}^2 = 2 past the first interval.
/// q_k is the half-normal mass of interval k.
inline IntervalTable build_normal_forsythe(int K) {
  detail::check_table_length(K);
  IntervalTable t;
  t.scheme_ = Scheme::normal_forsythe;
  t.bounds_.push_back(0.0);
  for (int k = 1; k <= K; ++k) t.bounds_.push_back(std::sqrt(2.0 * k - 1.0));
  std::vector<double> q;
  for (int k = 1; k <= K; ++k) {
    // Squares are odd integers, kept exact.
    t.lower_sq_.push_back(k == 1 ? 0.0 : 2.0 * k - 3.0);
    t.gmax_.push_back(k == 1 ? 0.5 : 1.0);
    q.push_back(half_normal_tail(t.bounds_[k - 1]) -
                half_normal_tail(t.bounds_[k]));
  }
  t.probs_ = std::move(q);
  t.finish();
  return t;
}

/// Half-normal mass of [a_{k-1}, a_k] is 2^-k.
inline IntervalTable build_normal_brent(int K) {
  detail::check_table_length(K);
  IntervalTable t;
  t.scheme_ = Scheme::normal_brent;
  t.bounds_.push_back(0.0);
  for (int k = 1; k <= K; ++k) {
    t.bounds_.push_back(detail::invert_dyadic_tail(k));
  }
  for (int k = 1; k <= K; ++k) {
    const double a = t.bounds_[k - 1];
    const double b = t.bounds_[k];
    t.lower_sq_.push_back(a * a);
    t.gmax_.push_back(0.5 * (b - a) * (b + a));
  }
  return t;
}

inline IntervalTable build_table(Scheme scheme, int K) {
  switch (scheme) {
    case Scheme::exp_vn: return build_exp_vn(K);
    case Scheme::exp_brent: return build_exp_brent(K);
    case Scheme::normal_forsythe: return build_normal_forsythe(K);
    case Scheme::normal_brent: return build_normal_brent(K);
  }
  throw contract_violation("unknown scheme");
}

/// Picks interval k with its selection probability.
template <typename Source>
int select_interval(const IntervalTable& table, Source& src,
                    Recycling recycling = Recycling::on) {
  if (table.dyadic()) {
    const int k = static_cast<int>(src.geometric_index(recycling));
    return std::min(k, table.size());
  }
  return table.locate(src.next_uniform());
}

/// Writes the table as `#scheme=<tag> K=<K>` followed by rows
/// `k a_{k-1} a_k q_k gmax_k` at 17 significant digits.
inline void write_table(std::ostream& out, const IntervalTable& table) {
  out << "#scheme=" << scheme_name(table.scheme()) << " K=" << table.size()
      << '\n';
  char buf[160];
  for (int k = 1; k <= table.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g %.17g\n", k,
                  table.lower(k), table.upper(k),
                  table.selection_probability(k), table.max_exponent(k));
    out << buf;
  }
}

}  // namespace cmpvar
