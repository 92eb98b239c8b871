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
// The comparison kernel. Starting from u_1 = g, uniforms are drawn while they
// keep strictly decreasing:
//
//   g = u_1 > u_2 > ... > u_n <= u_{n+1}
//
// The run length n has Prob(n) = g^(n-1)/(n-1)! - g^n/n!, so n is odd with
// probability exp(-g). Accepting on odd n samples a density exp(-g(x)) on a
// bounded interval using nothing but comparisons.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "cmpvar/bitstream.hpp"

namespace cmpvar {

/// Runs longer than this have probability below 1/64! and signal a bad input.
inline constexpr int kMaxRunLength = 64;

struct RunResult {
  bool accepted = false;
  int n = 0;
  /// (u_n, u_{n+1}), with u_n <= u_{n+1}.
  std::pair<double, double> terminal_pair{};
  std::uint64_t uniforms_used = 0;
};

inline void require_unit_exponent(double g) {
  if (!(g >= 0.0 && g <= 1.0)) {
    throw contract_violation("exponent must lie in [0, 1], got " +
                             std::to_string(g));
  }
}

/// One descending-run test. Accepts with probability exp(-g).
template <typename Source>
RunResult run_test(double g, Source& src,
                   Recycling recycling = Recycling::off) {
  require_unit_exponent(g);
  double prev = g;
  int n = 1;
  for (;;) {
    const double u = src.next_uniform();
    if (u < prev) {
      prev = u;
      if (++n > kMaxRunLength) {
        throw std::runtime_error("run length exceeded " +
                                 std::to_string(kMaxRunLength));
      }
      continue;
    }
    if (recycling == Recycling::on) src.recycle_pair(prev, u);
    return RunResult{(n % 2) == 1, n, {prev, u},
                     static_cast<std::uint64_t>(n)};
  }
}

/// g^(n-1)/(n-1)! - g^n/n!
inline double run_length_pmf(double g, int n) {
  require_unit_exponent(g);
  if (n < 1) throw contract_violation("run length must be >= 1");
  double term = 1.0;  // g^(n-1)/(n-1)!
  for (int i = 1; i < n; ++i) term *= g / i;
  return term - term * g / n;
}

/// Sum of n * Prob(n); converges to exp(g).
inline double expected_run_length(double g) {
  require_unit_exponent(g);
  double sum = 0.0;
  double term = 1.0;  // g^(n-1)/(n-1)!
  for (int n = 1; n <= kMaxRunLength; ++n) {
    const double next = term * g / n;
    sum += n * (term - next);
    term = next;
    if (term == 0.0) break;
  }
  return sum;
}

/// Prob(n odd) = exp(-g).
inline double odd_parity_probability(double g) {
  require_unit_exponent(g);
  return std::exp(-g);
}

/// A density proportional to exp(-g(x)) on [lo, hi] with 0 <= g <= 1 there.
class DensitySpec {
 public:
  static constexpr int kAuditPoints = 10000;

  DensitySpec(std::function<double(double)> g, double lo, double hi)
      : g_(std::move(g)), lo_(lo), hi_(hi) {
    if (!(lo_ < hi_) || !std::isfinite(lo_) || !std::isfinite(hi_)) {
      throw contract_violation("density interval must satisfy lo < hi");
    }
    for (int i = 0; i < kAuditPoints; ++i) {
      const double x = lo_ + (hi_ - lo_) * i / (kAuditPoints - 1);
      const double v = g_(x);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw contract_violation("exponent leaves [0, 1] at x = " +
                                 std::to_string(x));
      }
    }
  }

  double operator()(double x) const { return g_(x); }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  std::function<double(double)> g_;
  double lo_;
  double hi_;
};

/// Draws w uniform on [lo, hi] until a run test on g(w) accepts.
/// Rejections redraw within the same interval.
template <typename Source>
double sample_density(const DensitySpec& spec, Source& src,
                      Recycling recycling = Recycling::off) {
  const double width = spec.hi() - spec.lo();
  for (;;) {
    const double w = spec.lo() + width * src.next_uniform();
    if (run_test(spec(w), src, recycling).accepted) return w;
  }
}

}  // namespace cmpvar
