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
// Exponential and normal generators built on the comparison kernel, plus the
// usual transcendental baselines.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "cmpvar/bitstream.hpp"
#include "cmpvar/comparison.hpp"
#include "cmpvar/interval_tables.hpp"

namespace cmpvar {

/// A generated value and the interval it was drawn from (0 if none).
struct Variate {
  double value = 0.0;
  int interval = 0;
};

namespace detail {

inline void require_scheme(const IntervalTable& table, Scheme expected) {
  if (table.scheme() != expected) {
    throw contract_violation("sampler needs a " +
                             std::string(scheme_name(expected)) +
                             " table, got " +
                             std::string(scheme_name(table.scheme())));
  }
}

/// Rejection sampling of exp(-G_k) on interval k. Rejections stay in k.
template <typename Source>
double sample_interval(const IntervalTable& table, int k, Source& src,
                       Recycling recycling) {
  const double lo = table.lower(k);
  const double width = table.upper(k) - lo;
  for (;;) {
    const double x = lo + width * src.next_uniform();
    if (run_test(table.shifted_exponent(k, x), src, recycling).accepted) {
      return x;
    }
  }
}

}  // namespace detail

/// Exp(1) over unit intervals. Each rejected trial bumps the integer part, so
/// interval selection costs nothing extra.
template <typename Source>
Variate exp_vn(Source& src) {
  for (int j = 0;; ++j) {
    const double w = src.next_uniform();
    if (run_test(w, src).accepted) return {j + w, j + 1};
  }
}

/// Exp(1) over intervals [(k-1) ln 2, k ln 2) picked by leading zero bits.
template <typename Source>
Variate exp_brent(const IntervalTable& table, Source& src,
                  Recycling recycling = Recycling::on) {
  detail::require_scheme(table, Scheme::exp_brent);
  const int k = select_interval(table, src, recycling);
  return {detail::sample_interval(table, k, src, recycling), k};
}

/// N(0, 1) on intervals a_k = sqrt(2k - 1) with a stored probability table.
template <typename Source>
Variate normal_forsythe(const IntervalTable& table, Source& src) {
  detail::require_scheme(table, Scheme::normal_forsythe);
  const int sign = src.random_sign();
  const int k = select_interval(table, src, Recycling::off);
  return {sign * detail::sample_interval(table, k, src, Recycling::off), k};
}

/// N(0, 1) on dyadic half-normal intervals. With recycling on, the bits left
/// after the leading-zero count and the (u_n, u_{n+1}) remainder of every run
/// are reused as the next uniforms.
template <typename Source>
Variate normal_grand(const IntervalTable& table, Source& src,
                     Recycling recycling = Recycling::on) {
  detail::require_scheme(table, Scheme::normal_brent);
  const int sign = src.random_sign();
  const int k = select_interval(table, src, recycling);
  return {sign * detail::sample_interval(table, k, src, recycling), k};
}

/// -ln(u), redrawing u = 0.
template <typename Source>
double exp_log_baseline(Source& src) {
  for (;;) {
    const double u = src.next_uniform();
    if (u > 0.0) return -std::log(u);
  }
}

/// Two independent N(0, 1) from two uniforms.
template <typename Source>
std::pair<double, double> box_muller(Source& src) {
  const double u1 = 1.0 - src.next_uniform();  // (0, 1]
  const double u2 = src.next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

/// Marsaglia's polar method.
template <typename Source>
std::pair<double, double> polar(Source& src) {
  for (;;) {
    const double v1 = 2.0 * src.next_uniform() - 1.0;
    const double v2 = 2.0 * src.next_uniform() - 1.0;
    const double s = v1 * v1 + v2 * v2;
    if (s >= 1.0 || s == 0.0) continue;
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    return {v1 * f, v2 * f};
  }
}

enum class SamplerKind {
  exp_vn,
  exp_brent,
  exp_log,
  normal_forsythe,
  normal_grand,
  normal_box_muller,
  normal_polar,
  normal_wallace,
};

inline constexpr std::array<SamplerKind, 8> kAllSamplers = {
    SamplerKind::exp_vn,          SamplerKind::exp_brent,
    SamplerKind::exp_log,         SamplerKind::normal_forsythe,
    SamplerKind::normal_grand,    SamplerKind::normal_box_muller,
    SamplerKind::normal_polar,    SamplerKind::normal_wallace,
};

/// Short CLI name.
inline std::string_view sampler_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::exp_vn: return "exp_vn";
    case SamplerKind::exp_brent: return "exp_brent";
    case SamplerKind::exp_log: return "exp_log";
    case SamplerKind::normal_forsythe: return "forsythe";
    case SamplerKind::normal_grand: return "grand";
    case SamplerKind::normal_box_muller: return "box_muller";
    case SamplerKind::normal_polar: return "polar";
    case SamplerKind::normal_wallace: return "wallace";
  }
  return "unknown";
}

inline bool is_normal_sampler(SamplerKind kind) {
  return kind != SamplerKind::exp_vn && kind != SamplerKind::exp_brent &&
         kind != SamplerKind::exp_log;
}

/// Accepts the short name, or `normal_<name>` for the normal samplers.
inline std::optional<SamplerKind> parse_sampler(std::string_view name) {
  constexpr std::string_view prefix = "normal_";
  for (SamplerKind kind : kAllSamplers) {
    if (name == sampler_name(kind)) return kind;
    if (is_normal_sampler(kind) && name.starts_with(prefix) &&
        name.substr(prefix.size()) == sampler_name(kind)) {
      return kind;
    }
  }
  return std::nullopt;
}

/// Interval scheme a comparison sampler runs on, if any.
inline std::optional<Scheme> sampler_scheme(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::exp_vn: return Scheme::exp_vn;
    case SamplerKind::exp_brent: return Scheme::exp_brent;
    case SamplerKind::normal_forsythe: return Scheme::normal_forsythe;
    case SamplerKind::normal_grand: return Scheme::normal_brent;
    default: return std::nullopt;
  }
}

struct SamplerConfig {
  SamplerKind kind = SamplerKind::normal_grand;
  std::optional<IntervalTable> table;
  Recycling recycling = Recycling::on;

  /// Default K is min(w, 64).
  static SamplerConfig make(SamplerKind kind,
                            int table_length = static_cast<int>(kDefaultWordBits),
                            Recycling recycling = Recycling::on) {
    SamplerConfig config{kind, std::nullopt, recycling};
    if (auto scheme = sampler_scheme(kind)) {
      config.table = build_table(*scheme, table_length);
    }
    return config;
  }
};

}  // namespace cmpvar
