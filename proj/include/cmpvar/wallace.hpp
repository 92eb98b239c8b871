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
// Pool-based normal generator. A vector of i.i.d. normals stays normal under
// any orthogonal map, so the pool is refreshed by mixing disjoint 4-blocks
// with a fixed orthogonal matrix instead of drawing new variates.
//
// Pass policy:
//   * one fresh word per pass picks a stride permutation i -> o + s*i (mod N)
//     that groups the pool into blocks;
//   * even passes apply Q, odd passes apply Q^T;
//   * the squared norm never changes, so emitted values are scaled by
//     sqrt(S / norm_sq) with S ~ chi^2(N) redrawn once per pass.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cmpvar/bitstream.hpp"
#include "cmpvar/interval_tables.hpp"
#include "cmpvar/samplers.hpp"

namespace cmpvar {

using Block4 = std::array<std::array<double, 4>, 4>;

/// Orthogonal, entries +-1/2, not symmetric.
inline constexpr Block4 kWallaceTransform = {{
    {0.5, 0.5, 0.5, 0.5},
    {0.5, 0.5, -0.5, -0.5},
    {0.5, -0.5, 0.5, -0.5},
    {-0.5, 0.5, 0.5, -0.5},
}};

inline constexpr std::size_t kDefaultPoolSize = 4096;
inline constexpr std::size_t kMinPoolSize = 256;

/// y = Q x, or y = Q^T x when `transpose`.
inline std::array<double, 4> apply_block(const Block4& q,
                                         const std::array<double, 4>& x,
                                         bool transpose) {
  std::array<double, 4> y{};
  for (int i = 0; i < 4; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) acc += (transpose ? q[j][i] : q[i][j]) * x[j];
    y[i] = acc;
  }
  return y;
}

class NormalPool {
 public:
  /// Fills N values from the dyadic normal generator.
  template <typename Source>
  NormalPool(std::size_t size, Source& src) {
    if (size < kMinPoolSize || size % 4 != 0) {
      throw contract_violation("pool size must be a multiple of 4 and >= " +
                               std::to_string(kMinPoolSize) + ", got " +
                               std::to_string(size));
    }
    table_ = build_normal_brent(
        static_cast<int>(std::min<unsigned>(src.word_bits(), kMaxTableLength)));
    values_.resize(size);
    for (double& v : values_) v = normal_grand(table_, src).value;
    norm_sq_ = squared_norm();
    draw_scale(src);
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::uint64_t pass_count() const noexcept { return pass_count_; }
  double norm_sq() const noexcept { return norm_sq_; }
  std::size_t read_cursor() const noexcept { return cursor_; }
  double scale() const noexcept { return scale_; }

  double squared_norm() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0,
                           [](double acc, double v) { return acc + v * v; });
  }

  /// One mixing pass over the whole pool. Costs one fresh word.
  template <typename Source>
  void refresh(Source& src) {
    const std::uint64_t n = values_.size();
    const std::uint64_t word = src.next_word();
    const std::uint64_t offset = word % n;
    std::uint64_t stride = ((word >> 20) % n) | 1u;
    while (std::gcd(stride, n) != 1) stride = (stride + 2) % n;
    const bool transpose = (pass_count_ % 2) == 1;
    for (std::uint64_t b = 0; b < n / 4; ++b) {
      std::array<std::size_t, 4> idx{};
      std::array<double, 4> x{};
      for (int j = 0; j < 4; ++j) {
        idx[j] = static_cast<std::size_t>((offset + stride * (4 * b + j)) % n);
        x[j] = values_[idx[j]];
      }
      const auto y = apply_block(kWallaceTransform, x, transpose);
      for (int j = 0; j < 4; ++j) values_[idx[j]] = y[j];
    }
    ++pass_count_;
  }

  /// Next pool value times the current pass scale; refreshes when exhausted.
  template <typename Source>
  double next_normal(Source& src) {
    if (cursor_ == values_.size()) {
      refresh(src);
      draw_scale(src);
      cursor_ = 0;
    }
    return values_[cursor_++] * scale_;
  }

 private:
  // Wilson-Hilferty chi-square(N) from one normal.
  template <typename Source>
  void draw_scale(Source& src) {
    const double n = static_cast<double>(values_.size());
    const double z = normal_grand(table_, src).value;
    const double c = 2.0 / (9.0 * n);
    const double root = 1.0 - c + z * std::sqrt(c);
    const double chi2 = n * root * root * root;
    scale_ = std::sqrt(chi2 / norm_sq_);
  }

  IntervalTable table_;
  std::vector<double> values_;
  std::uint64_t pass_count_ = 0;
  double norm_sq_ = 0.0;
  std::size_t cursor_ = 0;
  double scale_ = 1.0;
};

}  // namespace cmpvar
