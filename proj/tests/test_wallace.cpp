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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cmpvar/stat_verify.hpp"
#include "cmpvar/wallace.hpp"

namespace cmpvar {
namespace {

using Source = UniformSource<>;

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

TEST(WallaceTransform, IsOrthogonal) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double dot = 0.0;
      for (int r = 0; r < 4; ++r) dot += kWallaceTransform[r][i] * kWallaceTransform[r][j];
      EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-15);
    }
  }
  bool symmetric = true;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) symmetric &= kWallaceTransform[i][j] == kWallaceTransform[j][i];
  EXPECT_FALSE(symmetric);
}

TEST(WallaceTransform, UnitVectorStaysUnit) {
  for (bool transpose : {false, true}) {
    const auto y = apply_block(kWallaceTransform, {1.0, 0.0, 0.0, 0.0}, transpose);
    double norm = 0.0;
    for (double v : y) norm += v * v;
    EXPECT_EQ(norm, 1.0);
  }
}

TEST(NormalPool, InitialNormNearChiSquareMean) {
  Source src(61);
  const NormalPool pool(256, src);
  EXPECT_EQ(pool.size(), 256u);
  EXPECT_EQ(pool.pass_count(), 0u);
  EXPECT_NEAR(pool.norm_sq(), 256.0, 4.0 * std::sqrt(2.0 * 256.0));
  EXPECT_DOUBLE_EQ(pool.norm_sq(), pool.squared_norm());
}

TEST(NormalPool, RejectsBadSize) {
  Source src(62);
  EXPECT_THROW(NormalPool(252, src), contract_violation);
  EXPECT_THROW(NormalPool(258, src), contract_violation);
  EXPECT_THROW(NormalPool(1030, src), contract_violation);
}

TEST(NormalPool, DeterministicUnderSeed) {
  Source a(63), b(63);
  NormalPool pa(512, a), pb(512, b);
  for (int i = 0; i < 5000; ++i) ASSERT_EQ(pa.next_normal(a), pb.next_normal(b));
}

TEST(NormalPool, InitialPoolIsNormal) {
  Source src(64);
  const NormalPool pool(4096, src);
  const auto xs = sorted_copy(pool.values());
  EXPECT_TRUE(ks_test(xs, normal_cdf, 0.01).passed);
}

TEST(NormalPool, RefreshPreservesNorm) {
  Source src(65);
  NormalPool pool(4096, src);
  const double initial = pool.squared_norm();
  for (int pass = 0; pass < 1000; ++pass) {
    const double before = pool.squared_norm();
    pool.refresh(src);
    ASSERT_LE(std::abs(pool.squared_norm() - before) / before, 1e-12) << pass;
  }
  EXPECT_EQ(pool.pass_count(), 1000u);
  EXPECT_LT(std::abs(pool.squared_norm() - initial) / initial, 1e-9);
}

TEST(NormalPool, RefreshCostsOneWord) {
  Source src(66);
  NormalPool pool(1024, src);
  const auto before = src.draws();
  pool.refresh(src);
  EXPECT_EQ(src.draws() - before, 1u);
}

TEST(NormalPool, StaysNormalAfterRefreshes) {
  Source src(67);
  NormalPool pool(4096, src);
  for (int pass = 0; pass < 100; ++pass) pool.refresh(src);
  const auto xs = sorted_copy(pool.values());
  EXPECT_TRUE(ks_test(xs, normal_cdf, 0.01).passed);
}

TEST(NormalPool, EmittedStream) {
  constexpr std::size_t kCount = 1000000;
  Source src(68);
  NormalPool pool(kDefaultPoolSize, src);
  const auto start = src.draws();
  std::vector<double> xs(kCount);
  for (double& x : xs) x = pool.next_normal(src);
  const double per_value = double(src.draws() - start) / kCount;
  EXPECT_LT(per_value, 0.5);

  const auto m = moments(xs);
  const double n = double(kCount);
  EXPECT_NEAR(m.mean, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(m.variance, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m.skewness, 0.0, 5.0 * std::sqrt(6.0 / n));
  EXPECT_NEAR(m.excess_kurtosis, 0.0, 5.0 * std::sqrt(24.0 / n));

  std::sort(xs.begin(), xs.end());
  const auto r = ks_test(xs, normal_cdf, 0.01);
  EXPECT_TRUE(r.passed) << r.statistic << " vs " << r.critical_value;
}

TEST(NormalPool, CursorWrapsAndRefreshes) {
  Source src(69);
  NormalPool pool(256, src);
  for (int i = 0; i < 256; ++i) pool.next_normal(src);
  EXPECT_EQ(pool.read_cursor(), 256u);
  EXPECT_EQ(pool.pass_count(), 0u);
  pool.next_normal(src);
  EXPECT_EQ(pool.read_cursor(), 1u);
  EXPECT_EQ(pool.pass_count(), 1u);
}

}  // namespace
}  // namespace cmpvar
