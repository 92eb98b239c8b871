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
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cmpvar/comparison.hpp"
#include "cmpvar/stat_verify.hpp"
#include "oracles.hpp"

namespace cmpvar {
namespace {

constexpr std::uint64_t kTrials = 1000000;

// Feeds a strictly decreasing sequence, so every run keeps going.
struct DescendingSource {
  double next = 0.999;
  double next_uniform() { return next *= 0.5; }
  void recycle_pair(double, double) {}
};

TEST(RunTest, ZeroExponentAlwaysAcceptsImmediately) {
  UniformSource<> src(1);
  for (int i = 0; i < 10000; ++i) {
    const RunResult r = run_test(0.0, src);
    ASSERT_EQ(r.n, 1);
    ASSERT_TRUE(r.accepted);
    ASSERT_EQ(r.uniforms_used, 1u);
  }
}

TEST(RunTest, RejectsExponentOutsideUnitInterval) {
  UniformSource<> src(1);
  EXPECT_THROW(run_test(-0.01, src), contract_violation);
  EXPECT_THROW(run_test(1.01, src), contract_violation);
  EXPECT_THROW(run_test(std::nan(""), src), contract_violation);
}

TEST(RunTest, RunLengthCapIsEnforced) {
  DescendingSource src;
  EXPECT_THROW(run_test(1.0, src), std::runtime_error);
}

TEST(RunTest, ResultInvariants) {
  UniformSource<> src(2);
  UniformSource<> g_src(3);
  for (int i = 0; i < 100000; ++i) {
    const std::uint64_t before = src.draws();
    const RunResult r = run_test(g_src.fresh_uniform(), src);
    ASSERT_GE(r.n, 1);
    ASSERT_EQ(r.accepted, r.n % 2 == 1);
    ASSERT_LE(r.terminal_pair.first, r.terminal_pair.second);
    ASSERT_EQ(r.uniforms_used, static_cast<std::uint64_t>(r.n));
    ASSERT_EQ(src.draws() - before, r.uniforms_used);
  }
}

TEST(RunTest, RecyclingPushesTerminalRemainder) {
  UniformSource<> src(4);
  const RunResult r = run_test(0.8, src, Recycling::on);
  ASSERT_EQ(src.recycled_size(), 1u);
  const auto [un, next] = r.terminal_pair;
  EXPECT_DOUBLE_EQ(src.recycled().back(), (next - un) / (1.0 - un));
}

TEST(RunTest, AcceptanceCalibratedAcrossExponents) {
  UniformSource<> src(7);
  for (int step = 0; step <= 10; ++step) {
    const double g = step / 10.0;
    std::uint64_t accepted = 0;
    for (std::uint64_t i = 0; i < kTrials; ++i) accepted += run_test(g, src).accepted;
    EXPECT_TRUE(oracle::binomial_within(accepted, kTrials, std::exp(-g), 4.0))
        << "g = " << g << " rate " << double(accepted) / kTrials;
  }
}

TEST(RunTest, RunLengthTwoAtHalf) {
  UniformSource<> src(8);
  std::uint64_t twos = 0;
  for (std::uint64_t i = 0; i < kTrials; ++i) twos += run_test(0.5, src).n == 2;
  EXPECT_TRUE(oracle::binomial_within(twos, kTrials, 0.375, 4.0)) << twos;
}

TEST(RunTest, HistogramAtOneMatchesPmf) {
  UniformSource<> src(9);
  std::vector<std::uint64_t> counts(9, 0);  // n = 1..8 and n >= 9
  for (std::uint64_t i = 0; i < kTrials; ++i) {
    ++counts[std::min(run_test(1.0, src).n, 9) - 1];
  }
  std::vector<double> probs;
  double acc = 0.0;
  for (int n = 1; n <= 8; ++n) {
    probs.push_back(run_length_pmf(1.0, n));
    acc += probs.back();
  }
  probs.push_back(1.0 - acc);
  const auto report = chi_square_test(counts, probs, kTrials, 0.01);
  EXPECT_TRUE(report.passed) << report.statistic << " vs " << report.critical_value;
}

TEST(RunLengthPmf, ClosedFormValues) {
  EXPECT_EQ(run_length_pmf(0.0, 1), 1.0);
  EXPECT_EQ(run_length_pmf(1.0, 1), 0.0);
  EXPECT_NEAR(run_length_pmf(0.5, 2), 0.375, 1e-16);
  EXPECT_NEAR(run_length_pmf(0.5, 3), 0.10416666666666667, 1e-16);
  EXPECT_NEAR(run_length_pmf(0.5, 3), oracle::run_length_three_by_integration(0.5),
              1e-13);
  EXPECT_NEAR(run_length_pmf(0.9, 3), oracle::run_length_three_by_integration(0.9),
              1e-13);
  EXPECT_THROW(run_length_pmf(0.5, 0), contract_violation);
}

TEST(RunLengthPmf, PartialSumsTelescope) {
  for (double g : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
    double sum = 0.0;
    double tail = 1.0;  // g^N / N!
    for (int n = 1; n <= 20; ++n) {
      sum += run_length_pmf(g, n);
      tail *= g / n;
      ASSERT_NEAR(sum, 1.0 - tail, 1e-15) << "g = " << g << " N = " << n;
    }
  }
}

TEST(ExpectedRunLength, SeriesMatchesExponential) {
  EXPECT_DOUBLE_EQ(expected_run_length(0.0), 1.0);
  EXPECT_NEAR(expected_run_length(1.0), std::numbers::e, 1e-14);
  for (double g = 0.0; g <= 1.0; g += 0.05) {
    EXPECT_NEAR(expected_run_length(g), std::exp(g), 1e-14);
  }
}

TEST(ExpectedRunLength, MonteCarloAtPointSeven) {
  const double g = 0.7;
  // Var(n) from the pmf series.
  double second = 0.0;
  for (int n = 1; n <= 40; ++n) second += double(n) * n * run_length_pmf(g, n);
  const double mean = std::exp(g);
  const double sd = std::sqrt(second - mean * mean);
  UniformSource<> src(10);
  double total = 0.0;
  for (std::uint64_t i = 0; i < kTrials; ++i) total += run_test(g, src).n;
  EXPECT_NEAR(total / kTrials, mean, 4.0 * sd / std::sqrt(double(kTrials)));
}

TEST(OddParity, AlternatingSeriesAgrees) {
  EXPECT_EQ(odd_parity_probability(0.0), 1.0);
  EXPECT_NEAR(odd_parity_probability(1.0), 0.36787944117144233, 1e-16);
  for (double g : {0.25, 0.5, 1.0}) {
    double odd20 = 0.0, odd30 = 0.0;
    for (int n = 1; n <= 30; n += 2) {
      if (n <= 20) odd20 += run_length_pmf(g, n);
      odd30 += run_length_pmf(g, n);
    }
    EXPECT_NEAR(odd20, odd_parity_probability(g), 1e-12) << g;
    EXPECT_NEAR(odd30, odd_parity_probability(g), 1e-12) << g;
  }
}

TEST(DensitySpec, AuditRejectsOutOfRangeExponent) {
  EXPECT_THROW(DensitySpec([](double x) { return 2.0 * x; }, 0.0, 1.0),
               contract_violation);
  EXPECT_THROW(DensitySpec([](double x) { return x - 0.5; }, 0.0, 1.0),
               contract_violation);
  EXPECT_THROW(DensitySpec([](double) { return 0.0; }, 1.0, 1.0),
               contract_violation);
  EXPECT_NO_THROW(DensitySpec([](double x) { return x; }, 0.0, 1.0));
}

TEST(SampleDensity, ZeroExponentIsUniformAndNeverRejects) {
  const DensitySpec flat([](double) { return 0.0; }, 2.0, 5.0);
  UniformSource<> src(12);
  std::vector<double> xs(100000);
  for (double& x : xs) x = sample_density(flat, src);
  EXPECT_EQ(src.draws(), 2 * xs.size());  // one w and one u_2 per sample
  std::sort(xs.begin(), xs.end());
  EXPECT_GE(xs.front(), 2.0);
  EXPECT_LE(xs.back(), 5.0);
  const auto report = ks_test(xs, [](double x) { return (x - 2.0) / 3.0; }, 0.01);
  EXPECT_TRUE(report.passed) << report.statistic;
}

TEST(SampleDensity, TruncatedExponential) {
  const double hi = std::numbers::ln2;
  const DensitySpec spec([](double x) { return x; }, 0.0, hi);
  UniformSource<> src(13);
  std::vector<double> xs(kTrials);
  for (double& x : xs) x = sample_density(spec, src);
  std::sort(xs.begin(), xs.end());
  const double norm = 1.0 - std::exp(-hi);
  const auto report =
      ks_test(xs, [&](double x) { return (1.0 - std::exp(-x)) / norm; }, 0.01);
  EXPECT_TRUE(report.passed) << report.statistic << " vs " << report.critical_value;
}

TEST(SampleDensity, HalfGaussianOnUnitInterval) {
  const DensitySpec spec([](double x) { return 0.5 * x * x; }, 0.0, 1.0);
  constexpr int kBins = 20;
  const auto density = [](double t) { return std::exp(-0.5 * t * t); };
  const double total = oracle::integrate(density, 0.0, 1.0);
  std::vector<double> probs;
  for (int b = 0; b < kBins; ++b) {
    probs.push_back(oracle::integrate(density, double(b) / kBins,
                                      double(b + 1) / kBins) / total);
  }
  UniformSource<> src(14);
  std::vector<std::uint64_t> counts(kBins, 0);
  for (std::uint64_t i = 0; i < kTrials; ++i) {
    const double x = sample_density(spec, src);
    ++counts[std::min(int(x * kBins), kBins - 1)];
  }
  const auto report = chi_square_test(counts, probs, kTrials, 0.01);
  EXPECT_TRUE(report.passed) << report.statistic << " vs " << report.critical_value;
}

TEST(SampleDensity, SeedIndependence) {
  const DensitySpec spec([](double x) { return x * x * x; }, 0.0, 1.0);
  UniformSource<> a(100), b(200);
  std::vector<double> xa(100000), xb(100000);
  for (double& x : xa) x = sample_density(spec, a);
  for (double& x : xb) x = sample_density(spec, b);
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  EXPECT_TRUE(ks_two_sample(xa, xb, 0.01).passed);
}

}  // namespace
}  // namespace cmpvar
