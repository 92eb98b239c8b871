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
// Goodness-of-fit tests, sample moments and the uniform-consumption meter.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "cmpvar/bitstream.hpp"
#include "cmpvar/generator.hpp"
#include "cmpvar/samplers.hpp"

namespace cmpvar {

struct TestReport {
  std::string test_name;
  double statistic = 0.0;
  double critical_value = 0.0;
  std::uint64_t n = 0;
  bool passed = false;
};

inline double exponential_cdf(double x) {
  return x <= 0.0 ? 0.0 : -std::expm1(-x);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Asymptotic Kolmogorov constant: sqrt(-ln(alpha/2) / 2); 1.628 at 0.01.
inline double ks_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw contract_violation("alpha must lie in (0, 1)");
  }
  return std::sqrt(-0.5 * std::log(0.5 * alpha));
}

inline double chi_square_critical_value(double alpha, double dof) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw contract_violation("alpha must lie in (0, 1)");
  }
  const boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

/// One-sample Kolmogorov-Smirnov test on sorted samples.
template <typename Cdf>
TestReport ks_test(std::span<const double> sorted, Cdf&& cdf, double alpha,
                   std::string name = "ks") {
  if (sorted.empty()) throw contract_violation("ks_test needs samples");
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw contract_violation("ks_test needs sorted samples");
  }
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double crit = ks_coefficient(alpha) / std::sqrt(n);
  return {std::move(name), d, crit, sorted.size(), d < crit};
}

/// Two-sample Kolmogorov-Smirnov test on sorted samples.
inline TestReport ks_two_sample(std::span<const double> a,
                                std::span<const double> b, double alpha,
                                std::string name = "ks2") {
  if (a.empty() || b.empty()) throw contract_violation("ks_two_sample needs samples");
  if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end())) {
    throw contract_violation("ks_two_sample needs sorted samples");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double crit = ks_coefficient(alpha) * std::sqrt((na + nb) / (na * nb));
  return {std::move(name), d, crit, a.size() + b.size(), d < crit};
}

/// Pearson chi-square. Bins whose expected count is below 5 are merged with
/// their right neighbours; a short remainder joins the last bin.
inline TestReport chi_square_test(std::span<const std::uint64_t> observed,
                                  std::span<const double> expected,
                                  std::uint64_t n, double alpha,
                                  std::string name = "chi2") {
  if (observed.size() != expected.size() || observed.empty()) {
    throw contract_violation("observed and expected must be the same size");
  }
  double total_p = 0.0;
  std::uint64_t total_obs = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (!(expected[i] >= 0.0)) throw contract_violation("negative probability");
    total_p += expected[i];
    total_obs += observed[i];
  }
  if (std::abs(total_p - 1.0) > 1e-6) {
    throw contract_violation("expected probabilities must sum to 1");
  }
  if (total_obs != n) throw contract_violation("observed counts must sum to n");

  constexpr double kMinExpected = 5.0;
  const double dn = static_cast<double>(n);
  std::vector<std::pair<double, double>> bins;  // (observed, expected count)
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    obs_acc += static_cast<double>(observed[i]);
    exp_acc += expected[i] * dn;
    if (exp_acc >= kMinExpected) {
      bins.emplace_back(obs_acc, exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(obs_acc, exp_acc);
    } else {
      bins.back().first += obs_acc;
      bins.back().second += exp_acc;
    }
  }
  if (bins.size() < 2) {
    throw contract_violation("chi-square needs at least two bins after merging");
  }
  double stat = 0.0;
  for (const auto& [o, e] : bins) stat += (o - e) * (o - e) / e;
  const double crit =
      chi_square_critical_value(alpha, static_cast<double>(bins.size() - 1));
  return {std::move(name), stat, crit, n, stat < crit};
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

inline Moments moments(std::span<const double> xs) {
  if (xs.size() < 2) throw contract_violation("moments need at least two samples");
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  Moments m;
  m.mean = mean;
  m.variance = m2 / (n - 1.0);
  if (m2 > 0.0) {
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

struct ConsumptionReport {
  std::string sampler_kind;
  std::uint64_t samples = 0;
  std::uint64_t uniforms = 0;
  double mean_per_sample = 0.0;
  double ci95_halfwidth = 0.0;
};

inline constexpr std::uint64_t kMinConsumptionSamples = 100000;

/// Fresh words consumed per output on a freshly seeded source.
template <FullWordEngine Engine = std::mt19937_64>
ConsumptionReport measure_consumption(const SamplerConfig& config,
                                      std::uint64_t n, std::uint64_t seed,
                                      unsigned word_bits = kDefaultWordBits) {
  if (n < kMinConsumptionSamples) {
    throw contract_violation("consumption needs at least " +
                             std::to_string(kMinConsumptionSamples) +
                             " samples");
  }
  using Source = UniformSource<Engine>;
  Source src(seed, word_bits);
  Generator<Source> gen(config);
  const std::uint64_t start = src.draws();
  double sum_sq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t before = src.draws();
    (void)gen(src);
    const double cost = static_cast<double>(src.draws() - before);
    sum_sq += cost * cost;
  }
  ConsumptionReport r;
  r.sampler_kind = std::string(sampler_name(config.kind));
  r.samples = n;
  r.uniforms = src.draws() - start;
  const double dn = static_cast<double>(n);
  r.mean_per_sample = static_cast<double>(r.uniforms) / dn;
  const double var =
      std::max(0.0, (sum_sq - dn * r.mean_per_sample * r.mean_per_sample) /
                        (dn - 1.0));
  r.ci95_halfwidth = 1.96 * std::sqrt(var / dn);
  return r;
}

}  // namespace cmpvar
