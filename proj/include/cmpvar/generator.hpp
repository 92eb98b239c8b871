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

#pragma once

#include <optional>

#include "cmpvar/samplers.hpp"
#include "cmpvar/wallace.hpp"

namespace cmpvar {

/// Uniform front end over every sampler kind. Pair-producing baselines cache
/// their second value; the Wallace pool is built on first use.
template <typename Source>
class Generator {
 public:
  explicit Generator(SamplerConfig config,
                     std::size_t pool_size = kDefaultPoolSize)
      : config_(std::move(config)), pool_size_(pool_size) {
    if (sampler_scheme(config_.kind).has_value() != config_.table.has_value()) {
      throw contract_violation("table must be present exactly for comparison "
                               "samplers");
    }
  }

  const SamplerConfig& config() const noexcept { return config_; }

  Variate operator()(Source& src) {
    switch (config_.kind) {
      case SamplerKind::exp_vn:
        return exp_vn(src);
      case SamplerKind::exp_brent:
        return exp_brent(*config_.table, src, config_.recycling);
      case SamplerKind::exp_log:
        return {exp_log_baseline(src), 0};
      case SamplerKind::normal_forsythe:
        return normal_forsythe(*config_.table, src);
      case SamplerKind::normal_grand:
        return normal_grand(*config_.table, src, config_.recycling);
      case SamplerKind::normal_box_muller:
        return from_pair(src, [](Source& s) { return box_muller(s); });
      case SamplerKind::normal_polar:
        return from_pair(src, [](Source& s) { return polar(s); });
      case SamplerKind::normal_wallace:
        if (!pool_) pool_.emplace(pool_size_, src);
        return {pool_->next_normal(src), 0};
    }
    throw contract_violation("unknown sampler kind");
  }

 private:
  template <typename PairFn>
  Variate from_pair(Source& src, PairFn&& draw) {
    if (pending_) {
      const double v = *pending_;
      pending_.reset();
      return {v, 0};
    }
    const auto [first, second] = draw(src);
    pending_ = second;
    return {first, 0};
  }

  SamplerConfig config_;
  std::size_t pool_size_;
  std::optional<double> pending_;
  std::optional<NormalPool> pool_;
};

}  // namespace cmpvar
