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
// Metered uniform source: fixed-point uniforms, bit-pooled signs, leading-zero
// geometric indices and a store of recycled uniforms.

#pragma once

#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cmpvar {

/// Thrown when a documented precondition is violated.
class contract_violation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr unsigned kDefaultWordBits = 53;
// Fixed-point words must convert to double exactly.
inline constexpr unsigned kMaxWordBits = 53;

/// Whether leftover randomness is pushed back into the source for reuse.
enum class Recycling { off, on };

template <typename E>
concept FullWordEngine = std::uniform_random_bit_generator<E> &&
                         E::min() == 0 &&
                         E::max() == std::numeric_limits<std::uint64_t>::max();

/// A deterministic stream of w-bit uniforms with exact accounting.
///
/// `draws()` counts fresh words taken from the engine. Values handed out from
/// the recycled store are free. The store is last-in-first-out.
///
/// Not thread-safe; give every thread its own source.
template <FullWordEngine Engine = std::mt19937_64>
class UniformSource {
 public:
  using engine_type = Engine;

  explicit UniformSource(std::uint64_t seed,
                         unsigned word_bits = kDefaultWordBits)
      : UniformSource(Engine(seed), word_bits) {}

  UniformSource(Engine engine, unsigned word_bits)
      : engine_(std::move(engine)), word_bits_(word_bits) {
    if (word_bits_ == 0 || word_bits_ > kMaxWordBits) {
      throw contract_violation("word_bits must be in [1, " +
                               std::to_string(kMaxWordBits) + "], got " +
                               std::to_string(word_bits_));
    }
  }

  unsigned word_bits() const noexcept { return word_bits_; }
  std::uint64_t draws() const noexcept { return draws_; }
  std::size_t recycled_size() const noexcept { return recycled_.size(); }
  const std::vector<double>& recycled() const noexcept { return recycled_; }

  /// A fresh w-bit word from the engine, always counted.
  std::uint64_t next_word() {
    ++draws_;
    return engine_() >> (64 - word_bits_);
  }

  /// Fresh uniform in [0, 1), an exact multiple of 2^-w. Always counted.
  double fresh_uniform() { return to_unit(next_word()); }

  /// Recycled value if one is stored, otherwise a fresh uniform.
  double next_uniform() {
    if (!recycled_.empty()) {
      double u = recycled_.back();
      recycled_.pop_back();
      return u;
    }
    return fresh_uniform();
  }

  /// k = (leading zero bits) + 1, so Prob(k) = 2^-k for k < w; clamped to w.
  ///
  /// The word comes from the recycled store when possible. With recycling on,
  /// the w - k bits after the leading one become a new recycled uniform.
  unsigned geometric_index(Recycling recycling = Recycling::on) {
    std::uint64_t word;
    if (!recycled_.empty()) {
      word = from_unit(recycled_.back());
      recycled_.pop_back();
    } else {
      word = next_word();
    }
    if (word == 0) return word_bits_;
    const unsigned used = static_cast<unsigned>(std::bit_width(word));
    const unsigned k = word_bits_ - used + 1;
    const unsigned rest = used - 1;
    if (recycling == Recycling::on && rest > 0) {
      const std::uint64_t low = word & ((std::uint64_t{1} << rest) - 1);
      recycled_.push_back(std::ldexp(static_cast<double>(low), -static_cast<int>(rest)));
    }
    return k;
  }

  /// Pushes (u_next - u_n) / (1 - u_n), uniform on [0, 1) given u_n <= u_next.
  void recycle_pair(double u_n, double u_next) {
    if (!(u_n <= u_next) || !(u_next < 1.0) || u_n < 0.0) {
      throw contract_violation("recycle_pair needs 0 <= u_n <= u_next < 1");
    }
    if (u_n == 1.0) return;
    recycled_.push_back((u_next - u_n) / (1.0 - u_n));
  }

  void push_recycled(double u) {
    if (!(u >= 0.0 && u < 1.0)) {
      throw contract_violation("recycled value must lie in [0, 1)");
    }
    recycled_.push_back(u);
  }

  void clear_recycled() noexcept { recycled_.clear(); }

  /// One bit from a pooled word; a fresh word is drawn every w bits.
  bool next_bit() {
    if (bits_left_ == 0) {
      bit_pool_ = next_word();
      bits_left_ = word_bits_;
    }
    const bool bit = (bit_pool_ & 1u) != 0;
    bit_pool_ >>= 1;
    --bits_left_;
    return bit;
  }

  int random_sign() { return next_bit() ? 1 : -1; }

 private:
  double to_unit(std::uint64_t word) const {
    return std::ldexp(static_cast<double>(word), -static_cast<int>(word_bits_));
  }
  std::uint64_t from_unit(double u) const {
    return static_cast<std::uint64_t>(std::ldexp(u, static_cast<int>(word_bits_)));
  }

  Engine engine_;
  unsigned word_bits_;
  std::uint64_t draws_ = 0;
  std::vector<double> recycled_;
  std::uint64_t bit_pool_ = 0;
  unsigned bits_left_ = 0;
};

}  // namespace cmpvar
