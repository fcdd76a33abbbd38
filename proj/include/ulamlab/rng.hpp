// Copyright 2026 The UlamLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// \file rng.hpp
/// Counter-based, splittable random stream used by every instance generator.
///
/// Philox4x32-10 (Salmon, Moraes, Dror, Shaw, SC'11). The 64-bit seed is the
/// key; the 128-bit counter is (stream id, block index). Splitting a stream
/// hashes (stream id, child id) into a fresh stream id under the same key, so
/// a child's output depends only on the seed and the path of split ids.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace ulamlab {

inline constexpr std::string_view kRngName = "philox4x32-10/ulamlab-v1";

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Seed of the i-th child in a family rooted at `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) {
  return mix64(seed ^ mix64(i + 0x3c6ef372fe94f82aull));
}

using PhiloxBlock = std::array<std::uint32_t, 4>;

/// One Philox4x32-10 block: 10 rounds over `ctr` keyed by `key`.
constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Independent child stream. Does not advance this stream.
  Rng split(std::uint64_t child) const {
    return Rng(seed_, mix64(stream_ ^ mix64(child + 0x632be59bd9b4e019ull)));
  }

  std::uint64_t next_u64() {
    if (cursor_ == 2) refill();
    const std::uint64_t hi = buffer_[2 * cursor_];
    const std::uint64_t lo = buffer_[2 * cursor_ + 1];
    ++cursor_;
    return (hi << 32) | lo;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }

  /// Standard normal by Box-Muller; uses two uniforms per draw.
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }

 private:
  void refill() {
    const PhiloxBlock ctr = {static_cast<std::uint32_t>(block_),
                             static_cast<std::uint32_t>(block_ >> 32),
                             static_cast<std::uint32_t>(stream_),
                             static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = philox4x32_10(ctr, {static_cast<std::uint32_t>(seed_),
                                  static_cast<std::uint32_t>(seed_ >> 32)});
    ++block_;
    cursor_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxBlock buffer_{};
  int cursor_ = 2;
};

}  // namespace ulamlab
