// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Portable random streams. std::mt19937_64 output is fixed by the standard,
// but the <random> distributions are not, so doubles are derived here
// directly from the top 53 bits of each draw.

#pragma once

#include <cstdint>
#include <random>

namespace crowdbench {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Per-episode seed: splitmix64(splitmix64(seed) ^ index).
constexpr std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool operator==(const Rng &) const = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace crowdbench
