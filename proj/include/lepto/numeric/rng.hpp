// Copyright 2026 The lepto authors
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

#ifndef LEPTO_NUMERIC_RNG_HPP
#define LEPTO_NUMERIC_RNG_HPP

#include <cstdint>
#include <random>

namespace lepto {

// Deterministic generator with substream derivation. Uniform variates are
// mapped from raw 64-bit output by a fixed shift, not through
// std::uniform_real_distribution, whose output is implementation-defined;
// reports must be bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Open (0, 1): never exactly 0 or 1, safe to feed quantile functions.
  double u01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection (unbiased).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  // Independent stream for a replicate/task index, stable under reordering.
  Rng substream(std::uint64_t idx) const {
    return Rng(mix(seed_ + 0x9E3779B97F4A7C15ULL * (idx + 1)));
  }

 private:
  // splitmix64 finalizer; decorrelates consecutive seeds.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace lepto

#endif  // LEPTO_NUMERIC_RNG_HPP
