// Copyright 2026 The offmix Authors
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

#ifndef OFFMIX_RNG_HPP
#define OFFMIX_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace offmix {

// SplitMix64. Every random draw in the project goes through this generator so
// that results are bit-identical across platforms and standard libraries
// (std::shuffle and std::*_distribution are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw in [0, bound) via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [-1, 1).
  double next_signed() { return 2.0 * next_double() - 1.0; }

  // Standard normal via Box-Muller (one value per call; the pair's twin is
  // discarded to keep the stream position independent of call parity).
  double next_normal() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Stateless hash of a key tuple; used for seeded pseudo-random tables that
// must be addressable without materializing them.
inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c = 0) {
  Rng r(a ^ (b * 0xD6E8FEB86659FD93ULL) ^ (c * 0xA5A5A5A5A5A5A5A5ULL));
  return r.next_u64();
}

}  // namespace offmix

#endif  // OFFMIX_RNG_HPP
