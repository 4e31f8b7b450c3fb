// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_RNG_HPP
#define WAVEDIV_RNG_HPP

#include <cstdint>

namespace wavediv {

// SplitMix64 (Steele, Lea & Vigna): a 64-bit Weyl counter passed through a
// finalizer. Published reference sequence for seed 0 starts
// 0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) using the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline constexpr const char* kRngName = "splitmix64";

// Seed schedule: replicate r gets base ^ (r * golden-gamma), decorrelating
// streams deterministically.
inline std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t r) {
  return base ^ (r * 0x9E3779B97F4A7C15ULL);
}

}  // namespace wavediv

#endif  // WAVEDIV_RNG_HPP
