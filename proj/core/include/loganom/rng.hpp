#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace loganom {

// All randomness in the library flows through these helpers so that results
// are reproducible bit-for-bit across platforms. Standard-library
// distributions are avoided on purpose: their output is implementation
// defined.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Per-stage seed derivation: adding a stage never perturbs another stage's
// stream because each stream is keyed by its name, not by draw order.
inline std::uint64_t stage_seed(std::uint64_t base, std::string_view stage) {
  return splitmix64(base ^ fnv1a64(stage));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t base, std::string_view stage) {
  return Rng(stage_seed(base, stage));
}

/// Uniform double in [0, 1) with 53 bits of randomness.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [lo, hi] inclusive. Modulo bias is negligible for the
/// ranges used here (always far below 2^32).
inline std::uint64_t uniform_int(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

/// Standard normal via Box-Muller (one value per call, no cached state).
inline double gaussian(Rng& rng) {
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace loganom
