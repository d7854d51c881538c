#pragma once

#include <cstdint>

// Counter-based randomness: every draw is a pure function of a 64-bit key,
// so a draw at a given (seed, stream, episode, depth, dim) slot has the same
// value no matter how many other draws happened before it. This is what makes
// searches bit-reproducible and lets reward modes share action sequences.
namespace astforge::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Output function of splitmix64 applied to an arbitrary 64-bit state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (b + kGolden + (a << 6) + (a >> 2)));
}

// Uniform double in [0, 1) with 53 random bits.
inline double u01(std::uint64_t key) {
  return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t key, double lo, double hi) {
  return lo + (hi - lo) * u01(key);
}

}  // namespace astforge::rng
