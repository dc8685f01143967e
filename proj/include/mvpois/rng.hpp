#pragma once

#include <cstdint>
#include <random>

namespace mvpois {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Generator for trial `index` of an experiment seeded with `seed`. Trials are
// keyed by seed XOR index so results do not depend on execution order.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed ^ index));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace mvpois
