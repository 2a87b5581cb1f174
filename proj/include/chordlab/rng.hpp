#pragma once

#include <cstdint>
#include <random>

namespace chordlab {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the k-th child stream of `master`. Child k depends only on
/// (master, k), so any trial can be replayed in isolation.
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t k) {
  return splitmix64(splitmix64(master) ^ (k * 0xD1B54A32D192ED03ULL + 1));
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

}  // namespace chordlab
