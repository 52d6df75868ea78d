#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace bayesmar {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Child seeds are a function of (parent, counter)
// only, so work units can run in any order and still see the same stream.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t counter) noexcept {
  std::uint64_t z = parent + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Laplace(location, b), density (1 / 2b) exp(-|x - location| / b).
inline double sample_laplace(Rng& rng, double location, double b) {
  std::exponential_distribution<double> expo(1.0);
  return location + b * (expo(rng) - expo(rng));
}

}  // namespace bayesmar
