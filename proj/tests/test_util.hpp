#pragma once

#include "bayesmar/core.hpp"
#include "bayesmar/random.hpp"

#include <vector>

namespace bayesmar::testing {

inline TimeSeries random_series(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return TimeSeries(std::move(v));
}

// Noiseless recursion from two nonzero starting values.
inline TimeSeries noiseless_ar2(std::size_t n, double b0 = 0.3, double b1 = 0.75, double b2 = -0.35) {
  std::vector<double> v{1.0, -0.5};
  while (v.size() < n) {
    const std::size_t t = v.size();
    v.push_back(b0 + b1 * v[t - 1] + b2 * v[t - 2]);
  }
  return TimeSeries(std::move(v));
}

}  // namespace bayesmar::testing
