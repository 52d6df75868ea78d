#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace bayesmar {

// Hyndman-Fan type 7 quantile of an ascending sample:
// h = (n - 1) p, linear interpolation between order statistics.
inline double quantile_sorted(std::span<const double> sorted, double prob) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = static_cast<double>(n - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::vector<double> sample, double prob) {
  std::sort(sample.begin(), sample.end());
  return quantile_sorted(sample, prob);
}

}  // namespace bayesmar
