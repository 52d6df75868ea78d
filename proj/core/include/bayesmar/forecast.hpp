#pragma once

#include "bayesmar/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace bayesmar {

enum class PointStatistic { mean, median };
enum class ForecastScale { differenced, level };

std::string_view to_string(PointStatistic statistic) noexcept;
std::string_view to_string(ForecastScale scale) noexcept;

struct Interval {
  double lower;
  double upper;
};

struct ForecastResult {
  int horizons = 0;
  Eigen::VectorXd point;             // length H
  Eigen::MatrixXd paths;             // n_paths x H predictive samples
  std::vector<Interval> intervals;   // per horizon, equal-tailed
  double level = 0.95;
  PointStatistic statistic = PointStatistic::mean;
  ForecastScale scale = ForecastScale::differenced;

  std::size_t n_paths() const noexcept { return static_cast<std::size_t>(paths.rows()); }
};

// One predictive path per (thinned) posterior draw. For draw i the path is
// built by iterating
//   y_{T+h} = b0 + sum_j bj y_{T+h-j} + e,   e ~ Laplace(0, 2 tau_i)  or N(0, sigma_i^2),
// feeding sampled values back in as lags. Draw i uses its own stream
// derive_seed(seed, i), so the result does not depend on `threads`.
Eigen::MatrixXd sample_paths(const TimeSeries& y, const PosteriorDraws& draws, int horizon,
                             ErrorFamily family, std::uint64_t seed, unsigned threads = 1,
                             std::size_t thin = 1);

Eigen::VectorXd point_forecast(const Eigen::MatrixXd& paths,
                               PointStatistic statistic = PointStatistic::mean);

// Equal-tailed type-7 quantiles at (1 - level) / 2 and (1 + level) / 2.
std::vector<Interval> credible_interval(const Eigen::MatrixXd& paths, double level);

ForecastResult summarize_paths(Eigen::MatrixXd paths, double level,
                               PointStatistic statistic = PointStatistic::mean,
                               ForecastScale scale = ForecastScale::differenced);

// Mixture over orders. The point forecast is sum_p w_p point_p; the paths
// are a stratified residual resample of the pooled per-order paths with
// selection probabilities w_p, keeping the first result's path count.
ForecastResult bma_forecast(const std::vector<ForecastResult>& per_order,
                            const std::vector<double>& weights, std::uint64_t seed);

// Re-integrates differenced paths: level_h = last_level + sum_{i <= h} delta_i.
ForecastResult forecast_levels(const ForecastResult& diff_result, double last_level);

// CSV: path_id,h1..hH
void write_paths_csv(std::ostream& os, const ForecastResult& result);

}  // namespace bayesmar
