#include "bayesmar/forecast.hpp"

#include "bayesmar/errors.hpp"
#include "bayesmar/parallel.hpp"
#include "bayesmar/random.hpp"
#include "bayesmar/stats.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

namespace bayesmar {

std::string_view to_string(PointStatistic statistic) noexcept {
  return statistic == PointStatistic::mean ? "mean" : "median";
}

std::string_view to_string(ForecastScale scale) noexcept {
  return scale == ForecastScale::differenced ? "differenced" : "level";
}

Eigen::MatrixXd sample_paths(const TimeSeries& y, const PosteriorDraws& draws, int horizon,
                             ErrorFamily family, std::uint64_t seed, unsigned threads,
                             std::size_t thin) {
  if (horizon < 1) throw ConfigError("sample_paths: horizon must be at least 1");
  if (draws.n_kept() == 0) throw DataError("sample_paths: no posterior draws");
  if (thin == 0) throw ConfigError("sample_paths: thin must be positive");
  const int p = draws.order;
  if (y.size() < static_cast<std::size_t>(p)) throw LengthError("sample_paths: history shorter than order");

  const std::size_t n_paths = (draws.n_kept() + thin - 1) / thin;
  Eigen::MatrixXd paths(static_cast<Eigen::Index>(n_paths), horizon);

  // lags[0] is the most recent value
  std::vector<double> history(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) history[static_cast<std::size_t>(j)] = y[y.size() - 1 - static_cast<std::size_t>(j)];

  parallel_for(n_paths, threads, [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k * thin);
    Rng rng(derive_seed(seed, k));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> lags = history;
    const double scale = draws.tau_draws[i];
    for (int h = 0; h < horizon; ++h) {
      double loc = draws.beta_draws(i, 0);
      for (int j = 1; j <= p; ++j) loc += draws.beta_draws(i, j) * lags[static_cast<std::size_t>(j - 1)];
      const double value = family == ErrorFamily::laplace ? sample_laplace(rng, loc, 2.0 * scale)
                                                          : loc + scale * normal(rng);
      paths(static_cast<Eigen::Index>(k), h) = value;
      if (p > 0) {
        lags.pop_back();
        lags.insert(lags.begin(), value);
      }
    }
  });
  return paths;
}

Eigen::VectorXd point_forecast(const Eigen::MatrixXd& paths, PointStatistic statistic) {
  if (paths.rows() == 0) throw DataError("point_forecast: no paths");
  if (statistic == PointStatistic::mean) return paths.colwise().mean().transpose();
  Eigen::VectorXd out(paths.cols());
  for (Eigen::Index h = 0; h < paths.cols(); ++h) {
    std::vector<double> col(paths.rows());
    for (Eigen::Index i = 0; i < paths.rows(); ++i) col[static_cast<std::size_t>(i)] = paths(i, h);
    out[h] = quantile(std::move(col), 0.5);
  }
  return out;
}

std::vector<Interval> credible_interval(const Eigen::MatrixXd& paths, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("credible_interval: level must lie in (0, 1)");
  if (paths.rows() < 2) throw DataError("credible_interval: need at least two paths");
  const double tail = 0.5 * (1.0 - level);
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(paths.cols()));
  std::vector<double> col(static_cast<std::size_t>(paths.rows()));
  for (Eigen::Index h = 0; h < paths.cols(); ++h) {
    for (Eigen::Index i = 0; i < paths.rows(); ++i) col[static_cast<std::size_t>(i)] = paths(i, h);
    std::sort(col.begin(), col.end());
    out.push_back({quantile_sorted(col, tail), quantile_sorted(col, 1.0 - tail)});
  }
  return out;
}

ForecastResult summarize_paths(Eigen::MatrixXd paths, double level, PointStatistic statistic,
                               ForecastScale scale) {
  ForecastResult r;
  r.horizons = static_cast<int>(paths.cols());
  r.point = point_forecast(paths, statistic);
  if (paths.rows() >= 2) {
    r.intervals = credible_interval(paths, level);
  } else {
    // a single path carries no spread; the interval collapses onto it
    for (Eigen::Index h = 0; h < paths.cols(); ++h) r.intervals.push_back({paths(0, h), paths(0, h)});
  }
  r.paths = std::move(paths);
  r.level = level;
  r.statistic = statistic;
  r.scale = scale;
  return r;
}

ForecastResult bma_forecast(const std::vector<ForecastResult>& per_order,
                            const std::vector<double>& weights, std::uint64_t seed) {
  if (per_order.empty()) throw ConfigError("bma_forecast: no per-order results");
  if (per_order.size() != weights.size()) throw ConfigError("bma_forecast: weight count mismatch");
  const ForecastResult& head = per_order.front();
  double total = 0.0;
  for (std::size_t k = 0; k < per_order.size(); ++k) {
    if (per_order[k].horizons != head.horizons) throw ConfigError("bma_forecast: mismatched horizons");
    if (per_order[k].n_paths() == 0) throw DataError("bma_forecast: empty path matrix");
    if (!(weights[k] >= 0.0)) throw ConfigError("bma_forecast: negative weight");
    total += weights[k];
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("bma_forecast: weights must sum to 1");

  Eigen::VectorXd point = Eigen::VectorXd::Zero(head.horizons);
  for (std::size_t k = 0; k < per_order.size(); ++k) point += weights[k] * per_order[k].point;

  // residual resampling: deterministic floor(N w) copies, the remainder
  // allocated by stratified draws on the fractional parts
  const std::size_t n = head.n_paths();
  std::vector<std::size_t> counts(weights.size());
  std::vector<double> residual(weights.size());
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double expected = static_cast<double>(n) * weights[k];
    counts[k] = static_cast<std::size_t>(std::floor(expected));
    residual[k] = expected - static_cast<double>(counts[k]);
    assigned += counts[k];
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t remaining = n > assigned ? n - assigned : 0;
  if (remaining > 0) {
    const double mass = std::accumulate(residual.begin(), residual.end(), 0.0);
    std::size_t k = 0;
    double cumulative = residual[0] / mass;
    for (std::size_t r = 0; r < remaining; ++r) {
      const double u = (static_cast<double>(r) + unif(rng)) / static_cast<double>(remaining);
      while (u > cumulative && k + 1 < residual.size()) cumulative += residual[++k] / mass;
      ++counts[k];
    }
  }

  Eigen::MatrixXd mixed(static_cast<Eigen::Index>(n), head.horizons);
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < per_order.size(); ++k) {
    const Eigen::MatrixXd& src = per_order[k].paths;
    std::uniform_int_distribution<Eigen::Index> pick(0, src.rows() - 1);
    for (std::size_t c = 0; c < counts[k]; ++c) mixed.row(row++) = src.row(pick(rng));
  }

  ForecastResult out;
  out.horizons = head.horizons;
  out.point = std::move(point);
  out.intervals = credible_interval(mixed, head.level);
  out.paths = std::move(mixed);
  out.level = head.level;
  out.statistic = head.statistic;
  out.scale = head.scale;
  return out;
}

ForecastResult forecast_levels(const ForecastResult& diff_result, double last_level) {
  Eigen::MatrixXd level_paths = diff_result.paths;
  for (Eigen::Index i = 0; i < level_paths.rows(); ++i) {
    double level = last_level;
    for (Eigen::Index h = 0; h < level_paths.cols(); ++h) {
      level += level_paths(i, h);
      level_paths(i, h) = level;
    }
  }
  return summarize_paths(std::move(level_paths), diff_result.level, diff_result.statistic,
                         ForecastScale::level);
}

void write_paths_csv(std::ostream& os, const ForecastResult& result) {
  os << "path_id";
  for (int h = 1; h <= result.horizons; ++h) os << ",h" << h;
  os << '\n';
  const auto prec = os.precision(17);
  for (Eigen::Index i = 0; i < result.paths.rows(); ++i) {
    os << i + 1;
    for (Eigen::Index h = 0; h < result.paths.cols(); ++h) os << ',' << result.paths(i, h);
    os << '\n';
  }
  os.precision(prec);
}

}  // namespace bayesmar
