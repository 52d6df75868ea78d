#pragma once

// End-to-end forecaster: optional lag-1 differencing, BIC order selection,
// per-order posterior sampling, predictive paths, BMA mixing and level
// reconstruction. Shared by the CLI `forecast` command and the backtest.

#include "bayesmar/forecast.hpp"
#include "bayesmar/mcmc.hpp"
#include "bayesmar/order_select.hpp"

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

namespace bayesmar {

enum class OrderRule { bma, map, fixed };

// mcmc: posterior sampling. plugin: the window MLE repeated as every
// "draw" (no parameter uncertainty); cheap, and exact on noiseless data.
enum class FitEngine { mcmc, plugin };

std::string_view to_string(OrderRule rule) noexcept;
OrderRule parse_order_rule(std::string_view text);
std::string_view to_string(FitEngine engine) noexcept;
FitEngine parse_engine(std::string_view text);

struct ForecastPlan {
  ErrorFamily family = ErrorFamily::laplace;
  OrderRule rule = OrderRule::bma;
  int fixed_order = 2;
  int max_order = 8;
  int horizon = 4;
  double level = 0.95;
  PointStatistic statistic = PointStatistic::mean;
  bool difference = true;
  FitEngine engine = FitEngine::mcmc;
  McmcConfig mcmc;              // mcmc.seed is ignored; see `seed`
  std::size_t thin = 1;
  // Orders whose BMA weight falls below this are dropped and the rest
  // renormalized. 0 keeps every order.
  double min_weight = 0.0;
  TauDenominator tau_denominator = TauDenominator::paper;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

struct OrderComponent {
  int order;
  double weight;
  double acceptance_rate;  // NaN for the plugin engine
  double step_size;
};

struct ForecastOutcome {
  ForecastResult result;        // on the level scale when differencing
  std::vector<OrderComponent> components;
  std::vector<double> bics;     // empty for a fixed order
  int map_order = 0;
};

// Memo of ensembles and per-order predictive results for one input series.
// Share only between plans that differ in rule, fixed_order or min_weight.
struct OrderFitCache {
  std::map<ErrorFamily, OrderEnsemble> ensembles;
  std::map<std::pair<ErrorFamily, int>, std::pair<ForecastResult, OrderComponent>> orders;
};

ForecastOutcome forecast_series(const TimeSeries& y, const ForecastPlan& plan,
                                OrderFitCache* cache = nullptr);

// Posterior draws for one order under the plan's engine; first = order.
PosteriorDraws fit_order(const TimeSeries& y, int order, const ForecastPlan& plan,
                         std::uint64_t seed);

}  // namespace bayesmar
