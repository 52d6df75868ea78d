#include "bayesmar/pipeline.hpp"

#include "bayesmar/errors.hpp"
#include "bayesmar/random.hpp"

#include <cmath>
#include <limits>

namespace bayesmar {

std::string_view to_string(OrderRule rule) noexcept {
  switch (rule) {
    case OrderRule::bma: return "bma";
    case OrderRule::map: return "map";
    case OrderRule::fixed: return "fixed";
  }
  return "?";
}

OrderRule parse_order_rule(std::string_view text) {
  if (text == "bma") return OrderRule::bma;
  if (text == "map") return OrderRule::map;
  if (text == "fixed") return OrderRule::fixed;
  throw ConfigError("unknown order rule '" + std::string(text) + "'");
}

std::string_view to_string(FitEngine engine) noexcept {
  return engine == FitEngine::mcmc ? "mcmc" : "plugin";
}

FitEngine parse_engine(std::string_view text) {
  if (text == "mcmc") return FitEngine::mcmc;
  if (text == "plugin") return FitEngine::plugin;
  throw ConfigError("unknown fit engine '" + std::string(text) + "'");
}

void ForecastPlan::validate() const {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("interval level must lie in (0, 1)");
  if (rule == OrderRule::fixed && fixed_order < 1) throw ConfigError("fixed order must be at least 1");
  if (rule != OrderRule::fixed && max_order < 1) throw ConfigError("max order K must be at least 1");
  if (thin == 0) throw ConfigError("thin must be positive");
  if (!(min_weight >= 0.0 && min_weight < 1.0)) throw ConfigError("min weight must lie in [0, 1)");
  mcmc.validate();
  if (mcmc.n_total - mcmc.n_burn < 2) throw ConfigError("need at least two kept draws");
}

PosteriorDraws fit_order(const TimeSeries& y, int order, const ForecastPlan& plan,
                         std::uint64_t seed) {
  if (plan.engine == FitEngine::mcmc) {
    McmcConfig cfg = plan.mcmc;
    cfg.seed = seed;
    return run_mh(y, order, plan.family, cfg);
  }
  const MleFit fit = fit_mle(y, order, static_cast<std::size_t>(order), plan.family,
                             plan.tau_denominator);
  const auto kept = static_cast<Eigen::Index>(plan.mcmc.n_total - plan.mcmc.n_burn);
  PosteriorDraws d;
  d.order = order;
  d.family = plan.family;
  d.n_total = plan.mcmc.n_total;
  d.n_burn = plan.mcmc.n_burn;
  d.beta_draws = fit.coeff.vector().transpose().replicate(kept, 1);
  d.tau_draws = Eigen::VectorXd::Constant(kept, fit.scale.value());
  d.acceptance_rate = 0.0;
  d.step_size = 0.0;
  return d;
}

ForecastOutcome forecast_series(const TimeSeries& y, const ForecastPlan& plan,
                                OrderFitCache* cache) {
  plan.validate();
  const TimeSeries work = plan.difference ? diff1(y) : y;
  const auto family_tag = static_cast<std::uint64_t>(plan.family);
  const std::uint64_t fit_seed = derive_seed(plan.seed, family_tag);
  const std::uint64_t path_seed = derive_seed(plan.seed, 2 + family_tag);

  ForecastOutcome out;
  std::vector<std::pair<int, double>> picks;
  if (plan.rule == OrderRule::fixed) {
    picks.emplace_back(plan.fixed_order, 1.0);
    out.map_order = plan.fixed_order;
  } else {
    OrderEnsemble local;
    const OrderEnsemble* ep = nullptr;
    if (cache) {
      auto it = cache->ensembles.find(plan.family);
      if (it == cache->ensembles.end()) {
        it = cache->ensembles
                 .emplace(plan.family, build_ensemble(work, plan.max_order, plan.family,
                                                      plan.tau_denominator))
                 .first;
      }
      ep = &it->second;
    } else {
      local = build_ensemble(work, plan.max_order, plan.family, plan.tau_denominator);
      ep = &local;
    }
    const OrderEnsemble& e = *ep;
    out.bics = e.bics;
    out.map_order = e.map_order;
    if (plan.rule == OrderRule::map) {
      picks.emplace_back(e.map_order, 1.0);
    } else {
      double kept_mass = 0.0;
      for (std::size_t i = 0; i < e.weights.size(); ++i) {
        if (e.weights[i] >= plan.min_weight) {
          picks.emplace_back(static_cast<int>(i) + 1, e.weights[i]);
          kept_mass += e.weights[i];
        }
      }
      if (picks.empty()) {
        picks.emplace_back(e.map_order, e.weights[static_cast<std::size_t>(e.map_order - 1)]);
        kept_mass = picks.front().second;
      }
      for (auto& pw : picks) pw.second /= kept_mass;
    }
  }

  std::vector<ForecastResult> per_order;
  std::vector<double> weights;
  for (const auto& [order, weight] : picks) {
    const auto key = std::make_pair(plan.family, order);
    if (cache) {
      if (auto it = cache->orders.find(key); it != cache->orders.end()) {
        per_order.push_back(it->second.first);
        weights.push_back(weight);
        out.components.push_back(it->second.second);
        out.components.back().weight = weight;
        continue;
      }
    }
    const PosteriorDraws draws =
        fit_order(work, order, plan, derive_seed(fit_seed, static_cast<std::uint64_t>(order)));
    Eigen::MatrixXd paths =
        sample_paths(work, draws, plan.horizon, plan.family,
                     derive_seed(path_seed, static_cast<std::uint64_t>(order)), plan.threads,
                     plan.thin);
    per_order.push_back(summarize_paths(std::move(paths), plan.level, plan.statistic,
                                        ForecastScale::differenced));
    weights.push_back(weight);
    out.components.push_back({order, weight,
                              plan.engine == FitEngine::mcmc
                                  ? draws.acceptance_rate
                                  : std::numeric_limits<double>::quiet_NaN(),
                              draws.step_size});
    if (cache) cache->orders.emplace(key, std::make_pair(per_order.back(), out.components.back()));
  }

  ForecastResult mixed = plan.rule == OrderRule::bma
                             ? bma_forecast(per_order, weights, derive_seed(plan.seed, 4 + family_tag))
                             : std::move(per_order.front());
  if (plan.difference) {
    out.result = forecast_levels(mixed, y[y.size() - 1]);
  } else {
    out.result = std::move(mixed);
    out.result.scale = ForecastScale::level;
  }
  return out;
}

}  // namespace bayesmar
