#include "bayesmar/harness.hpp"

#include "bayesmar/errors.hpp"
#include "bayesmar/parallel.hpp"
#include "bayesmar/random.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace bayesmar {

TimeSeries simulate_series(const Coefficients& beta, const NoiseSpec& noise, std::size_t length,
                           std::size_t burn, std::uint64_t seed) {
  if (length == 0) throw ConfigError("simulate_series: length must be positive");
  if (noise.scale < 0.0) throw ConfigError("simulate_series: noise scale must be non-negative");
  if (!(noise.contamination >= 0.0 && noise.contamination <= 1.0))
    throw ConfigError("simulate_series: contamination must lie in [0, 1]");
  const int p = beta.order();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> lags(static_cast<std::size_t>(p), 0.0);  // lags[0] most recent
  std::vector<double> out;
  out.reserve(length);
  for (std::size_t t = 0; t < burn + length; ++t) {
    double value = beta.intercept();
    for (int j = 1; j <= p; ++j) value += beta.lag(j) * lags[static_cast<std::size_t>(j - 1)];
    if (noise.scale > 0.0) {
      value += noise.family == ErrorFamily::laplace ? sample_laplace(rng, 0.0, noise.scale)
                                                    : noise.scale * normal(rng);
    }
    if (noise.contamination > 0.0 && unif(rng) < noise.contamination) value += noise.shift;
    if (p > 0) {
      lags.pop_back();
      lags.insert(lags.begin(), value);
    }
    if (t >= burn) out.push_back(value);
  }
  return TimeSeries(std::move(out));
}

TimeSeries simulate_series(const Coefficients& beta, ErrorFamily error, std::size_t length,
                           std::size_t burn, std::uint64_t seed) {
  return simulate_series(beta, NoiseSpec{error, 1.0, 0.0, 0.0}, length, burn, seed);
}

void SimStudyConfig::validate() const {
  if (replications < 1) throw ConfigError("simulation study: replications must be at least 1");
  if (max_order < 1) throw ConfigError("simulation study: max order must be at least 1");
  if (series_length <= 2 * static_cast<std::size_t>(max_order))
    throw ConfigError("simulation study: series length must exceed 2K");
  if (true_beta.order() < 1) throw ConfigError("simulation study: true order must be at least 1");
  if (include_bayes) mcmc.validate();
}

const MethodMse& MseStudyReport::method(std::string_view name) const {
  for (const auto& m : methods) {
    if (m.method == name) return m;
  }
  throw ConfigError("study report has no method '" + std::string(name) + "'");
}

namespace {

void finish_mse(MethodMse& m, const Eigen::VectorXd& truth) {
  const Eigen::Index reps = m.estimates.rows();
  const Eigen::MatrixXd sq = (m.estimates.rowwise() - truth.transpose()).array().square().matrix();
  m.mse = sq.colwise().mean().transpose();
  m.se.resize(sq.cols());
  for (Eigen::Index j = 0; j < sq.cols(); ++j) {
    const double var = reps > 1 ? (sq.col(j).array() - m.mse[j]).square().sum() /
                                      static_cast<double>(reps - 1)
                                : 0.0;
    m.se[j] = std::sqrt(var / static_cast<double>(reps));
  }
}

}  // namespace

MseStudyReport run_mse_study(const SimStudyConfig& config) {
  config.validate();
  const int p = config.true_beta.order();
  const auto reps = static_cast<Eigen::Index>(config.replications);
  std::vector<std::string> names;
  if (config.include_bayes) names.push_back("BayesMAR");
  names.push_back("QAR");
  if (config.include_bayes) names.push_back("AR");
  names.push_back("AR-OLS");

  MseStudyReport report;
  report.config = config;
  for (const auto& n : names) {
    MethodMse m;
    m.method = n;
    m.estimates.resize(reps, p + 1);
    if (n == "BayesMAR" || n == "AR") m.acceptance_rates.resize(config.replications);
    report.methods.push_back(std::move(m));
  }

  parallel_for(config.replications, config.threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(config.seed, r);
    const TimeSeries y = simulate_series(config.true_beta, config.noise, config.series_length,
                                         config.burn, rep_seed);
    const auto row = static_cast<Eigen::Index>(r);
    for (MethodMse& m : report.methods) {
      if (m.method == "QAR") {
        m.estimates.row(row) = fit_l1(y, p, static_cast<std::size_t>(p)).coeff.vector().transpose();
      } else if (m.method == "AR-OLS") {
        m.estimates.row(row) = fit_ols(y, p, static_cast<std::size_t>(p)).coeff.vector().transpose();
      } else {
        McmcConfig cfg = config.mcmc;
        const ErrorFamily fam = m.method == "BayesMAR" ? ErrorFamily::laplace : ErrorFamily::gaussian;
        cfg.seed = derive_seed(rep_seed, 10 + static_cast<std::uint64_t>(fam));
        const PosteriorDraws d = run_mh(y, p, fam, cfg);
        m.estimates.row(row) = posterior_mean(d).vector().transpose();
        m.acceptance_rates[r] = d.acceptance_rate;
      }
    }
  });
  for (MethodMse& m : report.methods) finish_mse(m, config.true_beta.vector());
  return report;
}

OrderStudyReport run_order_study(const SimStudyConfig& config) {
  config.validate();
  const ErrorFamily fit_family = ErrorFamily::laplace;
  OrderStudyReport report;
  report.config = config;
  report.map_orders.resize(config.replications);
  parallel_for(config.replications, config.threads, [&](std::size_t r) {
    const TimeSeries y = simulate_series(config.true_beta, config.noise, config.series_length,
                                         config.burn, derive_seed(config.seed, r));
    report.map_orders[r] = build_ensemble(y, config.max_order, fit_family).map_order;
  });
  report.counts.assign(static_cast<std::size_t>(config.max_order), 0);
  std::size_t hits = 0;
  for (int o : report.map_orders) {
    ++report.counts[static_cast<std::size_t>(o - 1)];
    hits += o == config.true_beta.order() ? 1 : 0;
  }
  report.accuracy = static_cast<double>(hits) / static_cast<double>(config.replications);
  return report;
}

void write_mse_table_csv(std::ostream& os, const std::vector<MseStudyReport>& reports) {
  if (reports.empty()) return;
  os << "method,stat";
  for (const auto& r : reports) {
    for (Eigen::Index j = 0; j <= r.config.true_beta.order(); ++j) {
      os << ',' << to_string(r.config.noise.family) << "_beta_" << j;
    }
  }
  os << '\n';
  const auto prec = os.precision();
  os.setf(std::ios::fixed);
  os.precision(4);
  for (const MethodMse& first : reports.front().methods) {
    for (const char* stat : {"MSE", "SE"}) {
      os << first.method << ',' << stat;
      for (const auto& r : reports) {
        const MethodMse& m = r.method(first.method);
        const Eigen::VectorXd& v = std::string_view(stat) == "MSE" ? m.mse : m.se;
        for (Eigen::Index j = 0; j < v.size(); ++j) os << ',' << 100.0 * v[j];
      }
      os << '\n';
    }
  }
  os.unsetf(std::ios::fixed);
  os.precision(prec);
}

void write_order_histogram_csv(std::ostream& os, const std::vector<OrderStudyReport>& reports) {
  if (reports.empty()) return;
  os << "order";
  for (const auto& r : reports) os << ',' << to_string(r.config.noise.family);
  os << '\n';
  for (std::size_t k = 0; k < reports.front().counts.size(); ++k) {
    os << k + 1;
    for (const auto& r : reports) os << ',' << r.counts.at(k);
    os << '\n';
  }
}

std::vector<BacktestMethod> default_backtest_methods() {
  return {{"BayesMAR-BMA", ErrorFamily::laplace, OrderRule::bma, 2},
          {"BayesMAR-MAP", ErrorFamily::laplace, OrderRule::map, 2},
          {"BayesAR-BMA", ErrorFamily::gaussian, OrderRule::bma, 2},
          {"BayesAR-MAP", ErrorFamily::gaussian, OrderRule::map, 2}};
}

BacktestMethod parse_backtest_method(std::string_view text) {
  // <family>-<rule>, e.g. mar-bma, ar-map, mar-fixed3
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) throw ConfigError("method '" + std::string(text) + "' is not <mar|ar>-<rule>");
  const std::string_view fam = text.substr(0, dash);
  std::string_view rule = text.substr(dash + 1);
  BacktestMethod m;
  if (fam == "mar") {
    m.family = ErrorFamily::laplace;
  } else if (fam == "ar") {
    m.family = ErrorFamily::gaussian;
  } else {
    throw ConfigError("method family must be 'mar' or 'ar', got '" + std::string(fam) + "'");
  }
  const std::string prefix = m.family == ErrorFamily::laplace ? "BayesMAR-" : "BayesAR-";
  if (rule == "bma" || rule == "map") {
    m.rule = parse_order_rule(rule);
    m.name = prefix + (rule == "bma" ? "BMA" : "MAP");
  } else if (rule.starts_with("fixed")) {
    m.rule = OrderRule::fixed;
    const std::string digits(rule.substr(5));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw ConfigError("fixed-order method needs a numeric order, e.g. mar-fixed2");
    m.fixed_order = std::stoi(digits);
    m.name = (m.family == ErrorFamily::laplace ? "BayesMAR(" : "BayesAR(") + digits + ")";
  } else {
    throw ConfigError("unknown order rule in method '" + std::string(text) + "'");
  }
  return m;
}

McmcConfig backtest_mcmc_defaults() {
  McmcConfig c;
  c.n_total = 8000;
  c.n_burn = 4000;
  return c;
}

void BacktestSpec::validate() const {
  if (methods.empty()) throw ConfigError("backtest: no methods");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i].name == methods[j].name) throw ConfigError("backtest: duplicate method " + methods[i].name);
    }
  }
  if (!baseline.empty() &&
      std::none_of(methods.begin(), methods.end(), [&](const auto& m) { return m.name == baseline; }))
    throw ConfigError("backtest: baseline '" + baseline + "' is not a method");
  if (horizon < 1) throw ConfigError("backtest: horizon must be at least 1");
  const std::size_t t = series.size();
  if (first_target < 1 || first_target >= t)
    throw ConfigError("backtest: first target must lie inside the series");
  // largest model at the first origin: first_target observations, minus
  // one when differencing, need K + (K + 2) values
  int largest = max_order;
  for (const auto& m : methods) {
    if (m.rule == OrderRule::fixed) largest = std::max(largest, m.fixed_order);
  }
  const std::size_t usable = first_target - (difference ? 1 : 0);
  if (usable < 2 * static_cast<std::size_t>(largest) + 2)
    throw LengthError("backtest: insufficient history at the first origin (" + std::to_string(usable) +
                      " usable observations for order " + std::to_string(largest) + ")");
}

std::vector<double> BacktestReport::errors(std::string_view method, int horizon) const {
  std::vector<double> e;
  for (const auto& r : records) {
    if (r.method == method && r.horizon == horizon) e.push_back(r.error);
  }
  return e;
}

BacktestReport run_backtest(const BacktestSpec& spec) {
  spec.validate();
  const std::size_t t_len = spec.series.size();
  const std::size_t first_origin = spec.first_target - 1;
  const std::size_t n_origins = t_len - 1 - first_origin;

  std::vector<std::vector<BacktestRecord>> per_origin(n_origins);
  parallel_for(n_origins, spec.threads, [&](std::size_t k) {
    const std::size_t origin = first_origin + k;
    // copy: the forecaster never sees anything after `origin`
    const TimeSeries window = spec.series.head(origin + 1);
    OrderFitCache cache;
    for (const BacktestMethod& m : spec.methods) {
      ForecastPlan plan;
      plan.family = m.family;
      plan.rule = m.rule;
      plan.fixed_order = m.fixed_order;
      plan.max_order = spec.max_order;
      plan.horizon = spec.horizon;
      plan.level = spec.level;
      plan.statistic = spec.statistic;
      plan.difference = spec.difference;
      plan.engine = spec.engine;
      plan.mcmc = spec.mcmc;
      plan.thin = spec.thin;
      plan.min_weight = spec.min_weight;
      plan.tau_denominator = spec.tau_denominator;
      plan.seed = derive_seed(spec.seed, origin);
      plan.threads = 1;
      const ForecastOutcome fc = forecast_series(window, plan, &cache);
      for (int h = 1; h <= spec.horizon; ++h) {
        const std::size_t target = origin + static_cast<std::size_t>(h);
        if (target >= t_len) break;
        const double truth = spec.series[target];
        const double forecast = fc.result.point[h - 1];
        const auto col = fc.result.paths.col(h - 1);
        std::vector<double> samples(col.data(), col.data() + col.size());
        per_origin[k].push_back({origin, m.name, h, forecast, truth, truth - forecast,
                                 crps_sample(samples, truth),
                                 fc.result.intervals[static_cast<std::size_t>(h - 1)].lower,
                                 fc.result.intervals[static_cast<std::size_t>(h - 1)].upper});
      }
    }
  });

  BacktestReport report;
  report.horizons = spec.horizon;
  for (const auto& m : spec.methods) report.methods.push_back(m.name);
  for (auto& v : per_origin) {
    for (auto& r : v) report.records.push_back(std::move(r));
  }

  report.counts.assign(static_cast<std::size_t>(spec.horizon), 0);
  std::vector<std::pair<std::string, std::vector<double>>> rmse_v, mae_v, crps_v;
  for (const auto& name : report.methods) {
    std::vector<double> r1, m1, c1;
    for (int h = 1; h <= spec.horizon; ++h) {
      std::vector<double> errs;
      double crps_sum = 0.0;
      for (const auto& r : report.records) {
        if (r.method == name && r.horizon == h) {
          errs.push_back(r.error);
          crps_sum += r.crps;
        }
      }
      report.counts[static_cast<std::size_t>(h - 1)] = errs.size();
      if (errs.empty()) {
        r1.push_back(std::nan(""));
        m1.push_back(std::nan(""));
        c1.push_back(std::nan(""));
        continue;
      }
      r1.push_back(rmse(errs));
      m1.push_back(mae(errs));
      c1.push_back(crps_sum / static_cast<double>(errs.size()));
    }
    rmse_v.emplace_back(name, std::move(r1));
    mae_v.emplace_back(name, std::move(m1));
    crps_v.emplace_back(name, std::move(c1));
  }
  const std::string baseline = spec.baseline.empty() ? report.methods.front() : spec.baseline;
  report.rmse = make_metric_table("rmse", baseline, rmse_v);
  report.mae = make_metric_table("mae", baseline, mae_v);
  report.crps = make_metric_table("crps", baseline, crps_v);
  return report;
}

void write_backtest_long_csv(std::ostream& os, const BacktestReport& report,
                             const TimeSeries* labels_from) {
  const bool labelled = labels_from && labels_from->has_labels();
  os << "origin," << (labelled ? "origin_label," : "")
     << "method,horizon,forecast,truth,error,crps,lower,upper\n";
  const auto prec = os.precision(17);
  for (const auto& r : report.records) {
    os << r.origin + 1 << ',';
    if (labelled) os << labels_from->labels()[r.origin] << ',';
    os << r.method << ',' << r.horizon << ',' << r.forecast << ',' << r.truth << ',' << r.error
       << ',' << r.crps << ',' << r.lower << ',' << r.upper << '\n';
  }
  os.precision(prec);
}

RobustnessReport run_robustness_study(const RobustnessConfig& config) {
  if (config.replications < 1 || config.origins < 1) throw ConfigError("robustness: empty study");
  const int h_max = config.horizon;
  std::vector<std::vector<BacktestRecord>> records(config.replications);
  for (std::size_t r = 0; r < config.replications; ++r) {
    const std::uint64_t rep_seed = derive_seed(config.seed, r);
    // changes follow the contaminated MAR(2); the backtest sees integrated levels
    const TimeSeries changes =
        simulate_series(config.true_beta, config.noise, config.series_length - 1, 200, rep_seed);
    std::vector<double> levels(config.series_length);
    levels[0] = 100.0;
    for (std::size_t t = 1; t < levels.size(); ++t) levels[t] = levels[t - 1] + changes[t - 1];

    BacktestSpec spec;
    spec.series = TimeSeries(std::move(levels));
    spec.first_target = config.series_length - config.origins;
    spec.horizon = h_max;
    spec.methods = {{"BayesMAR-BMA", ErrorFamily::laplace, OrderRule::bma, 2},
                    {"BayesAR-BMA", ErrorFamily::gaussian, OrderRule::bma, 2}};
    spec.mcmc = config.mcmc;
    spec.max_order = config.max_order;
    spec.min_weight = config.min_weight;
    spec.seed = derive_seed(rep_seed, 7);
    spec.threads = config.threads;
    records[r] = run_backtest(spec).records;
  }

  RobustnessReport out;
  for (int h = 1; h <= h_max; ++h) {
    for (const char* name : {"BayesMAR-BMA", "BayesAR-BMA"}) {
      std::vector<double> errs;
      double crps_sum = 0.0;
      for (const auto& rep : records) {
        for (const auto& rec : rep) {
          if (rec.method == name && rec.horizon == h) {
            errs.push_back(rec.error);
            crps_sum += rec.crps;
          }
        }
      }
      const double crps_mean = crps_sum / static_cast<double>(errs.size());
      if (std::string_view(name) == "BayesMAR-BMA") {
        out.laplace_rmse.push_back(rmse(errs));
        out.laplace_crps.push_back(crps_mean);
        if (h == 1) out.scored = errs.size();
      } else {
        out.gaussian_rmse.push_back(rmse(errs));
        out.gaussian_crps.push_back(crps_mean);
      }
    }
  }
  return out;
}

}  // namespace bayesmar
