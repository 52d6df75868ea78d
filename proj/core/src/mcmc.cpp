#include "bayesmar/mcmc.hpp"

#include "bayesmar/errors.hpp"
#include "bayesmar/mle_fit.hpp"
#include "bayesmar/stats.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace bayesmar {

void McmcConfig::validate() const {
  if (n_total == 0) throw ConfigError("mcmc: n_total must be positive");
  if (n_burn >= n_total) throw ConfigError("mcmc: n_burn must be below n_total");
  if (!(initial_step > 0.0) || !std::isfinite(initial_step))
    throw ConfigError("mcmc: initial step must be positive");
  if (!(band.lower >= 0.0 && band.upper <= 1.0 && band.lower < band.upper))
    throw ConfigError("mcmc: target band must satisfy 0 <= lower < upper <= 1");
  if (adapt_window == 0) throw ConfigError("mcmc: adapt window must be positive");
}

double tune_step(double current_step, double window_acceptance, AcceptanceBand band) {
  if (window_acceptance > band.upper) return current_step * 1.25;
  if (window_acceptance < band.lower) return current_step * 0.8;
  return current_step;
}

ChainResult run_random_walk(const LogTarget& log_target, Eigen::VectorXd init,
                            const McmcConfig& config, Rng& rng,
                            const AcceptanceObserver& observer) {
  config.validate();
  const Eigen::Index dim = init.size();
  const std::size_t n_keep = config.n_total - config.n_burn;

  ChainResult out;
  out.kept.resize(static_cast<Eigen::Index>(n_keep), dim);
  out.accepted.resize(n_keep);

  std::uniform_real_distribution<double> move(-0.1, 0.1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::VectorXd current = std::move(init);
  double current_lt = log_target(current);
  Eigen::VectorXd proposal(dim);
  double step = config.initial_step;
  std::size_t window_accepts = 0;
  std::size_t window_count = 0;
  std::size_t kept_accepts = 0;

  for (std::size_t it = 0; it < config.n_total; ++it) {
    for (Eigen::Index j = 0; j < dim; ++j) proposal[j] = current[j] + step * move(rng);
    const double proposal_lt = log_target(proposal);
    double log_ratio = proposal_lt - current_lt;
    if (std::isnan(log_ratio)) log_ratio = -std::numeric_limits<double>::infinity();
    const double log_u = std::log(unif(rng));
    const bool accept = log_u < log_ratio;
    if (observer) observer({it, log_ratio, log_u, accept});
    if (accept) {
      current.swap(proposal);
      current_lt = proposal_lt;
    }

    if (it < config.n_burn) {
      window_accepts += accept ? 1 : 0;
      if (++window_count == config.adapt_window) {
        step = tune_step(step, static_cast<double>(window_accepts) /
                                   static_cast<double>(window_count),
                         config.band);
        window_accepts = 0;
        window_count = 0;
      }
    } else {
      const std::size_t k = it - config.n_burn;
      out.kept.row(static_cast<Eigen::Index>(k)) = current.transpose();
      out.accepted[k] = accept ? 1 : 0;
      kept_accepts += accept ? 1 : 0;
    }
  }
  out.acceptance_rate = static_cast<double>(kept_accepts) / static_cast<double>(n_keep);
  out.step_size = step;
  return out;
}

double draw_conditional_scale(double stat, std::size_t n_terms, ErrorFamily family, Rng& rng) {
  if (!(stat > 0.0)) throw DegenerateDataError("conditional scale draw with zero residuals");
  const double n = static_cast<double>(n_terms);
  if (family == ErrorFamily::laplace) {
    std::gamma_distribution<double> gamma(n, 1.0);
    return stat / gamma(rng);
  }
  std::gamma_distribution<double> gamma(0.5 * n, 1.0);
  return std::sqrt(0.5 * stat / gamma(rng));
}

PosteriorDraws run_mh(const TimeSeries& y, int order, ErrorFamily family,
                      const McmcConfig& config) {
  return run_mh(y, order, family, config, static_cast<std::size_t>(std::max(order, 0)));
}

PosteriorDraws run_mh(const TimeSeries& y, int order, ErrorFamily family,
                      const McmcConfig& config, std::size_t first) {
  config.validate();
  if (order < 1) throw ConfigError("run_mh: order must be at least 1");
  if (y.size() < static_cast<std::size_t>(order) + 2 || first < static_cast<std::size_t>(order) ||
      y.size() - first < static_cast<std::size_t>(order) + 2) {
    throw LengthError("run_mh: series too short for order " + std::to_string(order));
  }
  const LagDesign design = make_design(y.values(), order, first);
  const std::size_t n = design.rows();

  // The marginal posterior is improper when some beta fits the window
  // exactly or when the design is rank deficient.
  const MleFit best = family == ErrorFamily::laplace ? fit_l1(y, order, first) : [&] {
    try {
      return fit_ols(y, order, first);
    } catch (const RankError&) {
      throw DegenerateDataError("run_mh: rank-deficient design, posterior is improper");
    }
  }();
  if (best.non_unique) throw DegenerateDataError("run_mh: rank-deficient design, posterior is improper");
  const double scale_ref = 1.0 + design.y.cwiseAbs().mean();
  const double exact_tol = family == ErrorFamily::laplace ? 1e-12 * scale_ref * static_cast<double>(n)
                                                          : 1e-24 * scale_ref * scale_ref * static_cast<double>(n);
  if (best.objective <= exact_tol) {
    throw DegenerateDataError("run_mh: series is fit exactly, posterior is improper");
  }

  auto statistic = [&](const Eigen::VectorXd& beta) {
    return family == ErrorFamily::laplace ? sum_abs_residuals(design, beta)
                                          : sum_sq_residuals(design, beta);
  };
  const LogTarget target = [&](const Eigen::VectorXd& beta) {
    return log_marginal_posterior_from_stat(statistic(beta), n, family);
  };

  Rng rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd init(order + 1);
  for (Eigen::Index j = 0; j <= order; ++j) init[j] = unit(rng);

  ChainResult chain = run_random_walk(target, std::move(init), config, rng);

  PosteriorDraws draws;
  draws.order = order;
  draws.family = family;
  draws.n_total = config.n_total;
  draws.n_burn = config.n_burn;
  draws.acceptance_rate = chain.acceptance_rate;
  draws.step_size = chain.step_size;
  draws.tau_draws.resize(chain.kept.rows());
  Rng scale_rng(derive_seed(config.seed, 1));
  for (Eigen::Index i = 0; i < chain.kept.rows(); ++i) {
    const double stat = statistic(chain.kept.row(i).transpose());
    if (!(stat > 0.0)) throw DegenerateDataError("run_mh: chain reached an exact fit");
    draws.tau_draws[i] = draw_conditional_scale(stat, n, family, scale_rng);
  }
  draws.beta_draws = std::move(chain.kept);
  draws.accepted = std::move(chain.accepted);
  return draws;
}

Coefficients posterior_mean(const PosteriorDraws& draws) {
  if (draws.n_kept() == 0) throw DataError("posterior_mean: no draws");
  return Coefficients(Eigen::VectorXd(draws.beta_draws.colwise().mean().transpose()));
}

std::vector<ParameterSummary> summarize(const PosteriorDraws& draws) {
  if (draws.n_kept() == 0) throw DataError("summarize: no draws");
  std::vector<ParameterSummary> out;
  auto one = [&](std::string name, const Eigen::VectorXd& col) {
    const double mean = col.mean();
    const double var = col.size() > 1
                           ? (col.array() - mean).square().sum() / static_cast<double>(col.size() - 1)
                           : 0.0;
    std::vector<double> v(col.data(), col.data() + col.size());
    std::sort(v.begin(), v.end());
    out.push_back({std::move(name), mean, std::sqrt(var), quantile_sorted(v, 0.025),
                   quantile_sorted(v, 0.5), quantile_sorted(v, 0.975)});
  };
  for (Eigen::Index j = 0; j < draws.beta_draws.cols(); ++j) {
    one("beta_" + std::to_string(j), draws.beta_draws.col(j));
  }
  one(draws.family == ErrorFamily::laplace ? "tau" : "sigma", draws.tau_draws);
  return out;
}

void write_trace_csv(std::ostream& os, const PosteriorDraws& draws) {
  os << "iter";
  for (int j = 0; j <= draws.order; ++j) os << ",beta_" << j;
  os << ",tau,accepted\n";
  const auto prec = os.precision(17);
  for (Eigen::Index i = 0; i < draws.beta_draws.rows(); ++i) {
    os << draws.n_burn + static_cast<std::size_t>(i) + 1;
    for (Eigen::Index j = 0; j < draws.beta_draws.cols(); ++j) os << ',' << draws.beta_draws(i, j);
    os << ',' << draws.tau_draws[i] << ','
       << (static_cast<std::size_t>(i) < draws.accepted.size()
               ? static_cast<int>(draws.accepted[static_cast<std::size_t>(i)])
               : 0)
       << '\n';
  }
  os.precision(prec);
}

}  // namespace bayesmar
