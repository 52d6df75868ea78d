#pragma once

#include "bayesmar/core.hpp"
#include "bayesmar/random.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>

namespace bayesmar {

struct AcceptanceBand {
  double lower = 0.20;
  double upper = 0.50;
};

struct McmcConfig {
  std::size_t n_total = 40000;
  std::size_t n_burn = 25000;
  double initial_step = 1.0;
  AcceptanceBand band;
  std::uint64_t seed = 0;
  std::size_t adapt_window = 200;

  void validate() const;
};

// Multiplicative step adaptation: x1.25 above the band, x0.8 below.
double tune_step(double current_step, double window_acceptance, AcceptanceBand band);

struct AcceptanceEvent {
  std::size_t iteration;
  double log_ratio;  // log target(proposal) - log target(current)
  double log_u;
  bool accepted;
};
using AcceptanceObserver = std::function<void(const AcceptanceEvent&)>;
using LogTarget = std::function<double(const Eigen::VectorXd&)>;

struct ChainResult {
  Eigen::MatrixXd kept;                 // post burn-in states, one per row
  std::vector<std::uint8_t> accepted;   // post burn-in accept flags
  double acceptance_rate = 0.0;         // post burn-in
  double step_size = 0.0;               // frozen after burn-in
};

// Random-walk Metropolis with independent Uniform(-0.1 a, 0.1 a) moves on
// every coordinate. `a` adapts on each full window during burn-in only.
ChainResult run_random_walk(const LogTarget& log_target, Eigen::VectorXd init,
                            const McmcConfig& config, Rng& rng,
                            const AcceptanceObserver& observer = {});

// Samples beta from its marginal posterior pi(beta | y) under the flat
// prior on beta and the Jeffreys prior on the scale, then attaches one exact
// conditional scale draw per kept beta:
//   Laplace:  tau | beta     ~ InvGamma(T - p, S(beta))
//   Gaussian: sigma^2 | beta ~ InvGamma((T - p) / 2, RSS(beta) / 2)
// Uses all rows t >= p. beta starts at independent Uniform(0, 1) draws.
PosteriorDraws run_mh(const TimeSeries& y, int order, ErrorFamily family,
                      const McmcConfig& config);

// Same, restricted to responses t >= first (first >= order).
PosteriorDraws run_mh(const TimeSeries& y, int order, ErrorFamily family,
                      const McmcConfig& config, std::size_t first);

// One exact conditional draw of the scale (tau, or sigma for Gaussian) given
// the kernel statistic (S(beta) or RSS(beta)) over n terms.
double draw_conditional_scale(double stat, std::size_t n_terms, ErrorFamily family, Rng& rng);

Coefficients posterior_mean(const PosteriorDraws& draws);

struct ParameterSummary {
  std::string name;
  double mean, sd, q025, q500, q975;
};
std::vector<ParameterSummary> summarize(const PosteriorDraws& draws);

// CSV: iter,beta_0..beta_p,tau,accepted (post burn-in rows).
void write_trace_csv(std::ostream& os, const PosteriorDraws& draws);

}  // namespace bayesmar
