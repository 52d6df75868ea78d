#pragma once

// Experimental protocols: the AR(2) simulation study (coefficient MSE and
// order-selection frequency) and the recursive out-of-sample backtest.

#include "bayesmar/pipeline.hpp"
#include "bayesmar/scoring.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bayesmar {

// Innovation law for simulated series. Laplace noise is the standard
// Laplace with scale b = `scale` (density (1/2b) exp(-|x|/b)); Gaussian
// noise has sd `scale`. With probability `contamination` an extra `shift`
// is added to the innovation. scale = 0 gives noiseless recursions.
struct NoiseSpec {
  ErrorFamily family = ErrorFamily::laplace;
  double scale = 1.0;
  double contamination = 0.0;
  double shift = 0.0;
};

// y_t = b0 + sum_j bj y_{t-j} + e_t from zero initial lags; the first
// `burn` values are discarded.
TimeSeries simulate_series(const Coefficients& beta, const NoiseSpec& noise, std::size_t length,
                           std::size_t burn, std::uint64_t seed);
TimeSeries simulate_series(const Coefficients& beta, ErrorFamily error, std::size_t length,
                           std::size_t burn, std::uint64_t seed);

struct SimStudyConfig {
  Coefficients true_beta{0.3, 0.75, -0.35};
  NoiseSpec noise;
  std::size_t series_length = 200;
  std::size_t burn = 200;
  std::size_t replications = 100;
  int max_order = 20;
  McmcConfig mcmc;
  bool include_bayes = true;   // run the MCMC-based estimators
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
};

struct MethodMse {
  std::string method;
  Eigen::MatrixXd estimates;            // replications x (p + 1)
  Eigen::VectorXd mse;                  // per coefficient
  Eigen::VectorXd se;                   // sd of squared errors / sqrt(replications)
  std::vector<double> acceptance_rates; // MCMC methods only
};

struct MseStudyReport {
  SimStudyConfig config;
  std::vector<MethodMse> methods;  // BayesMAR, QAR, AR, AR-OLS (MCMC rows omitted when disabled)
  const MethodMse& method(std::string_view name) const;
};

// Per replication, with the true order: BayesMAR (Laplace posterior mean),
// QAR (the L1 fit), AR (Gaussian posterior mean) and AR-OLS.
MseStudyReport run_mse_study(const SimStudyConfig& config);

struct OrderStudyReport {
  SimStudyConfig config;
  std::vector<int> map_orders;          // per replication
  std::vector<std::size_t> counts;      // counts[p - 1] for p = 1..K
  double accuracy = 0.0;                // share selecting the true order
};

OrderStudyReport run_order_study(const SimStudyConfig& config);

// Rows method,stat then one column group per report (noise family), x100.
void write_mse_table_csv(std::ostream& os, const std::vector<MseStudyReport>& reports);
// Rows order, one count column per report.
void write_order_histogram_csv(std::ostream& os, const std::vector<OrderStudyReport>& reports);

struct BacktestMethod {
  std::string name;
  ErrorFamily family = ErrorFamily::laplace;
  OrderRule rule = OrderRule::bma;
  int fixed_order = 2;
};

// BayesMAR-BMA, BayesMAR-MAP, BayesAR-BMA, BayesAR-MAP.
std::vector<BacktestMethod> default_backtest_methods();
BacktestMethod parse_backtest_method(std::string_view text);

McmcConfig backtest_mcmc_defaults();

struct BacktestSpec {
  TimeSeries series;                  // levels
  std::size_t first_target = 0;       // 0-based index of the first forecast target
  int horizon = 4;
  std::vector<BacktestMethod> methods = default_backtest_methods();
  std::string baseline;               // empty: first method
  McmcConfig mcmc = backtest_mcmc_defaults();
  int max_order = 8;
  double level = 0.95;
  bool difference = true;
  FitEngine engine = FitEngine::mcmc;
  PointStatistic statistic = PointStatistic::mean;
  std::size_t thin = 1;
  double min_weight = 0.0;
  TauDenominator tau_denominator = TauDenominator::paper;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

struct BacktestRecord {
  std::size_t origin;   // 0-based index of the last observation used
  std::string method;
  int horizon;
  double forecast;
  double truth;
  double error;         // truth - forecast
  double crps;
  double lower;
  double upper;
};

struct BacktestReport {
  std::vector<std::string> methods;
  int horizons = 0;
  std::vector<std::size_t> counts;   // scored targets per horizon
  std::vector<BacktestRecord> records;
  MetricTable rmse;
  MetricTable mae;
  MetricTable crps;

  std::vector<double> errors(std::string_view method, int horizon) const;
};

// Recursive out-of-sample protocol: for every origin t with
// first_target - 1 <= t <= T - 2 the model sees y_0..y_t only, forecasts
// H steps ahead, and is scored on the targets that exist.
BacktestReport run_backtest(const BacktestSpec& spec);

// CSV: origin,method,horizon,forecast,truth,error,crps,lower,upper (origin 1-based)
void write_backtest_long_csv(std::ostream& os, const BacktestReport& report,
                             const TimeSeries* labels_from = nullptr);

// Laplace-BMA versus Gaussian-BMA on integrated MAR(2) series with
// contaminated Laplace innovations; errors pooled over replications.
struct RobustnessConfig {
  Coefficients true_beta{0.3, 0.75, -0.35};
  NoiseSpec noise{ErrorFamily::laplace, 1.0, 0.05, 10.0};
  std::size_t series_length = 100;
  std::size_t origins = 10;
  std::size_t replications = 100;
  int max_order = 4;
  int horizon = 4;
  McmcConfig mcmc = backtest_mcmc_defaults();
  double min_weight = 1e-3;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct RobustnessReport {
  std::vector<double> laplace_rmse, gaussian_rmse;
  std::vector<double> laplace_crps, gaussian_crps;
  std::size_t scored = 0;
};

RobustnessReport run_robustness_study(const RobustnessConfig& config);

}  // namespace bayesmar
