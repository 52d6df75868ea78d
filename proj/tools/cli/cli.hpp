#pragma once

// Subcommand adapters behind the `bayesmar` executable. Each command takes
// a validated options struct, calls the library, and returns its output
// files as (name, content) pairs so tests can compare them byte for byte.

#include "bayesmar/harness.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace bayesmar::cli {

// `period,value` with a header, or a single column of values with an
// optional `value` header. Row numbers in errors are 1-based file lines.
TimeSeries parse_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::filesystem::path& path);

// 0 ok, 2 config, 3 data, 4 numeric or degenerate, 1 anything else.
int exit_code_for(const std::exception& e) noexcept;

using OutputFile = std::pair<std::string, std::string>;
using Outputs = std::vector<OutputFile>;

void write_outputs(const std::filesystem::path& dir, const Outputs& files);

// 40000 / 25000, the full sampler budget.
McmcConfig paper_fidelity_mcmc();

// t0 as a period label or a 1-based index; returns the 0-based index of
// the first forecast target.
std::size_t resolve_t0(const TimeSeries& series, const std::string& t0);

PointStatistic parse_statistic(std::string_view text);
TauDenominator parse_tau_denominator(std::string_view text);

struct FitOptions {
  std::string input;
  ErrorFamily family = ErrorFamily::laplace;
  int order = 2;
  bool difference = false;
  McmcConfig mcmc;
  std::uint64_t seed = 0;
  bool trace = false;
};
Outputs cmd_fit(const FitOptions& o);

struct ForecastOptions {
  std::string input;
  ForecastPlan plan;
  bool paths = false;
};
Outputs cmd_forecast(const ForecastOptions& o);

struct SelectOrderOptions {
  std::string input;
  ErrorFamily family = ErrorFamily::laplace;
  int max_order = 8;
  bool difference = false;
  TauDenominator tau_denominator = TauDenominator::paper;
  std::uint64_t seed = 0;
};
Outputs cmd_select_order(const SelectOrderOptions& o);

struct BacktestOptions {
  std::vector<std::string> inputs;
  std::string t0;
  int horizon = 4;
  int max_order = 8;
  std::vector<std::string> methods{"mar-bma", "mar-map", "ar-bma", "ar-map"};
  std::string baseline;
  McmcConfig mcmc = backtest_mcmc_defaults();
  double level = 0.95;
  bool difference = true;
  FitEngine engine = FitEngine::mcmc;
  PointStatistic statistic = PointStatistic::mean;
  std::size_t thin = 1;
  double min_weight = 0.0;
  TauDenominator tau_denominator = TauDenominator::paper;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};
Outputs cmd_backtest(const BacktestOptions& o);

struct SimulateOptions {
  std::string preset = "table1";  // table1, orders, robustness
  std::uint64_t seed = 1;
  std::size_t replications = 100;
  int max_order = 0;              // 0: preset default
  McmcConfig mcmc;
  bool mcmc_set = false;          // false: preset default budget
  unsigned threads = 1;
};
Outputs cmd_simulate(const SimulateOptions& o);

}  // namespace bayesmar::cli
