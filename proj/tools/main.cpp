#include "cli/cli.hpp"

#include "bayesmar/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace bayesmar;
using namespace bayesmar::cli;

namespace {

struct Common {
  std::string out = ".";
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct McmcFlags {
  std::size_t n_total = 0;
  std::size_t n_burn = 0;
  double initial_step = 1.0;
  bool paper_fidelity = false;

  void add(CLI::App* app) {
    app->add_option("--n-total", n_total, "MCMC iterations including burn-in");
    app->add_option("--n-burn", n_burn, "MCMC burn-in iterations");
    app->add_option("--step", initial_step, "Initial random-walk step size a")->capture_default_str();
    app->add_flag("--paper-fidelity", paper_fidelity, "Use the full 40000 / 25000 sampler budget");
  }

  // Explicit --n-total / --n-burn override the preset budget.
  McmcConfig resolve(McmcConfig preset) const {
    McmcConfig c = paper_fidelity ? paper_fidelity_mcmc() : preset;
    if (n_total) c.n_total = n_total;
    if (n_burn) c.n_burn = n_burn;
    c.initial_step = initial_step;
    return c;
  }
  bool set() const { return paper_fidelity || n_total || n_burn || initial_step != 1.0; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian median autoregression: fitting, order selection, forecasting and backtests"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "bayesmar 1.0.0");

  Common common;
  std::string fit_family = "laplace", fc_family = "laplace", so_family = "laplace";
  auto add_common = [&](CLI::App* sub, bool threads) {
    sub->add_option("--out", common.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", common.seed, "Master random seed")->capture_default_str();
    if (threads) sub->add_option("--threads", common.threads, "Worker threads")->capture_default_str();
  };

  // fit
  FitOptions fit;
  McmcFlags fit_mcmc;
  auto* fit_cmd = app.add_subcommand("fit", "Sample the posterior of one MAR(p) / AR(p) model");
  fit_cmd->add_option("--input", fit.input, "CSV series")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--family", fit_family, "laplace or gaussian")->capture_default_str();
  fit_cmd->add_option("--order,-p", fit.order, "Autoregressive order")->capture_default_str();
  fit_cmd->add_flag("--diff", fit.difference, "Model lag-1 differences");
  fit_cmd->add_flag("--trace", fit.trace, "Also write trace.csv");
  fit_mcmc.add(fit_cmd);
  add_common(fit_cmd, false);

  // forecast
  ForecastOptions fc;
  McmcFlags fc_mcmc;
  std::string fc_rule = "bma", fc_engine = "mcmc", fc_stat = "mean", fc_tau = "paper";
  bool fc_no_diff = false;
  auto* fc_cmd = app.add_subcommand("forecast", "Point and interval forecasts from the last observation");
  fc_cmd->add_option("--input", fc.input, "CSV series")->required()->check(CLI::ExistingFile);
  fc_cmd->add_option("--family", fc_family, "laplace or gaussian")->capture_default_str();
  fc_cmd->add_option("--order-rule", fc_rule, "bma, map or fixed")->capture_default_str();
  fc_cmd->add_option("--order", fc.plan.fixed_order, "Order for --order-rule fixed")->capture_default_str();
  fc_cmd->add_option("--k", fc.plan.max_order, "Largest candidate order K")->capture_default_str();
  fc_cmd->add_option("--h", fc.plan.horizon, "Forecast horizon")->capture_default_str();
  fc_cmd->add_option("--level", fc.plan.level, "Credible interval level")->capture_default_str();
  fc_cmd->add_option("--statistic", fc_stat, "Point forecast: mean or median")->capture_default_str();
  fc_cmd->add_option("--engine", fc_engine, "mcmc or plugin")->capture_default_str();
  fc_cmd->add_option("--thin", fc.plan.thin, "Use every n-th posterior draw")->capture_default_str();
  fc_cmd->add_option("--min-weight", fc.plan.min_weight, "Drop BMA orders below this weight")
      ->capture_default_str();
  fc_cmd->add_option("--tau-denominator", fc_tau, "paper (n + 1) or mle (n)")->capture_default_str();
  fc_cmd->add_flag("--no-diff", fc_no_diff, "Model levels instead of lag-1 changes");
  fc_cmd->add_flag("--paths", fc.paths, "Also write paths.csv");
  fc_mcmc.add(fc_cmd);
  add_common(fc_cmd, true);

  // select-order
  SelectOrderOptions so;
  std::string so_tau = "paper";
  auto* so_cmd = app.add_subcommand("select-order", "BIC table, BMA weights and MAP order");
  so_cmd->add_option("--input", so.input, "CSV series")->required()->check(CLI::ExistingFile);
  so_cmd->add_option("--family", so_family, "laplace or gaussian")->capture_default_str();
  so_cmd->add_option("--k", so.max_order, "Largest candidate order K")->capture_default_str();
  so_cmd->add_flag("--diff", so.difference, "Model lag-1 differences");
  so_cmd->add_option("--tau-denominator", so_tau, "paper (n + 1) or mle (n)")->capture_default_str();
  add_common(so_cmd, false);

  // backtest
  BacktestOptions bt;
  McmcFlags bt_mcmc;
  std::string bt_engine = "mcmc", bt_stat = "mean", bt_tau = "paper";
  bool bt_no_diff = false;
  auto* bt_cmd = app.add_subcommand("backtest", "Recursive out-of-sample h-step backtest");
  bt_cmd->add_option("--input", bt.inputs, "CSV series (repeatable)")->required()->check(CLI::ExistingFile);
  bt_cmd->add_option("--t0", bt.t0, "First target: period label or 1-based index")->required();
  bt_cmd->add_option("--h", bt.horizon, "Largest horizon")->capture_default_str();
  bt_cmd->add_option("--k", bt.max_order, "Largest candidate order K")->capture_default_str();
  bt_cmd->add_option("--methods", bt.methods, "mar-bma, mar-map, ar-bma, ar-map, mar-fixedN, ar-fixedN")
      ->delimiter(',')
      ->capture_default_str();
  bt_cmd->add_option("--baseline", bt.baseline, "Reference method for relative changes (default: first)");
  bt_cmd->add_option("--level", bt.level, "Credible interval level")->capture_default_str();
  bt_cmd->add_option("--statistic", bt_stat, "Point forecast: mean or median")->capture_default_str();
  bt_cmd->add_option("--engine", bt_engine, "mcmc or plugin")->capture_default_str();
  bt_cmd->add_option("--thin", bt.thin, "Use every n-th posterior draw")->capture_default_str();
  bt_cmd->add_option("--min-weight", bt.min_weight, "Drop BMA orders below this weight")->capture_default_str();
  bt_cmd->add_option("--tau-denominator", bt_tau, "paper (n + 1) or mle (n)")->capture_default_str();
  bt_cmd->add_flag("--no-diff", bt_no_diff, "Model levels instead of lag-1 changes");
  bt_mcmc.add(bt_cmd);
  add_common(bt_cmd, true);

  // simulate
  SimulateOptions sim;
  McmcFlags sim_mcmc;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulation studies on the AR(2) design");
  sim_cmd->add_option("--preset", sim.preset, "table1, orders or robustness")
      ->check(CLI::IsMember({"table1", "orders", "robustness"}))
      ->capture_default_str();
  sim_cmd->add_option("--replications", sim.replications, "Replications")->capture_default_str();
  sim_cmd->add_option("--k", sim.max_order, "Largest candidate order K (0: preset default)");
  sim_mcmc.add(sim_cmd);
  add_common(sim_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Outputs files;
    if (*fit_cmd) {
      fit.family = parse_family(fit_family);
      fit.mcmc = fit_mcmc.resolve(McmcConfig{});
      fit.seed = common.seed;
      files = cmd_fit(fit);
    } else if (*fc_cmd) {
      fc.plan.family = parse_family(fc_family);
      fc.plan.rule = parse_order_rule(fc_rule);
      fc.plan.engine = parse_engine(fc_engine);
      fc.plan.statistic = parse_statistic(fc_stat);
      fc.plan.tau_denominator = parse_tau_denominator(fc_tau);
      fc.plan.difference = !fc_no_diff;
      fc.plan.mcmc = fc_mcmc.resolve(McmcConfig{});
      fc.plan.seed = common.seed;
      fc.plan.threads = common.threads;
      files = cmd_forecast(fc);
    } else if (*so_cmd) {
      so.family = parse_family(so_family);
      so.tau_denominator = parse_tau_denominator(so_tau);
      so.seed = common.seed;
      files = cmd_select_order(so);
    } else if (*bt_cmd) {
      bt.engine = parse_engine(bt_engine);
      bt.statistic = parse_statistic(bt_stat);
      bt.tau_denominator = parse_tau_denominator(bt_tau);
      bt.difference = !bt_no_diff;
      bt.mcmc = bt_mcmc.resolve(backtest_mcmc_defaults());
      bt.seed = common.seed;
      bt.threads = common.threads;
      files = cmd_backtest(bt);
    } else if (*sim_cmd) {
      sim.mcmc = sim_mcmc.resolve(McmcConfig{});
      sim.mcmc_set = sim_mcmc.set();
      sim.seed = common.seed;
      sim.threads = common.threads;
      files = cmd_simulate(sim);
    }
    write_outputs(common.out, files);
    for (const auto& f : files) std::cout << (std::filesystem::path(common.out) / f.first).string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    const int rc = exit_code_for(e);
    const char* kind = rc == 2 ? "config error" : rc == 3 ? "data error" : rc == 4 ? "numeric error" : "error";
    std::cerr << "bayesmar: " << kind << ": " << e.what() << '\n';
    return rc;
  }
}
