#include "cli.hpp"

#include "bayesmar/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bayesmar::cli {

using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

json mcmc_json(const McmcConfig& m) {
  return json{{"n_total", m.n_total},
              {"n_burn", m.n_burn},
              {"initial_step", m.initial_step},
              {"band", {m.band.lower, m.band.upper}},
              {"adapt_window", m.adapt_window}};
}

std::string to_string(TauDenominator d) { return d == TauDenominator::paper ? "paper" : "mle"; }

// CSV files carry their configuration as a leading comment line.
std::string with_config(const json& config, const std::string& csv) {
  return "# " + config.dump() + "\n" + csv;
}

std::string series_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void check_input(const TimeSeries& y, int needed, const std::string& what) {
  if (y.size() < static_cast<std::size_t>(needed))
    throw LengthError(what + ": series has " + std::to_string(y.size()) + " observations, need at least " +
                      std::to_string(needed));
}

}  // namespace

TimeSeries parse_series_csv(std::istream& in) {
  std::vector<double> values;
  std::vector<std::string> labels;
  std::string line;
  std::size_t row = 0;
  bool seen_header = false;
  std::size_t columns = 0;
  std::vector<std::size_t> blank_rows;

  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      blank_rows.push_back(row);
      continue;
    }
    // a blank line followed by more data is a missing value
    if (!blank_rows.empty()) throw ParseError("missing value", blank_rows.front());
    const auto fields = split_fields(line);
    if (values.empty() && !seen_header) {
      const bool numeric = fields.size() == 1 ? parse_number(fields[0]).has_value()
                                              : fields.size() == 2 && parse_number(fields[1]).has_value();
      if (!numeric && fields.size() <= 2 && lower(fields.back()) == "value") {
        seen_header = true;
        columns = fields.size();
        continue;
      }
    }
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " column(s), found " +
                           std::to_string(fields.size()),
                       row);
    }
    if (columns > 2) throw ParseError("too many columns", row);
    const std::string& cell = fields.back();
    if (cell.empty()) throw ParseError("missing value", row);
    const auto v = parse_number(cell);
    if (!v) throw ParseError("non-numeric value '" + cell + "'", row);
    if (!std::isfinite(*v)) throw ParseError("non-finite value '" + cell + "'", row);
    if (columns == 2) {
      if (fields.front().empty()) throw ParseError("missing period label", row);
      labels.push_back(fields.front());
    }
    values.push_back(*v);
  }
  if (values.empty()) throw ParseError("no observations", std::max<std::size_t>(row, 1));
  return TimeSeries(std::move(values), std::move(labels));
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_series_csv(in);
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const DataError*>(&e)) return 3;
  if (dynamic_cast<const NumericError*>(&e)) return 4;
  return 1;
}

void write_outputs(const std::filesystem::path& dir, const Outputs& files) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw DataError("cannot write '" + (dir / name).string() + "'");
    out << content;
  }
}

McmcConfig paper_fidelity_mcmc() { return McmcConfig{}; }

std::size_t resolve_t0(const TimeSeries& series, const std::string& t0) {
  if (t0.empty()) throw ConfigError("t0 is required");
  if (auto idx = series.find_label(t0)) return *idx;
  if (t0.find_first_not_of("0123456789") == std::string::npos) {
    const std::size_t one_based = std::stoul(t0);
    if (one_based < 1 || one_based > series.size())
      throw ConfigError("t0 index " + t0 + " outside 1.." + std::to_string(series.size()));
    return one_based - 1;
  }
  throw ConfigError("t0 '" + t0 + "' is neither a period label in the input nor a 1-based index");
}

PointStatistic parse_statistic(std::string_view text) {
  if (text == "mean") return PointStatistic::mean;
  if (text == "median") return PointStatistic::median;
  throw ConfigError("point statistic must be 'mean' or 'median', got '" + std::string(text) + "'");
}

TauDenominator parse_tau_denominator(std::string_view text) {
  if (text == "paper") return TauDenominator::paper;
  if (text == "mle") return TauDenominator::mle;
  throw ConfigError("tau denominator must be 'paper' or 'mle', got '" + std::string(text) + "'");
}

Outputs cmd_fit(const FitOptions& o) {
  o.mcmc.validate();
  if (o.order < 1) throw ConfigError("order must be at least 1");
  const TimeSeries raw = read_series_csv(o.input);
  check_input(raw, o.difference ? 2 : 1, "fit");
  const TimeSeries y = o.difference ? diff1(raw) : raw;

  McmcConfig cfg = o.mcmc;
  cfg.seed = o.seed;
  const PosteriorDraws draws = run_mh(y, o.order, o.family, cfg);
  const MleFit mle = fit_mle(y, o.order, static_cast<std::size_t>(o.order), o.family);

  const json config{{"command", "fit"},
                    {"input", o.input},
                    {"family", to_string(o.family)},
                    {"order", o.order},
                    {"difference", o.difference},
                    {"mcmc", mcmc_json(o.mcmc)},
                    {"seed", o.seed}};
  json params = json::array();
  for (const auto& s : summarize(draws)) {
    params.push_back({{"name", s.name}, {"mean", s.mean}, {"sd", s.sd}, {"q025", s.q025},
                      {"q500", s.q500}, {"q975", s.q975}});
  }
  std::vector<double> beta(mle.coeff.vector().data(), mle.coeff.vector().data() + mle.coeff.vector().size());
  const json out{{"config", config},
                 {"observations", y.size()},
                 {"acceptance_rate", draws.acceptance_rate},
                 {"step_size", draws.step_size},
                 {"kept_draws", draws.n_kept()},
                 {"parameters", params},
                 {"mle", {{"beta", beta}, {"scale", mle.scale.value()}, {"objective", mle.objective}}},
                 {"seed", o.seed}};
  Outputs files{{"fit.json", out.dump(2) + "\n"}};
  if (o.trace) {
    std::ostringstream os;
    write_trace_csv(os, draws);
    files.emplace_back("trace.csv", with_config(config, os.str()));
  }
  return files;
}

Outputs cmd_forecast(const ForecastOptions& o) {
  o.plan.validate();
  const TimeSeries y = read_series_csv(o.input);
  check_input(y, o.plan.difference ? 2 : 1, "forecast");
  const ForecastOutcome fc = forecast_series(y, o.plan);
  const ForecastPlan& p = o.plan;

  const json config{{"command", "forecast"},
                    {"input", o.input},
                    {"family", to_string(p.family)},
                    {"order_rule", to_string(p.rule)},
                    {"order", p.fixed_order},
                    {"k", p.max_order},
                    {"h", p.horizon},
                    {"level", p.level},
                    {"statistic", to_string(p.statistic)},
                    {"difference", p.difference},
                    {"engine", to_string(p.engine)},
                    {"mcmc", mcmc_json(p.mcmc)},
                    {"thin", p.thin},
                    {"min_weight", p.min_weight},
                    {"tau_denominator", to_string(p.tau_denominator)},
                    {"seed", p.seed}};
  json horizons = json::array();
  for (int h = 0; h < fc.result.horizons; ++h) {
    horizons.push_back({{"h", h + 1},
                        {"point", fc.result.point[h]},
                        {"lower", fc.result.intervals[static_cast<std::size_t>(h)].lower},
                        {"upper", fc.result.intervals[static_cast<std::size_t>(h)].upper}});
  }
  json components = json::array();
  for (const auto& c : fc.components) {
    json row{{"order", c.order}, {"weight", c.weight}};
    if (p.engine == FitEngine::mcmc) row["acceptance_rate"] = c.acceptance_rate;
    components.push_back(row);
  }
  const json out{{"config", config},
                 {"horizons", horizons},
                 {"components", components},
                 {"map_order", fc.map_order},
                 {"seed", p.seed}};
  Outputs files{{"forecast.json", out.dump(2) + "\n"}};
  if (o.paths) {
    std::ostringstream os;
    write_paths_csv(os, fc.result);
    files.emplace_back("paths.csv", with_config(config, os.str()));
  }
  return files;
}

Outputs cmd_select_order(const SelectOrderOptions& o) {
  if (o.max_order < 1) throw ConfigError("k must be at least 1");
  const TimeSeries raw = read_series_csv(o.input);
  check_input(raw, o.difference ? 2 : 1, "select-order");
  const TimeSeries y = o.difference ? diff1(raw) : raw;
  const OrderEnsemble e = build_ensemble(y, o.max_order, o.family, o.tau_denominator);
  const json config{{"command", "select-order"},
                    {"input", o.input},
                    {"family", to_string(o.family)},
                    {"k", o.max_order},
                    {"difference", o.difference},
                    {"tau_denominator", to_string(o.tau_denominator)},
                    {"map_order", e.map_order},
                    {"seed", o.seed}};
  std::ostringstream os;
  write_ensemble_csv(os, e);
  return {{"ensemble.csv", with_config(config, os.str())}};
}

Outputs cmd_backtest(const BacktestOptions& o) {
  if (o.inputs.empty()) throw ConfigError("backtest needs at least one --input");
  std::vector<BacktestMethod> methods;
  for (const auto& m : o.methods) methods.push_back(parse_backtest_method(m));
  o.mcmc.validate();

  json config{{"command", "backtest"},
              {"inputs", o.inputs},
              {"t0", o.t0},
              {"h", o.horizon},
              {"k", o.max_order},
              {"methods", o.methods},
              {"baseline", o.baseline},
              {"level", o.level},
              {"statistic", to_string(o.statistic)},
              {"difference", o.difference},
              {"engine", to_string(o.engine)},
              {"mcmc", mcmc_json(o.mcmc)},
              {"thin", o.thin},
              {"min_weight", o.min_weight},
              {"tau_denominator", to_string(o.tau_denominator)},
              {"seed", o.seed}};

  // validate every input before any sampling starts
  std::vector<BacktestSpec> specs;
  for (const auto& path : o.inputs) {
    BacktestSpec s;
    s.series = read_series_csv(path);
    s.first_target = resolve_t0(s.series, o.t0);
    s.horizon = o.horizon;
    s.methods = methods;
    s.baseline = o.baseline;
    s.mcmc = o.mcmc;
    s.max_order = o.max_order;
    s.level = o.level;
    s.difference = o.difference;
    s.engine = o.engine;
    s.statistic = o.statistic;
    s.thin = o.thin;
    s.min_weight = o.min_weight;
    s.tau_denominator = o.tau_denominator;
    s.seed = derive_seed(o.seed, hash_label(series_name(path)));
    s.threads = o.threads;
    s.validate();
    specs.push_back(std::move(s));
  }

  std::ostringstream rmse_os, mae_os, crps_os, long_os, counts_os;
  counts_os << "series,horizon,count\n";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string name = series_name(o.inputs[i]);
    const BacktestReport r = run_backtest(specs[i]);
    write_metric_table_csv(rmse_os, r.rmse, name, i == 0);
    write_metric_table_csv(mae_os, r.mae, name, i == 0);
    write_metric_table_csv(crps_os, r.crps, name, i == 0);
    std::ostringstream one;
    write_backtest_long_csv(one, r, &specs[i].series);
    std::string body = one.str();
    const auto nl = body.find('\n');
    if (i == 0) long_os << "series," << body.substr(0, nl + 1);
    std::istringstream rows(body.substr(nl + 1));
    for (std::string line; std::getline(rows, line);) long_os << name << ',' << line << '\n';
    for (std::size_t h = 0; h < r.counts.size(); ++h) {
      counts_os << name << ',' << h + 1 << ',' << r.counts[h] << '\n';
    }
  }
  return {{"rmse.csv", with_config(config, rmse_os.str())},
          {"mae.csv", with_config(config, mae_os.str())},
          {"crps.csv", with_config(config, crps_os.str())},
          {"backtest_long.csv", with_config(config, long_os.str())},
          {"counts.csv", with_config(config, counts_os.str())}};
}

Outputs cmd_simulate(const SimulateOptions& o) {
  if (o.replications < 1) throw ConfigError("replications must be at least 1");
  if (o.mcmc_set) o.mcmc.validate();
  json config{{"command", "simulate"},
              {"preset", o.preset},
              {"replications", o.replications},
              {"seed", o.seed}};

  if (o.preset == "table1" || o.preset == "orders") {
    SimStudyConfig base;
    base.replications = o.replications;
    base.seed = o.seed;
    base.threads = o.threads;
    if (o.max_order > 0) base.max_order = o.max_order;
    if (o.mcmc_set) base.mcmc = o.mcmc;
    config["k"] = base.max_order;
    config["series_length"] = base.series_length;
    config["burn"] = base.burn;
    config["mcmc"] = mcmc_json(base.mcmc);

    if (o.preset == "table1") {
      std::vector<MseStudyReport> reports;
      std::ostringstream acc;
      acc << "noise,method,min,mean,max,outside_band\n";
      for (ErrorFamily fam : {ErrorFamily::laplace, ErrorFamily::gaussian}) {
        SimStudyConfig c = base;
        c.noise.family = fam;
        reports.push_back(run_mse_study(c));
        for (const auto& m : reports.back().methods) {
          if (m.acceptance_rates.empty()) continue;
          const auto [lo, hi] = std::minmax_element(m.acceptance_rates.begin(), m.acceptance_rates.end());
          double sum = 0.0;
          std::size_t outside = 0;
          for (double a : m.acceptance_rates) {
            sum += a;
            outside += (a < c.mcmc.band.lower || a > c.mcmc.band.upper) ? 1 : 0;
          }
          acc << to_string(fam) << ',' << m.method << ',' << *lo << ','
              << sum / static_cast<double>(m.acceptance_rates.size()) << ',' << *hi << ',' << outside << '\n';
        }
      }
      std::ostringstream os;
      write_mse_table_csv(os, reports);
      return {{"table1.csv", with_config(config, os.str())},
              {"table1_acceptance.csv", with_config(config, acc.str())}};
    }

    std::vector<OrderStudyReport> reports;
    for (ErrorFamily fam : {ErrorFamily::laplace, ErrorFamily::gaussian}) {
      SimStudyConfig c = base;
      c.noise.family = fam;
      c.include_bayes = false;
      reports.push_back(run_order_study(c));
    }
    std::ostringstream os;
    write_order_histogram_csv(os, reports);
    std::ostringstream acc;
    acc << "noise,accuracy\n";
    for (const auto& r : reports) acc << to_string(r.config.noise.family) << ',' << r.accuracy << '\n';
    return {{"orders.csv", with_config(config, os.str())},
            {"orders_accuracy.csv", with_config(config, acc.str())}};
  }

  if (o.preset == "robustness") {
    RobustnessConfig c;
    c.replications = o.replications;
    c.seed = o.seed;
    c.threads = o.threads;
    if (o.max_order > 0) c.max_order = o.max_order;
    if (o.mcmc_set) c.mcmc = o.mcmc;
    config["k"] = c.max_order;
    config["series_length"] = c.series_length;
    config["origins"] = c.origins;
    config["noise"] = {{"family", to_string(c.noise.family)},
                       {"scale", c.noise.scale},
                       {"contamination", c.noise.contamination},
                       {"shift", c.noise.shift}};
    config["min_weight"] = c.min_weight;
    config["mcmc"] = mcmc_json(c.mcmc);
    const RobustnessReport r = run_robustness_study(c);
    std::ostringstream os;
    os.precision(10);
    os << "horizon,laplace_bma_rmse,gaussian_bma_rmse,laplace_bma_crps,gaussian_bma_crps\n";
    for (std::size_t h = 0; h < r.laplace_rmse.size(); ++h) {
      os << h + 1 << ',' << r.laplace_rmse[h] << ',' << r.gaussian_rmse[h] << ',' << r.laplace_crps[h] << ','
         << r.gaussian_crps[h] << '\n';
    }
    return {{"robustness.csv", with_config(config, os.str())}};
  }
  throw ConfigError("unknown preset '" + o.preset + "' (table1, orders, robustness)");
}

}  // namespace bayesmar::cli
