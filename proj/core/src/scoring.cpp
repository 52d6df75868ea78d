#include "bayesmar/scoring.hpp"

#include "bayesmar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace bayesmar {

double rmse(std::span<const double> errors) {
  if (errors.empty()) throw DataError("rmse: no errors");
  double sum = 0.0;
  for (double e : errors) sum += e * e;
  return std::sqrt(sum / static_cast<double>(errors.size()));
}

double mae(std::span<const double> errors) {
  if (errors.empty()) throw DataError("mae: no errors");
  double sum = 0.0;
  for (double e : errors) sum += std::abs(e);
  return sum / static_cast<double>(errors.size());
}

double relative_change(double metric, double baseline) {
  if (!(baseline > 0.0)) throw DomainError("relative_change: baseline must be positive");
  return (metric / baseline - 1.0) * 100.0;
}

double crps_sample(std::span<const double> samples, double observed) {
  const std::size_t m = samples.size();
  if (m < 2) throw DataError("crps_sample: need at least two samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double spread = 0.0;  // sum_{i<j} (x_(j) - x_(i)) = sum_i (2i - m - 1) x_(i), i 1-based
  double miss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    spread += (2.0 * static_cast<double>(i + 1) - static_cast<double>(m) - 1.0) * sorted[i];
    miss += std::abs(sorted[i] - observed);
  }
  const double md = static_cast<double>(m);
  return miss / md - spread / (md * md);
}

double crps_laplace_closed(double mu, double b, double observed) {
  if (!(b > 0.0)) throw DomainError("crps_laplace_closed: scale must be positive");
  const double d = std::abs(observed - mu);
  return d + b * std::exp(-d / b) - 0.75 * b;
}

MetricTable make_metric_table(std::string metric, std::string baseline,
                              const std::vector<std::pair<std::string, std::vector<double>>>& values) {
  if (values.empty()) throw ConfigError("metric table: no methods");
  const auto base = std::find_if(values.begin(), values.end(),
                                 [&](const auto& v) { return v.first == baseline; });
  if (base == values.end()) throw ConfigError("metric table: baseline '" + baseline + "' missing");
  MetricTable t;
  t.metric = std::move(metric);
  t.baseline = std::move(baseline);
  t.horizons = static_cast<int>(base->second.size());
  for (const auto& [method, vals] : values) {
    if (vals.size() != base->second.size()) throw ConfigError("metric table: horizon mismatch");
    MetricRow row{method, vals, {}};
    for (std::size_t h = 0; h < vals.size(); ++h) {
      row.relative_changes.push_back(method == t.baseline ? 0.0
                                                          : relative_change(vals[h], base->second[h]));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_metric_table_csv(std::ostream& os, const MetricTable& t, const std::string& series,
                            bool header) {
  const bool with_series = !series.empty();
  if (header) {
    if (with_series) os << "series,";
    os << "method";
    for (int h = 1; h <= t.horizons; ++h) os << ',' << t.metric << "_h" << h;
    for (int h = 1; h <= t.horizons; ++h) os << ",rel_h" << h;
    os << '\n';
  }
  const auto prec = os.precision(10);
  for (const MetricRow& r : t.rows) {
    if (with_series) os << series << ',';
    os << r.method;
    for (double v : r.values) os << ',' << v;
    for (double v : r.relative_changes) {
      os << ',';
      if (r.method == t.baseline) {
        os << '-';
      } else {
        os << v;
      }
    }
    os << '\n';
  }
  os.precision(prec);
}

}  // namespace bayesmar
