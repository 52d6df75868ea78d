#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bayesmar {

double rmse(std::span<const double> errors);
double mae(std::span<const double> errors);

// (metric / baseline - 1) * 100.
double relative_change(double metric, double baseline);

// Energy-form sample CRPS,
//   (1/M) sum_i |X_i - y| - (1 / 2M^2) sum_i sum_j |X_i - X_j|,
// evaluated in O(M log M) by sorting.
double crps_sample(std::span<const double> samples, double observed);

// Closed-form CRPS of Laplace(mu, b) (density (1/2b) exp(-|x - mu| / b)):
//   |y - mu| + b exp(-|y - mu| / b) - 3b / 4.
double crps_laplace_closed(double mu, double b, double observed);

struct MetricRow {
  std::string method;
  std::vector<double> values;            // per horizon
  std::vector<double> relative_changes;  // percent vs baseline, per horizon
};

// One metric (RMSE, MAE or CRPS) for several methods, laid out as rows =
// methods and columns = horizons, with relative changes against `baseline`.
struct MetricTable {
  std::string metric;
  std::string baseline;
  int horizons = 0;
  std::vector<MetricRow> rows;
};

// Builds the relative-change columns. Throws if `baseline` is not a row.
MetricTable make_metric_table(std::string metric, std::string baseline,
                              const std::vector<std::pair<std::string, std::vector<double>>>& values);

// CSV: [series,]method,<metric>_h1..hH,rel_h1..hH
void write_metric_table_csv(std::ostream& os, const MetricTable& table,
                            const std::string& series = {}, bool header = true);

}  // namespace bayesmar
