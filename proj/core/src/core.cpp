#include "bayesmar/core.hpp"

#include "bayesmar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bayesmar {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DataError(std::string(what) + ": non-finite value at index " + std::to_string(i));
    }
  }
}

void check_window(std::size_t size, int order, std::size_t first) {
  if (order < 0) throw ConfigError("order must be non-negative");
  if (first < static_cast<std::size_t>(order)) {
    throw LengthError("insufficient history: first target index " + std::to_string(first) +
                      " precedes order " + std::to_string(order));
  }
  if (first >= size) {
    throw LengthError("empty window: first target index " + std::to_string(first) +
                      " beyond series of length " + std::to_string(size));
  }
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
  if (values_.empty()) throw DataError("time series must contain at least one value");
  require_finite(values_, "time series");
  if (!labels_.empty() && labels_.size() != values_.size()) {
    throw DataError("label count " + std::to_string(labels_.size()) +
                    " does not match value count " + std::to_string(values_.size()));
  }
}

TimeSeries TimeSeries::head(std::size_t n) const {
  if (n == 0 || n > values_.size()) throw LengthError("head: length out of range");
  std::vector<double> v(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<std::string> l;
  if (has_labels()) l.assign(labels_.begin(), labels_.begin() + static_cast<std::ptrdiff_t>(n));
  return TimeSeries(std::move(v), std::move(l));
}

std::optional<std::size_t> TimeSeries::find_label(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::string_view to_string(ErrorFamily family) noexcept {
  return family == ErrorFamily::laplace ? "laplace" : "gaussian";
}

ErrorFamily parse_family(std::string_view text) {
  if (text == "laplace") return ErrorFamily::laplace;
  if (text == "gaussian") return ErrorFamily::gaussian;
  throw ConfigError("unknown error family '" + std::string(text) + "'");
}

Coefficients::Coefficients(Eigen::VectorXd beta) : beta_(std::move(beta)) {
  if (beta_.size() < 1) throw ConfigError("coefficient vector must hold an intercept");
  if (!beta_.allFinite()) throw DataError("coefficients must be finite");
}

Coefficients::Coefficients(std::initializer_list<double> beta)
    : Coefficients(Eigen::Map<const Eigen::VectorXd>(beta.begin(),
                                                     static_cast<Eigen::Index>(beta.size()))) {}

ScaleParam::ScaleParam(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError("scale parameter must be positive and finite");
  }
}

void PosteriorDraws::validate() const {
  if (n_burn >= n_total) throw DataError("posterior draws: n_burn must be below n_total");
  if (n_kept() != n_total - n_burn) throw DataError("posterior draws: kept count mismatch");
  if (static_cast<std::size_t>(tau_draws.size()) != n_kept())
    throw DataError("posterior draws: tau count mismatch");
  if (beta_draws.cols() != order + 1) throw DataError("posterior draws: column count mismatch");
  if ((tau_draws.array() <= 0.0).any()) throw DataError("posterior draws: non-positive tau");
  if (acceptance_rate < 0.0 || acceptance_rate > 1.0)
    throw DataError("posterior draws: acceptance rate outside [0, 1]");
}

LagDesign make_design(std::span<const double> series, int order, std::size_t first) {
  check_window(series.size(), order, first);
  const auto n = static_cast<Eigen::Index>(series.size() - first);
  LagDesign d;
  d.first = first;
  d.x.resize(n, order + 1);
  d.y.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t t = first + static_cast<std::size_t>(r);
    d.y[r] = series[t];
    d.x(r, 0) = 1.0;
    for (int j = 1; j <= order; ++j) d.x(r, j) = series[t - static_cast<std::size_t>(j)];
  }
  return d;
}

double laplace_logpdf(double x, double tau) {
  if (!(tau > 0.0)) throw DomainError("laplace_logpdf: tau must be positive");
  return -std::log(4.0 * tau) - std::abs(x) / (2.0 * tau);
}

double asymmetric_laplace_logpdf(double x, double mu, double tau, double theta) {
  if (!(tau > 0.0)) throw DomainError("asymmetric_laplace_logpdf: tau must be positive");
  if (!(theta > 0.0 && theta < 1.0))
    throw DomainError("asymmetric_laplace_logpdf: theta must lie in (0, 1)");
  const double u = x - mu;
  const double indicator = u < 0.0 ? 1.0 : 0.0;
  return std::log(theta * (1.0 - theta) / tau) - u * (theta - indicator) / tau;
}

double gaussian_logpdf(double x, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gaussian_logpdf: sigma must be positive");
  const double z = x / sigma;
  return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sigma) - 0.5 * z * z;
}

double sum_abs_residuals(const LagDesign& design, const Eigen::VectorXd& beta) {
  return 0.5 * (design.y - design.x * beta).cwiseAbs().sum();
}

double sum_sq_residuals(const LagDesign& design, const Eigen::VectorXd& beta) {
  return (design.y - design.x * beta).squaredNorm();
}

double sum_abs_residuals(const TimeSeries& y, const Coefficients& coeff, std::size_t first) {
  return sum_abs_residuals(make_design(y.values(), coeff.order(), first), coeff.vector());
}

double sum_sq_residuals(const TimeSeries& y, const Coefficients& coeff, std::size_t first) {
  return sum_sq_residuals(make_design(y.values(), coeff.order(), first), coeff.vector());
}

double log_likelihood(const TimeSeries& y, const Coefficients& coeff, ScaleParam scale,
                      ErrorFamily family, std::size_t first) {
  const LagDesign d = make_design(y.values(), coeff.order(), first);
  const double n = static_cast<double>(d.rows());
  const double s = scale.value();
  if (family == ErrorFamily::laplace) {
    return -n * std::log(4.0 * s) - sum_abs_residuals(d, coeff.vector()) / s;
  }
  return -0.5 * n * std::log(2.0 * std::numbers::pi * s * s) -
         0.5 * sum_sq_residuals(d, coeff.vector()) / (s * s);
}

double log_marginal_posterior_from_stat(double stat, std::size_t n_terms, ErrorFamily family) {
  if (n_terms == 0) throw LengthError("marginal posterior needs at least one term");
  if (stat <= 0.0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(n_terms);
  return family == ErrorFamily::laplace ? -n * std::log(stat) : -0.5 * n * std::log(stat);
}

double log_marginal_posterior_beta(const TimeSeries& y, const Coefficients& coeff,
                                   std::size_t first, ErrorFamily family) {
  const LagDesign d = make_design(y.values(), coeff.order(), first);
  const double stat = family == ErrorFamily::laplace ? sum_abs_residuals(d, coeff.vector())
                                                     : sum_sq_residuals(d, coeff.vector());
  return log_marginal_posterior_from_stat(stat, d.rows(), family);
}

TimeSeries diff1(const TimeSeries& y) {
  if (y.size() < 2) throw LengthError("diff1 needs at least two observations");
  std::vector<double> out(y.size() - 1);
  for (std::size_t t = 1; t < y.size(); ++t) out[t - 1] = y[t] - y[t - 1];
  std::vector<std::string> labels;
  if (y.has_labels()) labels.assign(y.labels().begin() + 1, y.labels().end());
  return TimeSeries(std::move(out), std::move(labels));
}

std::vector<double> undiff1(std::span<const double> deltas, double last_level) {
  std::vector<double> out(deltas.size());
  double level = last_level;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    level += deltas[i];
    out[i] = level;
  }
  return out;
}

}  // namespace bayesmar
