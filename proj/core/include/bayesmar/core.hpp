#pragma once

// Domain types shared by every module, the Laplace / asymmetric Laplace /
// Gaussian log densities, and the likelihood and marginal-posterior
// kernels of the median autoregression MAR(p):
//
//   y_t = b0 + b1 y_{t-1} + ... + bp y_{t-p} + e_t,
//   e_t ~ Laplace(0, 2 tau)  with density (1 / 4tau) exp(-|x| / 2tau).
//
// Time indices in this library are 0-based. A "first" argument names the
// index of the first response that enters a sum; it must be >= p so that
// all p lags exist.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bayesmar {

class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> values,
                      std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return !labels_.empty(); }

  // First n observations, copied. Used to build look-ahead-free windows.
  TimeSeries head(std::size_t n) const;
  std::optional<std::size_t> find_label(std::string_view label) const;

 private:
  std::vector<double> values_;
  std::vector<std::string> labels_;
};

enum class ErrorFamily { laplace, gaussian };

std::string_view to_string(ErrorFamily family) noexcept;
ErrorFamily parse_family(std::string_view text);

// (b0, b1, ..., bp); intercept first.
class Coefficients {
 public:
  explicit Coefficients(Eigen::VectorXd beta);
  Coefficients(std::initializer_list<double> beta);

  int order() const noexcept { return static_cast<int>(beta_.size()) - 1; }
  double intercept() const noexcept { return beta_[0]; }
  double lag(int j) const { return beta_[j]; }
  const Eigen::VectorXd& vector() const noexcept { return beta_; }

 private:
  Eigen::VectorXd beta_;
};

// Laplace: tau (the paper-style scale, error scale b = 2 tau).
// Gaussian: sigma (standard deviation).
class ScaleParam {
 public:
  explicit ScaleParam(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

struct PosteriorDraws {
  Eigen::MatrixXd beta_draws;  // n_kept x (p + 1)
  Eigen::VectorXd tau_draws;   // n_kept; sigma for the Gaussian family
  double acceptance_rate = 0.0;
  double step_size = 0.0;
  int order = 0;
  std::size_t n_total = 0;
  std::size_t n_burn = 0;
  ErrorFamily family = ErrorFamily::laplace;
  std::vector<std::uint8_t> accepted;  // per kept iteration; may be empty

  std::size_t n_kept() const noexcept {
    return static_cast<std::size_t>(beta_draws.rows());
  }
  // Throws DataError when the invariants (row counts, positive tau,
  // acceptance in [0, 1]) do not hold.
  void validate() const;
};

// Lagged regression problem: rows t = first..T-1 of
//   y_t ~ [1, y_{t-1}, ..., y_{t-p}].
struct LagDesign {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::size_t first = 0;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(y.size()); }
};

LagDesign make_design(std::span<const double> series, int order, std::size_t first);

double laplace_logpdf(double x, double tau);
double asymmetric_laplace_logpdf(double x, double mu, double tau, double theta);
double gaussian_logpdf(double x, double sigma);

// S(beta) = sum_{t >= first} 0.5 |y_t - y'_{t-1} beta|.
double sum_abs_residuals(const TimeSeries& y, const Coefficients& coeff, std::size_t first);
double sum_abs_residuals(const LagDesign& design, const Eigen::VectorXd& beta);
double sum_sq_residuals(const TimeSeries& y, const Coefficients& coeff, std::size_t first);
double sum_sq_residuals(const LagDesign& design, const Eigen::VectorXd& beta);

double log_likelihood(const TimeSeries& y, const Coefficients& coeff, ScaleParam scale,
                      ErrorFamily family, std::size_t first);

// log pi(beta | y) with tau (or sigma) integrated out, additive constant 0:
//   Laplace:  -n log S(beta)
//   Gaussian: -(n / 2) log RSS(beta)
// with n = T - first terms. Returns +inf when the kernel statistic is 0.
double log_marginal_posterior_beta(const TimeSeries& y, const Coefficients& coeff,
                                   std::size_t first,
                                   ErrorFamily family = ErrorFamily::laplace);
double log_marginal_posterior_from_stat(double stat, std::size_t n_terms, ErrorFamily family);

TimeSeries diff1(const TimeSeries& y);
std::vector<double> undiff1(std::span<const double> deltas, double last_level);

}  // namespace bayesmar
