#include "bayesmar/order_select.hpp"

#include "bayesmar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace bayesmar {

namespace {

void check_alignment(std::size_t length, int order, int max_order) {
  if (order < 1 || order > max_order) {
    throw ConfigError("order " + std::to_string(order) + " outside 1.." + std::to_string(max_order));
  }
  if (static_cast<std::size_t>(max_order) >= length) {
    throw LengthError("max order " + std::to_string(max_order) + " must be below series length");
  }
  if (length - static_cast<std::size_t>(max_order) < static_cast<std::size_t>(order) + 2) {
    throw LengthError("aligned window of " + std::to_string(length - max_order) +
                      " observations too small for order " + std::to_string(order));
  }
}

}  // namespace

double bic_from_fit(const MleFit& fit) {
  const double n = static_cast<double>(fit.n_used);
  const double k = static_cast<double>(fit.coeff.order() + 2);
  const double s = fit.scale.value();
  double loglik = 0.0;
  if (fit.family == ErrorFamily::laplace) {
    loglik = -n * std::log(4.0 * s) - fit.objective / s;
  } else {
    loglik = -0.5 * n * std::log(2.0 * std::numbers::pi * s * s) - 0.5 * fit.objective / (s * s);
  }
  return k * std::log(n) - 2.0 * loglik;
}

double bic(const TimeSeries& y, int order, int max_order, ErrorFamily family,
           TauDenominator denominator) {
  check_alignment(y.size(), order, max_order);
  return bic_from_fit(fit_mle(y, order, static_cast<std::size_t>(max_order), family, denominator));
}

std::vector<double> bma_weights(const std::vector<double>& bics) {
  if (bics.empty()) throw ConfigError("bma_weights: empty BIC vector");
  for (double b : bics) {
    if (!std::isfinite(b)) throw NumericError("bma_weights: non-finite BIC");
  }
  const double lowest = *std::min_element(bics.begin(), bics.end());
  std::vector<double> w(bics.size());
  double total = 0.0;
  for (std::size_t i = 0; i < bics.size(); ++i) {
    w[i] = std::exp(-0.5 * (bics[i] - lowest));
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

int map_order(const std::vector<double>& bics) {
  if (bics.empty()) throw ConfigError("map_order: empty BIC vector");
  // strict < keeps the smallest order on ties
  std::size_t best = 0;
  for (std::size_t i = 1; i < bics.size(); ++i) {
    if (bics[i] < bics[best]) best = i;
  }
  return static_cast<int>(best) + 1;
}

OrderEnsemble build_ensemble(const TimeSeries& y, int max_order, ErrorFamily family,
                             TauDenominator denominator) {
  if (max_order < 1) throw ConfigError("build_ensemble: max order must be at least 1");
  check_alignment(y.size(), max_order, max_order);
  OrderEnsemble e;
  e.max_order = max_order;
  e.family = family;
  e.fits.reserve(static_cast<std::size_t>(max_order));
  for (int p = 1; p <= max_order; ++p) {
    e.fits.push_back(fit_mle(y, p, e.first(), family, denominator));
    e.bics.push_back(bic_from_fit(e.fits.back()));
  }
  e.weights = bma_weights(e.bics);
  e.map_order = map_order(e.bics);
  return e;
}

void write_ensemble_csv(std::ostream& os, const OrderEnsemble& e) {
  os << "order,bic,weight";
  for (int j = 0; j <= e.max_order; ++j) os << ",beta_" << j;
  os << (e.family == ErrorFamily::laplace ? ",tau\n" : ",sigma\n");
  const auto prec = os.precision(17);
  for (std::size_t i = 0; i < e.fits.size(); ++i) {
    const MleFit& f = e.fits[i];
    os << i + 1 << ',' << e.bics[i] << ',' << e.weights[i];
    for (int j = 0; j <= e.max_order; ++j) {
      os << ',';
      if (j <= f.coeff.order()) os << f.coeff.vector()[j];
    }
    os << ',' << f.scale.value() << '\n';
  }
  os.precision(prec);
}

}  // namespace bayesmar
