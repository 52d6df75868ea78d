#pragma once

#include "bayesmar/mle_fit.hpp"

#include <iosfwd>
#include <vector>

namespace bayesmar {

// BIC of MAR(p) / AR(p) on the aligned window t = K..T-1 (the last T - K
// observations), so every order is scored on the same responses:
//   Laplace:  (p + 2) log n - 2 [ -n log(4 tau) - S_K(beta) / tau ]
//   Gaussian: (p + 2) log n - 2 [ -(n / 2) log(2 pi sigma^2) - n / 2 ]
// with beta, tau (sigma) the window MLE.
double bic(const TimeSeries& y, int order, int max_order, ErrorFamily family,
           TauDenominator denominator = TauDenominator::paper);

// BIC from an existing fit on the aligned window.
double bic_from_fit(const MleFit& fit);

// w_p proportional to exp(-BIC_p / 2), computed relative to the smallest BIC.
std::vector<double> bma_weights(const std::vector<double>& bics);

// 1-based index of the smallest BIC; ties go to the smaller order.
int map_order(const std::vector<double>& bics);

struct OrderEnsemble {
  int max_order = 0;
  std::vector<MleFit> fits;   // fits[p - 1] is order p
  std::vector<double> bics;
  std::vector<double> weights;
  int map_order = 0;
  ErrorFamily family = ErrorFamily::laplace;

  // Aligned-window start (0-based index of the first scored response).
  std::size_t first() const noexcept { return static_cast<std::size_t>(max_order); }
};

OrderEnsemble build_ensemble(const TimeSeries& y, int max_order, ErrorFamily family,
                             TauDenominator denominator = TauDenominator::paper);

// CSV: order,bic,weight,beta_0..beta_K,tau (unused beta cells left empty).
void write_ensemble_csv(std::ostream& os, const OrderEnsemble& ensemble);

}  // namespace bayesmar
