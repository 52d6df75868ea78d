#pragma once

#include "bayesmar/core.hpp"

#include <cstddef>

namespace bayesmar {

// Exact least-absolute-deviations regression: argmin_b sum_i |y_i - x_i' b|.
//
// Solved by a primal descent simplex over "basic" fits that interpolate
// m = rank(X) observations. Each step moves off one interpolated row along
// the steepest edge and stops at the weighted median of the breakpoints,
// so the objective strictly decreases and the method terminates at a
// global optimum. Rank-deficient designs are reduced to an independent
// column subset; the dropped coefficients are reported as 0 and the
// solution flagged non-unique.
struct L1Solution {
  Eigen::VectorXd beta;
  double sum_abs = 0.0;              // sum |r_i| (no 1/2 factor)
  std::vector<std::size_t> basis;    // rows interpolated at the optimum
  bool rank_deficient = false;
  int iterations = 0;
};

L1Solution solve_l1(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

inline constexpr double kScaleFloor = 1e-10;

// Closed-form tau-hat divisor. `paper` uses n + 1 (the printed formula),
// `mle` uses n (the exact likelihood maximizer).
enum class TauDenominator { paper, mle };

struct MleFit {
  Coefficients coeff{0.0};
  ScaleParam scale{1.0};
  double objective = 0.0;  // S(beta-hat) for Laplace, RSS for Gaussian
  std::size_t n_used = 0;
  ErrorFamily family = ErrorFamily::laplace;
  bool non_unique = false;
};

MleFit fit_l1(const TimeSeries& y, int order, std::size_t first,
              TauDenominator denominator = TauDenominator::paper);

// Least squares; sigma-hat^2 = RSS / n. Throws RankError on a singular design.
MleFit fit_ols(const TimeSeries& y, int order, std::size_t first);

MleFit fit_mle(const TimeSeries& y, int order, std::size_t first, ErrorFamily family,
               TauDenominator denominator = TauDenominator::paper);

}  // namespace bayesmar
