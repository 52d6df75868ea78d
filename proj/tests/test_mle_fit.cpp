#include "bayesmar/errors.hpp"
#include "bayesmar/mle_fit.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace bayesmar;
using bayesmar::testing::noiseless_ar2;
using bayesmar::testing::random_series;

namespace {

double l1_objective(const TimeSeries& y, double b0, double b1) {
  double s = 0.0;
  for (std::size_t t = 1; t < y.size(); ++t) s += std::abs(y[t] - b0 - b1 * y[t - 1]);
  return s;
}

// Coarse-to-fine grid search around the center; each pass shrinks the box 10x.
double grid_minimum(const TimeSeries& y, double c0, double c1) {
  double best = l1_objective(y, c0, c1);
  double width = 1.0;
  for (int pass = 0; pass < 12; ++pass) {
    double b0_best = c0;
    double b1_best = c1;
    for (int i = -40; i <= 40; ++i) {
      for (int j = -40; j <= 40; ++j) {
        const double b0 = c0 + width * i / 40.0;
        const double b1 = c1 + width * j / 40.0;
        const double v = l1_objective(y, b0, b1);
        if (v < best) {
          best = v;
          b0_best = b0;
          b1_best = b1;
        }
      }
    }
    c0 = b0_best;
    c1 = b1_best;
    width /= 10.0;
  }
  return best;
}

// Exhaustive vertex enumeration for p = 1: every optimum of an L1 fit with
// two coefficients interpolates some pair of observations.
double vertex_minimum(const TimeSeries& y) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < y.size(); ++i) {
    for (std::size_t j = i + 1; j < y.size(); ++j) {
      const double dx = y[i - 1] - y[j - 1];
      if (dx == 0.0) continue;
      const double b1 = (y[i] - y[j]) / dx;
      const double b0 = y[i] - b1 * y[i - 1];
      best = std::min(best, l1_objective(y, b0, b1));
    }
  }
  return best;
}

TimeSeries shifted(const TimeSeries& y, double c) {
  std::vector<double> v(y.values().begin(), y.values().end());
  for (double& x : v) x += c;
  return TimeSeries(std::move(v));
}

}  // namespace

TEST_CASE("fit_l1 recovers a noiseless recursion") {
  const TimeSeries y = noiseless_ar2(40);
  const MleFit fit = fit_l1(y, 2, 2);
  CHECK(fit.coeff.intercept() == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(fit.coeff.lag(1) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(fit.coeff.lag(2) == doctest::Approx(-0.35).epsilon(1e-9));
  CHECK(fit.objective < 1e-9);
  CHECK(fit.scale.value() == kScaleFloor);
  CHECK(fit.n_used == 38);
}

TEST_CASE("fit_l1 matches grid and vertex oracles") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TimeSeries y = random_series(20, 1000 + seed);
    const MleFit fit = fit_l1(y, 1, 1);
    const double lp = 2.0 * fit.objective;
    const double grid = grid_minimum(y, fit.coeff.intercept(), fit.coeff.lag(1));
    CHECK(lp <= grid * (1.0 + 1e-8));
    CHECK(std::abs(lp - grid) <= 1e-8 * grid);
    CHECK(std::abs(lp - vertex_minimum(y)) <= 1e-10 * lp);
  }
}

TEST_CASE("fit_l1 optimality certificate and median balance") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int p = 1 + static_cast<int>(seed % 3);
    const TimeSeries y = random_series(60, 200 + seed);
    const MleFit fit = fit_l1(y, p, static_cast<std::size_t>(p));
    const double s0 = sum_abs_residuals(y, fit.coeff, static_cast<std::size_t>(p));
    CHECK(s0 == doctest::Approx(fit.objective).epsilon(1e-12));
    for (int k = 0; k <= p; ++k) {
      for (double d : {-1e-4, 1e-4}) {
        Eigen::VectorXd b = fit.coeff.vector();
        b[k] += d;
        CHECK(sum_abs_residuals(y, Coefficients(b), static_cast<std::size_t>(p)) >= s0 - 1e-12);
      }
    }
    const LagDesign d = make_design(y.values(), p, static_cast<std::size_t>(p));
    const Eigen::VectorXd r = d.y - d.x * fit.coeff.vector();
    const double n = static_cast<double>(d.rows());
    int pos = 0;
    int neg = 0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (r[i] > 1e-9) ++pos;
      if (r[i] < -1e-9) ++neg;
    }
    CHECK(pos <= n / 2.0);
    CHECK(neg <= n / 2.0);
  }
}

TEST_CASE("fit_l1 tau denominators") {
  const TimeSeries y = random_series(30, 5);
  const MleFit paper = fit_l1(y, 1, 1, TauDenominator::paper);
  const MleFit mle = fit_l1(y, 1, 1, TauDenominator::mle);
  CHECK(paper.scale.value() == doctest::Approx(paper.objective / 30.0).epsilon(1e-14));
  CHECK(mle.scale.value() == doctest::Approx(mle.objective / 29.0).epsilon(1e-14));
}

TEST_CASE("fit_l1 rank deficiency and length errors") {
  // constant series: the lag column duplicates the intercept
  const TimeSeries flat(std::vector<double>(12, 2.0));
  const MleFit fit = fit_l1(flat, 1, 1);
  CHECK(fit.non_unique);
  CHECK(fit.objective == doctest::Approx(0.0));

  CHECK_THROWS_AS(fit_l1(random_series(4, 1), 2, 2), LengthError);
  CHECK_THROWS_AS(fit_ols(random_series(4, 1), 2, 2), LengthError);
}

TEST_CASE("solve_l1 on an explicit design") {
  Eigen::MatrixXd x(5, 1);
  x << 1, 1, 1, 1, 1;
  Eigen::VectorXd y(5);
  y << 3, -1, 10, 4, 0;
  const L1Solution s = solve_l1(x, y);
  CHECK(s.beta[0] == doctest::Approx(3.0));  // sample median
  CHECK(s.sum_abs == doctest::Approx(15.0));
}

TEST_CASE("fit_ols") {
  SUBCASE("noiseless recovery") {
    const TimeSeries y = noiseless_ar2(40);
    const MleFit fit = fit_ols(y, 2, 2);
    CHECK(fit.coeff.lag(1) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(fit.objective < 1e-18);
    CHECK(fit.scale.value() == kScaleFloor);
  }
  SUBCASE("hand 2x2 normal equations") {
    // y = (1, 2, 2, 4): rows (x, y) = (1, 2), (2, 2), (2, 4)
    const TimeSeries y({1.0, 2.0, 2.0, 4.0});
    const MleFit fit = fit_ols(y, 1, 1);
    // n = 3, sx = 5, sxx = 9, sy = 8, sxy = 14; det = 27 - 25 = 2
    const double b1 = (3.0 * 14.0 - 5.0 * 8.0) / 2.0;
    const double b0 = (9.0 * 8.0 - 5.0 * 14.0) / 2.0;
    CHECK(fit.coeff.intercept() == doctest::Approx(b0).epsilon(1e-12));
    CHECK(fit.coeff.lag(1) == doctest::Approx(b1).epsilon(1e-12));
    const double rss = std::pow(2 - b0 - b1, 2) + std::pow(2 - b0 - 2 * b1, 2) + std::pow(4 - b0 - 2 * b1, 2);
    CHECK(fit.objective == doctest::Approx(rss).epsilon(1e-12));
    CHECK(fit.scale.value() == doctest::Approx(std::sqrt(rss / 3.0)).epsilon(1e-12));
  }
  SUBCASE("residuals orthogonal to the design") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const TimeSeries y = random_series(80, 300 + seed, 3.0);
      const MleFit fit = fit_ols(y, 3, 3);
      const LagDesign d = make_design(y.values(), 3, 3);
      const Eigen::VectorXd r = d.y - d.x * fit.coeff.vector();
      const Eigen::VectorXd g = d.x.transpose() * r;
      for (Eigen::Index k = 0; k < g.size(); ++k) {
        CHECK(std::abs(g[k]) <= 1e-8 * d.x.col(k).norm() * d.y.norm());
      }
    }
  }
  SUBCASE("singular design") {
    CHECK_THROWS_AS(fit_ols(TimeSeries(std::vector<double>(10, 1.0)), 1, 1), RankError);
  }
}

TEST_CASE("shift equivariance of both fitters") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const TimeSeries y = random_series(50, 400 + seed);
    const double c = 3.7;
    for (ErrorFamily fam : {ErrorFamily::laplace, ErrorFamily::gaussian}) {
      const MleFit a = fit_mle(y, 2, 2, fam);
      const MleFit b = fit_mle(shifted(y, c), 2, 2, fam);
      const double slope_sum = a.coeff.lag(1) + a.coeff.lag(2);
      CHECK(b.coeff.lag(1) == doctest::Approx(a.coeff.lag(1)).epsilon(1e-8));
      CHECK(b.coeff.lag(2) == doctest::Approx(a.coeff.lag(2)).epsilon(1e-8));
      CHECK(b.coeff.intercept() == doctest::Approx(a.coeff.intercept() + c * (1.0 - slope_sum)).epsilon(1e-8));
    }
  }
}
