#include "bayesmar/errors.hpp"
#include "bayesmar/harness.hpp"
#include "bayesmar/order_select.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

using namespace bayesmar;

TEST_CASE("BIC from the printed Laplace formula") {
  MleFit fit;
  fit.coeff = Coefficients{0.0, 0.0, 0.0};
  fit.scale = ScaleParam(0.5);
  fit.objective = 4.0;
  fit.n_used = 10;
  fit.family = ErrorFamily::laplace;
  CHECK(bic_from_fit(fit) == doctest::Approx(4 * std::log(10.0) + 20 * std::log(2.0) + 16).epsilon(1e-14));
}

TEST_CASE("BIC penalty is strictly increasing at equal fit") {
  MleFit fit;
  fit.scale = ScaleParam(0.8);
  fit.objective = 3.0;
  fit.n_used = 50;
  for (ErrorFamily fam : {ErrorFamily::laplace, ErrorFamily::gaussian}) {
    fit.family = fam;
    double prev = -std::numeric_limits<double>::infinity();
    for (int p = 1; p <= 6; ++p) {
      fit.coeff = Coefficients(Eigen::VectorXd::Zero(p + 1));
      const double b = bic_from_fit(fit);
      CHECK(b > prev);
      prev = b;
    }
  }
}

TEST_CASE("noiseless data: floored tau, BIC grows with order beyond the truth") {
  const TimeSeries y = bayesmar::testing::noiseless_ar2(60);
  const OrderEnsemble e = build_ensemble(y, 5, ErrorFamily::laplace);
  for (int p = 2; p <= 5; ++p) {
    CHECK(e.fits[static_cast<std::size_t>(p - 1)].scale.value() == kScaleFloor);
    if (p > 2) CHECK(e.bics[static_cast<std::size_t>(p - 1)] > e.bics[static_cast<std::size_t>(p - 2)]);
  }
  CHECK(e.map_order == 2);
}

TEST_CASE("bma_weights") {
  const auto uniform = bma_weights({3.0, 3.0, 3.0, 3.0});
  for (double w : uniform) CHECK(w == doctest::Approx(0.25).epsilon(1e-15));

  const auto two = bma_weights({10.0, 12.0});
  const double e = std::exp(-1.0);
  CHECK(two[0] == doctest::Approx(1.0 / (1.0 + e)).epsilon(1e-14));
  CHECK(two[1] == doctest::Approx(e / (1.0 + e)).epsilon(1e-14));
  CHECK(std::abs(two[0] - 0.7311) < 1e-4);
  CHECK(std::abs(two[1] - 0.2689) < 1e-4);

  const auto extreme = bma_weights({0.0, 1000.0});
  CHECK(extreme[0] == 1.0);
  CHECK(extreme[1] < 1e-200);

  CHECK_THROWS_AS(bma_weights({1.0, std::nan("")}), NumericError);
  CHECK_THROWS_AS(bma_weights({1.0, std::numeric_limits<double>::infinity()}), NumericError);
  CHECK_THROWS_AS(bma_weights({}), ConfigError);
}

TEST_CASE("bma_weights stabilization and shift invariance") {
  Rng rng(6);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> b(20);
    for (double& v : b) v = u(rng);
    const auto w = bma_weights(b);
    CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) <= 1e-12);
    for (double v : w) CHECK(v >= 0.0);
    std::vector<double> shifted = b;
    for (double& v : shifted) v += 12345.678;
    const auto ws = bma_weights(shifted);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(w[i] - ws[i]) <= 1e-12);
  }
}

TEST_CASE("build_ensemble invariants") {
  const TimeSeries y = simulate_series(Coefficients{0.3, 0.75, -0.35}, ErrorFamily::laplace, 220, 200, 31);
  for (ErrorFamily fam : {ErrorFamily::laplace, ErrorFamily::gaussian}) {
    for (int k : {4, 8}) {
      const OrderEnsemble e = build_ensemble(y, k, fam);
      REQUIRE(e.fits.size() == static_cast<std::size_t>(k));
      CHECK(e.weights == bma_weights(e.bics));
      CHECK(std::abs(std::accumulate(e.weights.begin(), e.weights.end(), 0.0) - 1.0) <= 1e-12);
      const auto best = std::max_element(e.weights.begin(), e.weights.end());
      CHECK(e.weights[static_cast<std::size_t>(e.map_order - 1)] == *best);
      for (int p = 1; p <= k; ++p) {
        const MleFit& f = e.fits[static_cast<std::size_t>(p - 1)];
        CHECK(f.n_used == y.size() - static_cast<std::size_t>(k));
        CHECK(e.bics[static_cast<std::size_t>(p - 1)] == bic(y, p, k, fam));
      }
    }
  }
}

TEST_CASE("ties go to the smaller order") {
  CHECK(map_order({5.0, 5.0, 7.0}) == 1);
  CHECK(map_order({9.0, 5.0, 5.0}) == 2);
  CHECK(map_order({9.0, 8.0, 5.0}) == 3);
  CHECK_THROWS_AS(map_order({}), ConfigError);
  const TimeSeries y = bayesmar::testing::random_series(40, 2);
  const OrderEnsemble e = build_ensemble(y, 1, ErrorFamily::laplace);
  CHECK(e.weights == std::vector<double>{1.0});
  CHECK(e.map_order == 1);
}

TEST_CASE("order selection errors and export") {
  const TimeSeries y = bayesmar::testing::random_series(12, 3);
  CHECK_THROWS_AS(bic(y, 9, 9, ErrorFamily::laplace), LengthError);
  CHECK_THROWS_AS(bic(y, 3, 2, ErrorFamily::laplace), ConfigError);
  CHECK_THROWS_AS(build_ensemble(y, 0, ErrorFamily::laplace), ConfigError);

  const OrderEnsemble e = build_ensemble(bayesmar::testing::random_series(60, 4), 3, ErrorFamily::gaussian);
  std::ostringstream os;
  write_ensemble_csv(os, e);
  const std::string text = os.str();
  CHECK(text.substr(0, text.find('\n')) == "order,bic,weight,beta_0,beta_1,beta_2,beta_3,sigma");
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
