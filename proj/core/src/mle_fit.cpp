#include "bayesmar/mle_fit.hpp"

#include "bayesmar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bayesmar {

namespace {

// Picks `m` linearly independent rows of x, preferring rows with small
// |start_resid| so the first vertex is already close to the optimum.
std::vector<std::size_t> initial_basis(const Eigen::MatrixXd& x,
                                       const Eigen::VectorXd& start_resid) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto m = x.cols();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(start_resid[static_cast<Eigen::Index>(a)]) <
           std::abs(start_resid[static_cast<Eigen::Index>(b)]);
  });

  std::vector<std::size_t> basis;
  Eigen::MatrixXd q(m, m);  // orthonormal rows accepted so far
  Eigen::Index accepted = 0;
  for (std::size_t row : order) {
    Eigen::VectorXd v = x.row(static_cast<Eigen::Index>(row)).transpose();
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    for (Eigen::Index k = 0; k < accepted; ++k) v -= q.row(k).dot(v) * q.row(k).transpose();
    const double norm = v.norm();
    if (norm <= 1e-9 * norm0) continue;
    q.row(accepted++) = v.transpose() / norm;
    basis.push_back(row);
    if (accepted == m) break;
  }
  if (accepted != m) throw RankError("solve_l1: no invertible row subset");
  return basis;
}

L1Solution solve_full_rank(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = x.rows();
  const Eigen::Index m = x.cols();
  const double zero_tol = 1e-11 * (1.0 + y.cwiseAbs().maxCoeff());
  const double descent_tol = 1e-10;

  const Eigen::VectorXd ls = x.colPivHouseholderQr().solve(y);
  std::vector<std::size_t> basis = initial_basis(x, y - x * ls);

  std::vector<char> in_basis(static_cast<std::size_t>(n), 0);
  for (std::size_t b : basis) in_basis[b] = 1;

  Eigen::MatrixXd xb(m, m);
  Eigen::VectorXd yb(m);
  Eigen::VectorXd beta;
  Eigen::VectorXd resid;
  std::vector<std::pair<double, Eigen::Index>> breaks;
  breaks.reserve(static_cast<std::size_t>(n));

  const int max_iter = static_cast<int>(50 * n + 100);
  int iter = 0;
  for (;; ++iter) {
    if (iter > max_iter) throw NumericError("solve_l1: iteration limit exceeded");
    for (Eigen::Index k = 0; k < m; ++k) {
      xb.row(k) = x.row(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(k)]));
      yb[k] = y[static_cast<Eigen::Index>(basis[static_cast<std::size_t>(k)])];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(xb);
    beta = lu.solve(yb);
    resid = y - x * beta;

    // Directional derivative along +/- B^{-1} e_k:
    //   g_k^{+/-} = 1 -/+ v_k + sum_{zero-residual rows} |z_ik|,
    // with v = B^{-T} sum_{i not in basis} sign(r_i) x_i and z_i = B^{-T} x_i.
    Eigen::VectorXd signed_sum = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd zero_mass = Eigen::VectorXd::Zero(m);
    std::vector<Eigen::Index> zero_rows;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_basis[static_cast<std::size_t>(i)]) continue;
      const double r = resid[i];
      if (std::abs(r) <= zero_tol) {
        zero_rows.push_back(i);
      } else {
        signed_sum += (r > 0.0 ? 1.0 : -1.0) * x.row(i).transpose();
      }
    }
    const Eigen::MatrixXd bt_inv_solver = xb.transpose();
    const Eigen::PartialPivLU<Eigen::MatrixXd> lut(bt_inv_solver);
    const Eigen::VectorXd v = lut.solve(signed_sum);
    for (Eigen::Index i : zero_rows) zero_mass += lut.solve(Eigen::VectorXd(x.row(i).transpose())).cwiseAbs();

    Eigen::Index leave = -1;
    double direction = 0.0;
    double best = -descent_tol;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double g_plus = 1.0 - v[k] + zero_mass[k];
      const double g_minus = 1.0 + v[k] + zero_mass[k];
      if (g_plus < best) { best = g_plus; leave = k; direction = 1.0; }
      if (g_minus < best) { best = g_minus; leave = k; direction = -1.0; }
    }
    if (leave < 0) break;

    Eigen::VectorXd unit = Eigen::VectorXd::Zero(m);
    unit[leave] = direction;
    const Eigen::VectorXd delta = lu.solve(unit);
    const Eigen::VectorXd d = x * delta;

    breaks.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_basis[static_cast<std::size_t>(i)] || std::abs(resid[i]) <= zero_tol) continue;
      if (d[i] == 0.0) continue;
      const double s = resid[i] / d[i];
      if (s > 0.0) breaks.emplace_back(s, i);
    }
    std::sort(breaks.begin(), breaks.end());
    double slope = best;
    Eigen::Index enter = -1;
    for (const auto& [s, i] : breaks) {
      slope += 2.0 * std::abs(d[i]);
      if (slope >= 0.0) {
        enter = i;
        break;
      }
    }
    if (enter < 0) throw NumericError("solve_l1: unbounded descent direction");
    in_basis[basis[static_cast<std::size_t>(leave)]] = 0;
    basis[static_cast<std::size_t>(leave)] = static_cast<std::size_t>(enter);
    in_basis[static_cast<std::size_t>(enter)] = 1;
  }

  L1Solution out;
  out.beta = beta;
  out.sum_abs = resid.cwiseAbs().sum();
  out.basis = basis;
  out.iterations = iter;
  return out;
}

}  // namespace

L1Solution solve_l1(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw ConfigError("solve_l1: dimension mismatch");
  if (x.rows() < x.cols() || x.cols() == 0) throw LengthError("solve_l1: fewer rows than columns");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  if (rank == x.cols()) return solve_full_rank(x, y);
  if (rank == 0) throw RankError("solve_l1: design has rank 0");

  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < rank; ++k) keep.push_back(qr.colsPermutation().indices()[k]);
  std::sort(keep.begin(), keep.end());
  Eigen::MatrixXd reduced(x.rows(), rank);
  for (Eigen::Index k = 0; k < rank; ++k) reduced.col(k) = x.col(keep[static_cast<std::size_t>(k)]);
  L1Solution sub = solve_full_rank(reduced, y);
  L1Solution out = sub;
  out.beta = Eigen::VectorXd::Zero(x.cols());
  for (Eigen::Index k = 0; k < rank; ++k) out.beta[keep[static_cast<std::size_t>(k)]] = sub.beta[k];
  out.rank_deficient = true;
  return out;
}

MleFit fit_l1(const TimeSeries& y, int order, std::size_t first, TauDenominator denominator) {
  if (order < 1) throw ConfigError("fit_l1: order must be at least 1");
  const LagDesign d = make_design(y.values(), order, first);
  const std::size_t n = d.rows();
  if (n < static_cast<std::size_t>(order) + 2) {
    throw LengthError("fit_l1: " + std::to_string(n) + " usable rows for order " +
                      std::to_string(order));
  }
  const L1Solution sol = solve_l1(d.x, d.y);
  const double s = 0.5 * sol.sum_abs;
  const double divisor =
      static_cast<double>(denominator == TauDenominator::paper ? n + 1 : n);
  MleFit fit;
  fit.coeff = Coefficients(sol.beta);
  fit.scale = ScaleParam(std::max(s / divisor, kScaleFloor));
  fit.objective = s;
  fit.n_used = n;
  fit.family = ErrorFamily::laplace;
  fit.non_unique = sol.rank_deficient;
  return fit;
}

MleFit fit_ols(const TimeSeries& y, int order, std::size_t first) {
  if (order < 1) throw ConfigError("fit_ols: order must be at least 1");
  const LagDesign d = make_design(y.values(), order, first);
  const std::size_t n = d.rows();
  if (n < static_cast<std::size_t>(order) + 2) {
    throw LengthError("fit_ols: " + std::to_string(n) + " usable rows for order " +
                      std::to_string(order));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
  qr.setThreshold(1e-10);
  if (qr.rank() < d.x.cols()) throw RankError("fit_ols: singular normal equations");
  const Eigen::VectorXd beta = qr.solve(d.y);
  const double rss = (d.y - d.x * beta).squaredNorm();
  MleFit fit;
  fit.coeff = Coefficients(beta);
  fit.scale = ScaleParam(std::max(std::sqrt(rss / static_cast<double>(n)), kScaleFloor));
  fit.objective = rss;
  fit.n_used = n;
  fit.family = ErrorFamily::gaussian;
  return fit;
}

MleFit fit_mle(const TimeSeries& y, int order, std::size_t first, ErrorFamily family,
               TauDenominator denominator) {
  return family == ErrorFamily::laplace ? fit_l1(y, order, first, denominator)
                                        : fit_ols(y, order, first);
}

}  // namespace bayesmar
