#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Inverse of a 3×3 matrix by cofactors.
inline Eigen::Matrix3d cofactor_inverse(const Eigen::Matrix3d& a) {
  Eigen::Matrix3d c;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      c(i, j) = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
    }
  }
  const double det = a.row(0).dot(c.row(0));
  return c.transpose() / det;
}

/// Lasso solution for a single column: soft thresholding of xᵀy.
inline double lasso_1d(double xty, double xtx, double lambda) {
  const double z = std::abs(xty) - lambda;
  return z > 0 ? std::copysign(z, xty) / xtx : 0.0;
}

/// Exact Lasso solution for small p by enumerating all 3^p sign patterns and
/// solving each KKT system with a full-pivot LU. Returns the pattern whose
/// candidate satisfies the optimality conditions to `tol`, preferring the
/// smallest objective.
inline std::optional<VectorXd> brute_force_lasso(const VectorXd& y, const MatrixXd& X,
                                                 double lambda, double tol = 1e-9) {
  const int p = static_cast<int>(X.cols());
  std::optional<VectorXd> best;
  double best_f = INFINITY;
  std::int64_t total = 1;
  for (int j = 0; j < p; ++j) total *= 3;
  for (std::int64_t code = 0; code < total; ++code) {
    std::vector<int> s(static_cast<std::size_t>(p));
    std::vector<int> J;
    std::int64_t c = code;
    for (int j = 0; j < p; ++j) {
      s[static_cast<std::size_t>(j)] = static_cast<int>(c % 3) - 1;
      c /= 3;
      if (s[static_cast<std::size_t>(j)] != 0) J.push_back(j);
    }
    VectorXd w = VectorXd::Zero(p);
    if (!J.empty()) {
      MatrixXd XJ(X.rows(), static_cast<Eigen::Index>(J.size()));
      VectorXd eta(static_cast<Eigen::Index>(J.size()));
      for (std::size_t k = 0; k < J.size(); ++k) {
        XJ.col(static_cast<Eigen::Index>(k)) = X.col(J[k]);
        eta[static_cast<Eigen::Index>(k)] = s[static_cast<std::size_t>(J[k])];
      }
      const MatrixXd G = XJ.transpose() * XJ;
      Eigen::FullPivLU<MatrixXd> lu(G);
      if (!lu.isInvertible()) continue;
      const VectorXd wJ = lu.solve(XJ.transpose() * y - lambda * eta);
      bool signs_ok = true;
      for (std::size_t k = 0; k < J.size(); ++k) {
        if (wJ[static_cast<Eigen::Index>(k)] * eta[static_cast<Eigen::Index>(k)] <= 0) signs_ok = false;
        w[J[k]] = wJ[static_cast<Eigen::Index>(k)];
      }
      if (!signs_ok) continue;
    }
    const VectorXd corr = X.transpose() * (y - X * w);
    bool kkt = true;
    for (int j = 0; j < p; ++j) {
      if (s[static_cast<std::size_t>(j)] == 0 && std::abs(corr[j]) > lambda * (1 + tol)) kkt = false;
    }
    if (!kkt) continue;
    const double f = 0.5 * (y - X * w).squaredNorm() + lambda * w.lpNorm<1>();
    if (f < best_f) {
      best_f = f;
      best = w;
    }
  }
  return best;
}

inline MatrixXd gaussian_matrix(int n, int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXd m(n, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) m(i, j) = normal(rng);
  }
  return m;
}

}  // namespace oracle
