#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lassopath {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;
template <typename Real>
using VectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using MatrixT = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
/// Accumulation type for residuals and correlations.
using Extended = long double;

class LassoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public LassoError {
 public:
  using LassoError::LassoError;
};

class InvalidInstance : public LassoError {
 public:
  using LassoError::LassoError;
};

class InvalidEpsilon : public LassoError {
 public:
  using LassoError::LassoError;
};

class InfeasibleDual : public LassoError {
 public:
  using LassoError::LassoError;
};

class OutOfRange : public LassoError {
 public:
  using LassoError::LassoError;
};

/// Absolute threshold below which a coefficient is reported as zero.
inline constexpr double kDefaultZeroTol = 1e-10;
/// Multiplicative slack on ‖Xᵀκ‖∞ ≤ λ.
inline constexpr double kDualFeasibilityTol = 1e-10;

/// Response vector y and design matrix X of a Lasso problem
///   min_w ½‖y − Xw‖² + λ‖w‖₁.
/// Immutable once built; every column must have nonzero norm.
class ProblemInstance {
 public:
  ProblemInstance(Vector y, Matrix X);

  const Vector& y() const { return y_; }
  const Matrix& X() const { return X_; }
  const Vector& column_norms_sq() const { return column_norms_sq_; }
  Index n() const { return X_.rows(); }
  Index p() const { return X_.cols(); }

  /// ‖Xᵀy‖∞, the smallest λ at which w = 0 is optimal.
  double lambda_max() const { return lambda_max_; }
  /// Smallest index attaining lambda_max().
  Index lambda_max_index() const { return lambda_max_index_; }

  /// Correlations Xᵀ(y − Xw), accumulated in extended precision.
  Vector correlations(const Vector& w) const;
  /// y − Xw in extended precision.
  VectorT<Extended> residual(const Vector& w) const;
  VectorT<Extended> residual_extended(const VectorT<Extended>& w) const;
  /// Xᵀ(y − Xw) without rounding back to double.
  VectorT<Extended> correlations_extended(const VectorT<Extended>& w) const;
  /// X converted to the extended accumulation type.
  const MatrixT<Extended>& X_extended() const { return X_ext_; }

 private:
  Vector y_;
  Matrix X_;
  MatrixT<Extended> X_ext_;
  Vector column_norms_sq_;
  double lambda_max_ = 0.0;
  Index lambda_max_index_ = 0;
};

/// Entrywise sign vector in {−1, 0, +1}^p.
class SignPattern {
 public:
  SignPattern() = default;
  explicit SignPattern(Index p) : entries_(static_cast<std::size_t>(p), 0) {}
  explicit SignPattern(std::vector<std::int8_t> entries);

  Index size() const { return static_cast<Index>(entries_.size()); }
  std::int8_t operator[](Index j) const { return entries_[static_cast<std::size_t>(j)]; }
  void set(Index j, int sign);
  const std::vector<std::int8_t>& entries() const { return entries_; }

  bool is_zero() const;
  SignPattern operator-() const;
  /// Pattern with one trailing entry appended.
  SignPattern extended(int last) const;
  std::string to_string() const;

  friend bool operator==(const SignPattern&, const SignPattern&) = default;
  friend auto operator<=>(const SignPattern&, const SignPattern&) = default;

 private:
  std::vector<std::int8_t> entries_;
};

/// One recorded point of a path.
///
/// `coeffs` is the solution at `lambda`. `pattern` and `active_set` describe
/// the segment that ends at this record coming from larger λ, so the first
/// record of a path (λ∞, w = 0) carries the zero pattern and each later record
/// carries the sign pattern the path had just above it. For approximate paths
/// `valid_until` is the lower end of the interval on which `coeffs` is held
/// constant; it equals `lambda` when the path is linear below this record.
struct Kink {
  double lambda = 0.0;
  Vector coeffs;
  std::vector<Index> active_set;
  SignPattern pattern;
  double valid_until = 0.0;
};

enum class PathKind { Exact, Approximate };

enum class PathStatus {
  Complete,   // reached the requested λ floor
  Singular,   // active Gram system became ill-conditioned
  MaxKinks,   // kink budget exhausted
  MaxSweeps,  // inner first-order solver did not converge
};

std::string to_string(PathStatus status);

struct RegularizationPath {
  PathKind kind = PathKind::Exact;
  double epsilon = 0.0;
  double lambda_max = 0.0;
  std::vector<Kink> kinks;
  PathStatus status = PathStatus::Complete;
  /// Number of events resolved together because their λ agreed within tolerance.
  std::size_t simultaneous_events = 0;
  /// Approximate paths only: records produced by the first-order branch.
  std::size_t first_order_steps = 0;

  bool truncated() const { return status != PathStatus::Complete; }
  double lambda_end() const { return kinks.empty() ? 0.0 : kinks.back().lambda; }
  /// λ of the last genuine breakpoint (excludes the terminal floor record).
  double last_kink_lambda() const;
  std::vector<SignPattern> patterns() const;
};

struct Certificate {
  Vector w;
  Vector kappa;
  double lambda = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double relative_gap = 0.0;
};

struct DualValue {
  double value = 0.0;
  bool feasible = false;
  /// ‖Xᵀκ‖∞
  double constraint_norm = 0.0;
};

struct OptimalityReport {
  bool pass = true;
  /// Largest violation over coordinates with w_j ≠ 0.
  double equality_violation = 0.0;
  /// Largest violation over coordinates with w_j = 0.
  double inequality_violation = 0.0;
  /// Coordinate with the largest violation of either kind, or −1.
  Index worst_index = -1;

  double worst() const { return std::max(equality_violation, inequality_violation); }
};

/// ½‖y − Xw‖² + λ‖w‖₁
double objective(const ProblemInstance& inst, const Vector& w, double lambda);
double objective_extended(const ProblemInstance& inst, const VectorT<Extended>& w, double lambda);

/// −½κᵀκ − κᵀy together with the feasibility of ‖Xᵀκ‖∞ ≤ λ.
DualValue dual_objective(const ProblemInstance& inst, const Vector& kappa, double lambda);

/// κ = (Xw − y)/(1 + ε₁).
Vector dual_from_primal(const ProblemInstance& inst, const Vector& w, double epsilon1);

/// Throws InfeasibleDual when ‖Xᵀκ‖∞ exceeds λ beyond the roundoff slack.
Certificate duality_gap(const ProblemInstance& inst, const Vector& w, const Vector& kappa,
                        double lambda);
/// Same with κ held in extended precision; Certificate::kappa is its rounding.
Certificate duality_gap(const ProblemInstance& inst, const Vector& w,
                        const VectorT<Extended>& kappa, double lambda);

OptimalityReport check_exact_optimality(const ProblemInstance& inst, const Vector& w,
                                        double lambda, double tol);

/// Perturbed optimality band: for w_j ≠ 0,
///   λ(1 − ε₂) ≤ x_jᵀ(y − Xw)·sign(w_j) ≤ λ(1 + ε₁),
/// otherwise |x_jᵀ(y − Xw)| ≤ λ(1 + ε₁).
OptimalityReport check_opt_condition(const ProblemInstance& inst, const Vector& w,
                                     double lambda, double epsilon1, double epsilon2);
OptimalityReport check_opt_condition_extended(const ProblemInstance& inst,
                                              const VectorT<Extended>& w, double lambda,
                                              double epsilon1, double epsilon2);

/// max(ε₁²/(1+ε₁)², (ε₁+ε₂)/(1+ε₁)): relative gap guaranteed by the band above.
double gap_bound_factor(double epsilon1, double epsilon2);

SignPattern sign_pattern(const Vector& w, double zero_tol = kDefaultZeroTol);

void require_epsilons(double epsilon1, double epsilon2);

/// The band test on precomputed correlations c = Xᵀ(y − Xw), evaluated in the
/// type of c.
template <typename Real, typename Acc>
OptimalityReport opt_band(const VectorT<Real>& w, const VectorT<Acc>& c, double lambda,
                          double epsilon1, double epsilon2) {
  using std::abs;
  require_epsilons(epsilon1, epsilon2);
  const Acc upper = Acc(lambda) * (1 + Acc(epsilon1));
  const Acc lower = Acc(lambda) * (1 - Acc(epsilon2));
  OptimalityReport rep;
  Acc worst = -1;
  for (Index j = 0; j < w.size(); ++j) {
    Acc v = 0;
    if (w[j] != 0) {
      const Acc signed_corr = w[j] > 0 ? Acc(c[j]) : Acc(-c[j]);
      v = std::max({Acc(0), Acc(lower - signed_corr), Acc(signed_corr - upper)});
      rep.equality_violation = std::max(rep.equality_violation, static_cast<double>(v));
    } else {
      v = std::max(Acc(0), Acc(abs(c[j]) - upper));
      rep.inequality_violation = std::max(rep.inequality_violation, static_cast<double>(v));
    }
    if (v > 0) rep.pass = false;
    if (v > worst) {
      worst = v;
      rep.worst_index = j;
    }
  }
  return rep;
}

}  // namespace lassopath
