#pragma once

#include <cmath>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "lassopath/model.hpp"

namespace lassopath {

class SingularError : public LassoError {
 public:
  using LassoError::LassoError;
};

/// Condition estimate above which an active Gram system is rejected.
inline constexpr double kMaxGramCondition = 1e12;

/// Copies the columns of X listed in `active`.
template <typename Real>
MatrixT<Real> gather_columns(const MatrixT<Real>& X, std::span<const Index> active) {
  MatrixT<Real> out(X.rows(), static_cast<Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    out.col(static_cast<Index>(k)) = X.col(active[k]);
  }
  return out;
}

/// Cholesky factorization of X_Jᵀ X_J for an ordered active set J.
///
/// The Gram matrix is equilibrated to unit diagonal before factoring, so the
/// condition estimate measures collinearity of the active columns rather than
/// their relative scale.
template <typename Real>
class BasicGramSystem {
 public:
  using Vec = VectorT<Real>;
  using Mat = MatrixT<Real>;

  /// Throws SingularError when the factorization fails or the condition
  /// estimate exceeds `max_condition`.
  static BasicGramSystem build(const Mat& X, std::span<const Index> active,
                               double max_condition = kMaxGramCondition) {
    if (active.empty()) throw LassoError("active set must be nonempty");
    if (static_cast<Index>(active.size()) > std::min(X.rows(), X.cols())) {
      throw SingularError("active set larger than min(n, p)");
    }
    for (Index j : active) {
      if (j < 0 || j >= X.cols()) throw OutOfRange("active index out of range");
    }

    BasicGramSystem sys;
    sys.active_.assign(active.begin(), active.end());
    const Mat XJ = gather_columns<Real>(X, active);
    sys.gram_ = XJ.transpose() * XJ;
    sys.scale_ = sys.gram_.diagonal().cwiseSqrt().cwiseInverse();
    const Mat equilibrated = sys.scale_.asDiagonal() * sys.gram_ * sys.scale_.asDiagonal();
    sys.llt_.compute(equilibrated);
    if (sys.llt_.info() != Eigen::Success) {
      throw SingularError("Gram matrix is not positive definite");
    }
    double rcond = 0.0;
    if constexpr (std::is_floating_point_v<Real>) {
      rcond = static_cast<double>(sys.llt_.rcond());
    } else {
      // The estimate only needs a few digits.
      const MatrixT<long double> rounded = equilibrated.template cast<long double>();
      rcond = static_cast<double>(Eigen::LLT<MatrixT<long double>>(rounded).rcond());
    }
    sys.condition_ = rcond > 0.0 ? 1.0 / rcond : INFINITY;
    if (!(sys.condition_ <= max_condition)) {
      throw SingularError("Gram condition estimate " + std::to_string(sys.condition_) +
                          " exceeds " + std::to_string(max_condition));
    }
    return sys;
  }

  /// Solves (X_JᵀX_J) u = rhs.
  Vec solve(const Vec& rhs) const {
    if (rhs.size() != size()) throw DimensionMismatch("right-hand side has wrong length");
    const Vec scaled = scale_.cwiseProduct(rhs);
    return scale_.cwiseProduct(llt_.solve(scaled));
  }

  /// Multiplies by the factored matrix, L Lᵀ v with the scaling undone.
  Vec apply(const Vec& v) const {
    if (v.size() != size()) throw DimensionMismatch("vector has wrong length");
    const Vec t = v.cwiseQuotient(scale_);
    const Mat& L = llt_.matrixLLT();
    const Vec lt = L.template triangularView<Eigen::Lower>().transpose() * t;
    const Vec llt = L.template triangularView<Eigen::Lower>() * lt;
    return llt.cwiseQuotient(scale_);
  }

  const std::vector<Index>& active() const { return active_; }
  Index size() const { return static_cast<Index>(active_.size()); }
  /// 1-norm condition estimate of the equilibrated Gram matrix.
  double condition_estimate() const { return condition_; }
  const Mat& gram() const { return gram_; }

 private:
  BasicGramSystem() = default;

  std::vector<Index> active_;
  Mat gram_;
  Vec scale_;
  Eigen::LLT<Mat> llt_;
  double condition_ = 1.0;
};

using GramSystem = BasicGramSystem<double>;

/// Gram system of the active columns of an instance.
GramSystem build_gram(const ProblemInstance& inst, std::span<const Index> active,
                      double max_condition = kMaxGramCondition);

}  // namespace lassopath
