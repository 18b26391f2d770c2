#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lassopath/gram.hpp"
#include "lassopath/model.hpp"

namespace lassopath {

struct HomotopyOptions {
  /// Stop threshold; defaults to 1e-10·λ∞.
  std::optional<double> lambda_min;
  double zero_tol = kDefaultZeroTol;
  /// Minimum step between events relative to the current λ; events closer
  /// than event_tol·λ are resolved together. Defaults to 1e-12.
  std::optional<double> event_tol;
  /// Defaults to 10·(3^p+1)/2 capped at 1e7.
  std::optional<std::size_t> max_kinks;
  double max_condition = kMaxGramCondition;
  /// Carry the Gram solves and event scan in long double. Recorded values
  /// stay 64-bit.
  bool extended_precision = false;
};

std::size_t default_max_kinks(Index p);

/// Degenerate: an inactive variable stays on the boundary along the whole
/// segment, so the solution is not unique there.
enum class EventKind { Enter, Leave, PathEnd, Degenerate };

/// A change of the active set at λ − tau.
template <typename Real>
struct BasicPathEvent {
  EventKind kind = EventKind::PathEnd;
  Index index = -1;
  Real tau = 0;
  Real lambda = 0;
  /// Sign of the correlation of an entering variable.
  int sign = 0;
};
using PathEvent = BasicPathEvent<double>;

/// Affine form of the active coefficients on the current segment:
///   w_J(λ') = offset − λ'·slope,
/// so moving from λ to λ − τ changes w_J by τ·slope.
template <typename Real>
struct BasicSegmentDirection {
  VectorT<Real> offset;  // (X_JᵀX_J)⁻¹ X_Jᵀ y
  VectorT<Real> slope;   // (X_JᵀX_J)⁻¹ η_J

  VectorT<Real> at(Real lambda) const { return offset - lambda * slope; }
};
using SegmentDirection = BasicSegmentDirection<double>;

/// Active set and the subgradient values on it. For the exact path `eta`
/// holds ±1; the approximate path passes correlations divided by λ.
template <typename Real>
struct BasicActiveState {
  std::vector<Index> active;
  VectorT<Real> eta;
  /// Excluded from leaving on the next scan (it just entered).
  std::optional<Index> just_entered;
  /// Excluded from re-entering with `just_left_sign` on the next scan.
  std::optional<Index> just_left;
  int just_left_sign = 0;
};
using ActiveState = BasicActiveState<double>;

/// d_J = (X_JᵀX_J)⁻¹ η_J. Throws SingularError.
Vector path_direction(const ProblemInstance& inst, std::span<const Index> active,
                      const SignPattern& eta);

template <typename Real>
BasicSegmentDirection<Real> segment_direction(const MatrixT<Real>& X, const VectorT<Real>& y,
                                              const BasicGramSystem<Real>& gram,
                                              const VectorT<Real>& eta);

SegmentDirection segment_direction(const ProblemInstance& inst, const GramSystem& gram,
                                   const Vector& eta);

struct EventScanOptions {
  double lambda_floor = 0.0;
  /// Relative to the current λ.
  double event_tol = 0.0;
  /// Inactive variables enter when |x_jᵀ(y − Xw)| reaches boundary_scale·λ.
  double boundary_scale = 1.0;
};

/// Events at the smallest admissible step from `lambda`. Normally one entry;
/// several when candidates coincide within event_tol (ordered by index), a
/// single PathEnd when nothing happens above the floor, or a single
/// Degenerate event.
template <typename Real>
std::vector<BasicPathEvent<Real>> next_event(const MatrixT<Real>& X, const VectorT<Real>& y,
                                             Real lambda, const BasicActiveState<Real>& state,
                                             const BasicSegmentDirection<Real>& dir,
                                             const EventScanOptions& opts);

std::vector<PathEvent> next_event(const ProblemInstance& inst, double lambda,
                                  const ActiveState& state, const SegmentDirection& dir,
                                  const EventScanOptions& opts);

/// Follows the exact piecewise-linear path from λ∞ down to lambda_min.
/// A truncated path (Singular or MaxKinks status) is still valid up to its
/// last record.
RegularizationPath compute_exact_path(const ProblemInstance& inst,
                                      const HomotopyOptions& opts = {});

/// Evaluates a path at λ. Exact paths interpolate linearly between records;
/// approximate paths hold a record's coefficients down to its `valid_until`
/// and interpolate linearly below that. Throws OutOfRange outside the path.
Vector interpolate(const RegularizationPath& path, double lambda);

}  // namespace lassopath
