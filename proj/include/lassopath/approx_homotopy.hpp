#pragma once

#include <cstddef>
#include <optional>

#include "lassopath/coordinate_descent.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/model.hpp"

namespace lassopath {

struct ApproxOptions {
  /// Target relative duality gap, in [0, 1). Zero follows the exact path.
  double epsilon = 0.1;
  /// Lower end of the path; defaults to 1e-3·λ∞.
  std::optional<double> lambda_1;
  std::size_t max_kinks = 1'000'000;
  /// Events closer than this, relative to the current λ, are taken together.
  double event_tol = 0.0;
  double max_condition = kMaxGramCondition;
  std::size_t max_sweeps = 1'000'000;
  /// Hold the iterate, Gram solves and event scan in long double, and in quad
  /// precision once the band half-width ε/2·λ falls below the long double
  /// resolution of the data. Records are the iterate rounded to 64 bits.
  bool extended_precision = false;
};

/// 1 + ε/2 − √ε/2
double theta(double epsilon);

/// ⌈log(λ∞/λ₁) / (θ√ε)⌉, the iteration bound of the approximate homotopy.
std::size_t segment_bound(double lambda_inf, double lambda_1, double epsilon);

/// Approximate homotopy. Every record satisfies OPT_λ(ε/2, ε/2) and is an
/// ε-approximate solution on its whole validity interval. Homotopy steps are
/// taken when the next event is at least λθ√ε away; otherwise λ is reduced by
/// the factor (1 − θ√ε) and the solution is recomputed by coordinate descent
/// warm-started at the previous record.
RegularizationPath compute_approx_path(const ProblemInstance& inst, const ApproxOptions& opts);

/// Exact solutions sampled at λ∞(1 − √ε)^i down to λ₁ and held constant
/// between samples.
RegularizationPath sampled_exact_path(const ProblemInstance& inst, double epsilon,
                                      double lambda_1);

}  // namespace lassopath
