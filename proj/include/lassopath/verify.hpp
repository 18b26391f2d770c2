#pragma once

#include <cstddef>
#include <vector>

#include "lassopath/model.hpp"

namespace lassopath {

struct VerificationReport {
  std::size_t samples_checked = 0;
  double max_relative_gap = 0.0;
  /// λ at which max_relative_gap was observed.
  double worst_lambda = 0.0;
  double epsilon_target = 0.0;
  bool pass = false;
  std::size_t pattern_count = 0;
  bool upper_bound_ok = false;
  bool antipodal_free = false;
};

struct StructuralBounds {
  bool upper_bound_ok = false;
  bool antipodal_free = false;
};

/// Certificate for w at λ with κ = dual_from_primal(w, ε₁), where ε₁ is
/// raised above `epsilon1` only as far as needed to make κ dual-feasible.
Certificate certify(const ProblemInstance& inst, const Vector& w, double lambda,
                    double epsilon1 = 0.0);

/// Checks the path at `num_samples` geometrically spaced λ against the
/// relative duality gap target.
VerificationReport verify_path(const ProblemInstance& inst, const RegularizationPath& path,
                               double epsilon, std::size_t num_samples);

/// Number of recorded segments (one per stored record).
std::size_t count_segments(const RegularizationPath& path);

/// Count against (3^p+1)/2 and absence of a nonzero pattern together with its negation.
StructuralBounds check_structural_bounds(const std::vector<SignPattern>& patterns, Index p);
StructuralBounds check_structural_bounds(const RegularizationPath& path);

struct GridPoint {
  double lambda = 0.0;
  Vector w;
  SignPattern pattern;
  bool converged = false;
};

/// Independent coordinate-descent solves at OPT_λ(tol, tol), each from a cold
/// start. Points that do not converge are returned with converged == false.
std::vector<GridPoint> grid_oracle(const ProblemInstance& inst,
                                   const std::vector<double>& lambda_grid, double tol,
                                   std::size_t max_sweeps = 1'000'000);

/// `count` values from `hi` down to `lo`, equally spaced in log λ.
std::vector<double> geometric_grid(double hi, double lo, std::size_t count);

}  // namespace lassopath
