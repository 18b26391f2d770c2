#pragma once

#include <cstddef>
#include <vector>

#include "lassopath/model.hpp"

namespace lassopath {

struct CdOptions {
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
  std::size_t max_sweeps = 1'000'000;
  /// Sweeps between two evaluations of the stopping test.
  std::size_t check_every = 1;
  /// Sweeps between full recomputations of the residual.
  std::size_t refresh_every = 1000;
  /// Keep the objective after every sweep in CdResult::objective_trace.
  bool trace_objective = false;
};

template <typename Real>
struct BasicCdResult {
  VectorT<Real> w;
  bool converged = false;
  std::size_t sweeps = 0;
  /// Stopping test at the returned iterate.
  OptimalityReport report;
  std::vector<double> objective_trace;
};
using CdResult = BasicCdResult<double>;

/// sign(z)·max(|z| − t, 0)
double soft_threshold(double z, double t);

/// Cyclic coordinate descent from `w0` until w satisfies the perturbed
/// optimality band OPT_λ(ε₁, ε₂). When max_sweeps is reached the last iterate
/// is returned with converged == false. Residuals are accumulated in extended
/// precision either way.
CdResult cd_solve(const ProblemInstance& inst, double lambda, const Vector& w0,
                  const CdOptions& opts = {});
/// Same with the iterate itself held in extended precision.
BasicCdResult<Extended> cd_solve_extended(const ProblemInstance& inst, double lambda,
                                          const VectorT<Extended>& w0,
                                          const CdOptions& opts = {});

}  // namespace lassopath
