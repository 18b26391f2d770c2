#include "lassopath/verify.hpp"

#include <cmath>
#include <set>

#include "lassopath/adversarial.hpp"
#include "lassopath/coordinate_descent.hpp"
#include "lassopath/homotopy.hpp"

namespace lassopath {

Certificate certify(const ProblemInstance& inst, const Vector& w, double lambda,
                    double epsilon1) {
  require_epsilons(epsilon1, 0.0);
  const VectorT<Extended> r = inst.residual(w);
  const Extended corr = (inst.X_extended().transpose() * r).lpNorm<Eigen::Infinity>();
  const Extended scale = std::max(1 + Extended(epsilon1), corr / lambda);
  return duality_gap(inst, w, VectorT<Extended>(-r / scale), lambda);
}

std::vector<double> geometric_grid(double hi, double lo, std::size_t count) {
  if (!(lo > 0.0) || hi < lo) throw LassoError("geometric grid needs hi >= lo > 0");
  if (count == 0) return {};
  if (count == 1) return {hi};
  std::vector<double> out(count);
  const double span = std::log(lo / hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = hi * std::exp(span * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = hi;
  out.back() = lo;
  return out;
}

VerificationReport verify_path(const ProblemInstance& inst, const RegularizationPath& path,
                               double epsilon, std::size_t num_samples) {
  if (num_samples < 2) throw LassoError("verify_path needs at least two samples");
  if (path.kinks.empty()) throw LassoError("empty path");
  VerificationReport rep;
  rep.epsilon_target = epsilon;
  const double eps1 = path.kind == PathKind::Approximate ? path.epsilon / 2.0 : 0.0;

  const double hi = path.kinks.front().lambda;
  // A path followed down to λ = 0 is sampled down to its smallest positive record.
  double lo = path.kinks.back().lambda;
  if (!(lo > 0.0) && path.kinks.size() > 1) lo = path.kinks[path.kinks.size() - 2].lambda;
  std::vector<double> grid = lo > 0.0 ? geometric_grid(hi, lo, num_samples)
                                      : std::vector<double>{hi};
  for (double lambda : grid) {
    const Vector w = interpolate(path, lambda);
    const Certificate c = certify(inst, w, lambda, eps1);
    ++rep.samples_checked;
    if (c.relative_gap > rep.max_relative_gap) {
      rep.max_relative_gap = c.relative_gap;
      rep.worst_lambda = lambda;
    }
  }
  rep.pass = rep.max_relative_gap <= epsilon + 1e-12;
  rep.pattern_count = count_segments(path);
  const StructuralBounds b = check_structural_bounds(path);
  rep.upper_bound_ok = b.upper_bound_ok;
  rep.antipodal_free = b.antipodal_free;
  return rep;
}

std::size_t count_segments(const RegularizationPath& path) { return path.kinks.size(); }

StructuralBounds check_structural_bounds(const std::vector<SignPattern>& patterns, Index p) {
  StructuralBounds out;
  const double bound = (std::pow(3.0, static_cast<double>(p)) + 1.0) / 2.0;
  out.upper_bound_ok = static_cast<double>(patterns.size()) <= bound;
  const std::set<SignPattern> seen(patterns.begin(), patterns.end());
  out.antipodal_free = true;
  for (const auto& eta : seen) {
    if (!eta.is_zero() && seen.count(-eta)) {
      out.antipodal_free = false;
      break;
    }
  }
  return out;
}

StructuralBounds check_structural_bounds(const RegularizationPath& path) {
  const Index p = path.kinks.empty() ? 0 : path.kinks.front().coeffs.size();
  return check_structural_bounds(path.patterns(), p);
}

std::vector<GridPoint> grid_oracle(const ProblemInstance& inst,
                                   const std::vector<double>& lambda_grid, double tol,
                                   std::size_t max_sweeps) {
  if (tol > 1e-10 || tol < 0.0) throw LassoError("grid oracle tolerance must be in [0, 1e-10]");
  CdOptions cd;
  cd.epsilon1 = tol;
  cd.epsilon2 = tol;
  cd.max_sweeps = max_sweeps;
  std::vector<GridPoint> out;
  out.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    const CdResult res = cd_solve(inst, lambda, Vector::Zero(inst.p()), cd);
    out.push_back({lambda, res.w, sign_pattern(res.w, 0.0), res.converged});
  }
  return out;
}

}  // namespace lassopath
