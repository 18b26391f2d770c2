#include "lassopath/coordinate_descent.hpp"

#include <cmath>

#include "lassopath/quad.hpp"

namespace lassopath {

double soft_threshold(double z, double t) {
  if (t < 0.0) throw LassoError("soft threshold needs t >= 0");
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

namespace {

// `Acc` holds the residual and the correlations, `Real` the iterate.
template <typename Real, typename Acc>
BasicCdResult<Real> solve(const ProblemInstance& inst, const MatrixT<Acc>& X, double lambda,
                          const VectorT<Real>& w0, const CdOptions& opts) {
  if (!(lambda > 0.0)) throw LassoError("lambda must be positive");
  require_epsilons(opts.epsilon1, opts.epsilon2);
  if (opts.max_sweeps < 1) throw LassoError("max_sweeps must be at least 1");
  if (w0.size() != inst.p()) throw DimensionMismatch("warm start has wrong length");

  const VectorT<Acc> y = inst.y().template cast<Acc>();
  const Vector& norms = inst.column_norms_sq();
  const Acc lam = lambda;
  const std::size_t check_every = std::max<std::size_t>(1, opts.check_every);
  const std::size_t refresh_every = std::max<std::size_t>(1, opts.refresh_every);
  const auto residual = [&](const VectorT<Real>& w) -> VectorT<Acc> {
    return y - X * w.template cast<Acc>();
  };
  const auto band = [&](const VectorT<Real>& w) {
    return opt_band(w, VectorT<Acc>(X.transpose() * residual(w)), lambda, opts.epsilon1,
                    opts.epsilon2);
  };

  BasicCdResult<Real> res;
  res.w = w0;
  // Near λ = 0 the correlations are tiny differences of O(‖y‖) quantities,
  // so the residual is kept in the wider type.
  VectorT<Acc> r = residual(res.w);

  while (res.sweeps < opts.max_sweeps) {
    for (Index j = 0; j < inst.p(); ++j) {
      const Real old = res.w[j];
      const Acc z = X.col(j).dot(r) + Acc(norms[j]) * Acc(old);
      const Acc shrunk = z > lam ? Acc(z - lam) : (z < -lam ? Acc(z + lam) : Acc(0));
      const Real updated = static_cast<Real>(shrunk / Acc(norms[j]));
      if (updated != old) {
        r -= (Acc(updated) - Acc(old)) * X.col(j);
        res.w[j] = updated;
      }
    }
    ++res.sweeps;
    if (res.sweeps % refresh_every == 0) r = residual(res.w);
    if (opts.trace_objective) {
      const VectorT<Acc> full = residual(res.w);
      Acc l1 = 0;
      for (Index j = 0; j < inst.p(); ++j) l1 += Acc(res.w[j] < 0 ? Real(-res.w[j]) : res.w[j]);
      res.objective_trace.push_back(static_cast<double>(Acc(0.5) * full.squaredNorm() + lam * l1));
    }
    if (res.sweeps % check_every == 0) {
      res.report = band(res.w);
      if (res.report.pass) {
        res.converged = true;
        return res;
      }
    }
  }
  res.report = band(res.w);
  res.converged = res.report.pass;
  return res;
}

}  // namespace

CdResult cd_solve(const ProblemInstance& inst, double lambda, const Vector& w0,
                  const CdOptions& opts) {
  return solve<double, Extended>(inst, inst.X_extended(), lambda, w0, opts);
}

BasicCdResult<Extended> cd_solve_extended(const ProblemInstance& inst, double lambda,
                                          const VectorT<Extended>& w0,
                                          const CdOptions& opts) {
  return solve<Extended, Extended>(inst, inst.X_extended(), lambda, w0, opts);
}

BasicCdResult<Quad> cd_solve_quad(const ProblemInstance& inst, double lambda,
                                  const VectorT<Quad>& w0, const CdOptions& opts) {
  return solve<Quad, Quad>(inst, inst.X().cast<Quad>(), lambda, w0, opts);
}

}  // namespace lassopath
