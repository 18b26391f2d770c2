#include "lassopath/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lassopath/quad.hpp"

namespace lassopath {

std::size_t default_max_kinks(Index p) {
  constexpr double cap = 1e7;
  const double bound = 10.0 * (std::pow(3.0, static_cast<double>(p)) + 1.0) / 2.0;
  return static_cast<std::size_t>(std::min(bound, cap));
}

Vector path_direction(const ProblemInstance& inst, std::span<const Index> active,
                      const SignPattern& eta) {
  const GramSystem gram = build_gram(inst, active);
  Vector eta_j(gram.size());
  for (Index k = 0; k < gram.size(); ++k) eta_j[k] = eta[active[static_cast<std::size_t>(k)]];
  return gram.solve(eta_j);
}

template <typename Real>
BasicSegmentDirection<Real> segment_direction(const MatrixT<Real>& X, const VectorT<Real>& y,
                                              const BasicGramSystem<Real>& gram,
                                              const VectorT<Real>& eta) {
  const MatrixT<Real> XJ = gather_columns<Real>(X, gram.active());
  BasicSegmentDirection<Real> dir;
  dir.offset = gram.solve(XJ.transpose() * y);
  dir.slope = gram.solve(eta);
  // One refinement step; the defects are not amplified by the conditioning.
  dir.offset += gram.solve(XJ.transpose() * (y - XJ * dir.offset));
  dir.slope += gram.solve(eta - XJ.transpose() * (XJ * dir.slope));
  return dir;
}

SegmentDirection segment_direction(const ProblemInstance& inst, const GramSystem& gram,
                                   const Vector& eta) {
  return segment_direction<double>(inst.X(), inst.y(), gram, eta);
}

template <typename Real>
std::vector<BasicPathEvent<Real>> next_event(const MatrixT<Real>& X, const VectorT<Real>& y,
                                             Real lambda, const BasicActiveState<Real>& state,
                                             const BasicSegmentDirection<Real>& dir,
                                             const EventScanOptions& opts) {
  using Event = BasicPathEvent<Real>;
  const Index p = X.cols();
  std::vector<char> in_active(static_cast<std::size_t>(p), 0);
  for (Index j : state.active) in_active[static_cast<std::size_t>(j)] = 1;

  // Inactive correlations are affine in λ': c_j(λ') = a_j + λ'·b_j.
  VectorT<Real> offset_residual = y;
  VectorT<Real> slope_fit = VectorT<Real>::Zero(X.rows());
  for (std::size_t k = 0; k < state.active.size(); ++k) {
    const auto col = X.col(state.active[k]);
    offset_residual -= dir.offset[static_cast<Index>(k)] * col;
    slope_fit += dir.slope[static_cast<Index>(k)] * col;
  }
  const VectorT<Real> a = X.transpose() * offset_residual;
  const VectorT<Real> b = X.transpose() * slope_fit;

  const Real floor = static_cast<Real>(opts.lambda_floor);
  const Real scale = static_cast<Real>(opts.boundary_scale);
  const Real tol = static_cast<Real>(opts.event_tol) * lambda;
  const Real upper = lambda - tol;
  std::vector<Event> candidates;

  using std::abs;
  const Real degenerate_tol = Real(1e-9);
  for (Index j = 0; j < p; ++j) {
    if (in_active[static_cast<std::size_t>(j)]) continue;
    if (abs(a[j]) <= degenerate_tol * lambda && abs(Real(abs(b[j]) - scale)) <= degenerate_tol) {
      return {Event{EventKind::Degenerate, j, 0, lambda, 0}};
    }
    for (int s : {+1, -1}) {
      if (state.just_left == j && state.just_left_sign == s) continue;
      const Real denom = static_cast<Real>(s) * scale - b[j];
      if (denom == 0) continue;
      const Real at = a[j] / denom;
      if (at > floor && at < upper) {
        candidates.push_back({EventKind::Enter, j, lambda - at, at, s});
      }
    }
  }
  for (std::size_t k = 0; k < state.active.size(); ++k) {
    const Index j = state.active[k];
    if (state.just_entered == j) continue;
    const Real d = dir.slope[static_cast<Index>(k)];
    if (d == 0) continue;
    const Real at = dir.offset[static_cast<Index>(k)] / d;
    if (at > floor && at < upper) {
      candidates.push_back({EventKind::Leave, j, lambda - at, at, 0});
    }
  }

  if (candidates.empty()) {
    return {Event{EventKind::PathEnd, -1, lambda - floor, floor, 0}};
  }

  Real best = 0;
  for (const auto& c : candidates) best = std::max(best, c.lambda);
  std::vector<Event> selected;
  for (const auto& c : candidates) {
    if (c.lambda >= best - tol) selected.push_back(c);
  }
  std::sort(selected.begin(), selected.end(),
            [](const Event& l, const Event& r) { return l.index < r.index; });
  // A variable can produce two entering candidates (one per sign); keep the first crossing.
  std::vector<Event> unique;
  for (const auto& e : selected) {
    if (!unique.empty() && unique.back().index == e.index) {
      if (e.lambda > unique.back().lambda) unique.back() = e;
      continue;
    }
    unique.push_back(e);
  }
  // Every selected event shares the step of the leading one.
  for (auto& e : unique) {
    e.lambda = best;
    e.tau = lambda - best;
  }
  return unique;
}

std::vector<PathEvent> next_event(const ProblemInstance& inst, double lambda,
                                  const ActiveState& state, const SegmentDirection& dir,
                                  const EventScanOptions& opts) {
  return next_event<double>(inst.X(), inst.y(), lambda, state, dir, opts);
}

template BasicSegmentDirection<long double> segment_direction(
    const MatrixT<long double>&, const VectorT<long double>&,
    const BasicGramSystem<long double>&, const VectorT<long double>&);
template std::vector<BasicPathEvent<long double>> next_event(
    const MatrixT<long double>&, const VectorT<long double>&, long double,
    const BasicActiveState<long double>&, const BasicSegmentDirection<long double>&,
    const EventScanOptions&);
template BasicSegmentDirection<Quad> segment_direction(const MatrixT<Quad>&, const VectorT<Quad>&,
                                                      const BasicGramSystem<Quad>&,
                                                      const VectorT<Quad>&);
template std::vector<BasicPathEvent<Quad>> next_event(const MatrixT<Quad>&, const VectorT<Quad>&,
                                                      Quad, const BasicActiveState<Quad>&,
                                                      const BasicSegmentDirection<Quad>&,
                                                      const EventScanOptions&);

namespace {

template <typename Real>
Kink make_record(Index p, Real lambda, const BasicActiveState<Real>& state,
                 const VectorT<Real>& active_values, const std::vector<Index>& zeroed) {
  Kink k;
  k.lambda = static_cast<double>(lambda);
  k.valid_until = k.lambda;
  k.coeffs = Vector::Zero(p);
  k.pattern = SignPattern(p);
  k.active_set = state.active;
  for (std::size_t i = 0; i < state.active.size(); ++i) {
    const Index j = state.active[i];
    k.coeffs[j] = static_cast<double>(active_values[static_cast<Index>(i)]);
    const Real e = state.eta[static_cast<Index>(i)];
    k.pattern.set(j, (e > 0) - (e < 0));
  }
  for (Index j : zeroed) k.coeffs[j] = 0.0;
  return k;
}

template <typename Real>
void follow_path(const ProblemInstance& inst, const HomotopyOptions& opts, double lambda_min,
                 double event_tol, std::size_t max_kinks, RegularizationPath& path) {
  using Vec = VectorT<Real>;
  const MatrixT<Real> X = inst.X().template cast<Real>();
  const Vec y = inst.y().template cast<Real>();
  const Index p = inst.p();

  const Index j0 = inst.lambda_max_index();
  const Real c0 = X.col(j0).dot(y);
  BasicActiveState<Real> state;
  state.active = {j0};
  state.eta = Vec::Constant(1, c0 > 0 ? Real(1) : Real(-1));
  state.just_entered = j0;

  const EventScanOptions scan{lambda_min, event_tol, 1.0};
  Real lambda = std::abs(c0);

  while (true) {
    if (path.kinks.size() >= max_kinks) {
      path.status = PathStatus::MaxKinks;
      break;
    }
    std::optional<BasicGramSystem<Real>> gram;
    try {
      gram = BasicGramSystem<Real>::build(X, state.active, opts.max_condition);
    } catch (const SingularError&) {
      path.status = PathStatus::Singular;
      break;
    }
    const auto dir = segment_direction<Real>(X, y, *gram, state.eta);
    const auto events = next_event<Real>(X, y, lambda, state, dir, scan);

    if (events.front().kind == EventKind::Degenerate) {
      path.status = PathStatus::Singular;
      break;
    }
    const Real next_lambda = events.front().lambda;
    const Vec values = dir.at(next_lambda);

    if (events.front().kind == EventKind::PathEnd) {
      path.kinks.push_back(make_record<Real>(p, next_lambda, state, values, {}));
      break;
    }
    if (events.size() > 1) path.simultaneous_events += events.size() - 1;

    std::vector<Index> leaving;
    for (const auto& e : events) {
      if (e.kind == EventKind::Leave) leaving.push_back(e.index);
    }
    path.kinks.push_back(make_record<Real>(p, next_lambda, state, values, leaving));

    BasicActiveState<Real> next;
    std::vector<Real> eta;
    for (std::size_t i = 0; i < state.active.size(); ++i) {
      const Index j = state.active[i];
      if (std::find(leaving.begin(), leaving.end(), j) != leaving.end()) continue;
      next.active.push_back(j);
      eta.push_back(state.eta[static_cast<Index>(i)]);
    }
    for (const auto& e : events) {
      if (e.kind != EventKind::Enter) continue;
      next.active.push_back(e.index);
      eta.push_back(static_cast<Real>(e.sign));
    }
    next.eta = Eigen::Map<const Vec>(eta.data(), static_cast<Index>(eta.size()));
    if (events.size() == 1) {
      if (events.front().kind == EventKind::Enter) next.just_entered = events.front().index;
      if (events.front().kind == EventKind::Leave) {
        const Index j = events.front().index;
        next.just_left = j;
        const auto pos = std::find(state.active.begin(), state.active.end(), j) - state.active.begin();
        next.just_left_sign = state.eta[pos] > 0 ? 1 : -1;
      }
    }
    state = std::move(next);
    lambda = next_lambda;

    if (state.active.empty()) {
      // Only possible through roundoff; the zero vector is optimal above λ∞ only.
      path.status = PathStatus::Singular;
      break;
    }
  }
}

}  // namespace

RegularizationPath compute_exact_path(const ProblemInstance& inst, const HomotopyOptions& opts) {
  const double lambda_inf = inst.lambda_max();
  if (!(lambda_inf > 0.0)) throw InvalidInstance("lambda_max must be positive (X^T y = 0)");
  const double lambda_min = opts.lambda_min.value_or(1e-10 * lambda_inf);
  const double event_tol = opts.event_tol.value_or(1e-12);
  const std::size_t max_kinks = opts.max_kinks.value_or(default_max_kinks(inst.p()));
  if (lambda_min < 0.0) throw LassoError("lambda_min must be nonnegative");
  if (max_kinks < 1) throw LassoError("max_kinks must be at least 1");

  RegularizationPath path;
  path.kind = PathKind::Exact;
  path.lambda_max = lambda_inf;

  Kink first;
  first.lambda = lambda_inf;
  first.valid_until = lambda_inf;
  first.coeffs = Vector::Zero(inst.p());
  first.pattern = SignPattern(inst.p());
  path.kinks.push_back(std::move(first));
  if (lambda_min >= lambda_inf) return path;

  if (opts.extended_precision) {
    follow_path<long double>(inst, opts, lambda_min, event_tol, max_kinks, path);
  } else {
    follow_path<double>(inst, opts, lambda_min, event_tol, max_kinks, path);
  }
  return path;
}

Vector interpolate(const RegularizationPath& path, double lambda) {
  const auto& ks = path.kinks;
  if (ks.empty()) throw OutOfRange("empty path");
  if (lambda > ks.front().lambda || lambda < ks.back().lambda || std::isnan(lambda)) {
    throw OutOfRange("lambda " + std::to_string(lambda) + " outside path range [" +
                     std::to_string(ks.back().lambda) + ", " +
                     std::to_string(ks.front().lambda) + "]");
  }
  // First record with λ_i <= lambda (records are in decreasing λ).
  const auto it = std::lower_bound(ks.begin(), ks.end(), lambda,
                                   [](const Kink& k, double l) { return k.lambda > l; });
  if (it->lambda == lambda) return it->coeffs;
  const Kink& below = *it;
  const Kink& above = *(it - 1);
  if (path.kind == PathKind::Approximate && lambda >= above.valid_until) return above.coeffs;

  const double top = path.kind == PathKind::Approximate ? above.valid_until : above.lambda;
  const Vector& top_coeffs = above.coeffs;
  const double t = (top - lambda) / (top - below.lambda);
  return top_coeffs + t * (below.coeffs - top_coeffs);
}

}  // namespace lassopath
