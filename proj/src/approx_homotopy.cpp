#include "lassopath/approx_homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "lassopath/gram.hpp"
#include "lassopath/quad.hpp"

namespace lassopath {

double theta(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidEpsilon("epsilon must be in [0, 1]");
  return 1.0 + epsilon / 2.0 - std::sqrt(epsilon) / 2.0;
}

std::size_t segment_bound(double lambda_inf, double lambda_1, double epsilon) {
  if (!(lambda_1 > 0.0) || lambda_inf < lambda_1) {
    throw LassoError("segment bound needs lambda_inf >= lambda_1 > 0");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidEpsilon("epsilon must be in (0, 1)");
  const double v = std::log(lambda_inf / lambda_1) / (theta(epsilon) * std::sqrt(epsilon));
  return static_cast<std::size_t>(std::ceil(v));
}

namespace {

template <typename Real>
std::vector<Index> support(const VectorT<Real>& w) {
  std::vector<Index> out;
  for (Index j = 0; j < w.size(); ++j) {
    if (w[j] != 0) out.push_back(j);
  }
  return out;
}

template <typename Real>
int sign_of(Real v) { return (v > 0) - (v < 0); }

// Relative violation of the band tolerated at the end of a homotopy segment.
constexpr double kBandSlack = 1e-9;
// Long double runs hand over to quad precision once the band half-width
// ε/2·λ drops below this many ulps of ‖y‖·max_j‖x_j‖.
constexpr double kResolutionUlps = 1e3;

// Design matrix, correlations, band test and first-order solver in one
// working precision.
template <typename Real>
class Workspace {
 public:
  explicit Workspace(const ProblemInstance& inst) : inst_(inst), y_(inst.y().cast<Real>()) {
    if constexpr (std::is_same_v<Real, double>) {
      X_ = &inst.X();
    } else if constexpr (std::is_same_v<Real, Extended>) {
      X_ = &inst.X_extended();
    } else {
      owned_ = inst.X().cast<Real>();
      X_ = &owned_;
    }
  }

  const MatrixT<Real>& X() const { return *X_; }
  const VectorT<Real>& y() const { return y_; }

  VectorT<Real> correlations(const VectorT<Real>& w) const {
    if constexpr (std::is_same_v<Real, double>) {
      return inst_.correlations(w);
    } else if constexpr (std::is_same_v<Real, Extended>) {
      return inst_.correlations_extended(w);
    } else {
      return X().transpose() * (y_ - X() * w);
    }
  }

  OptimalityReport band(const VectorT<Real>& w, double lambda, double half) const {
    return opt_band(w, correlations(w), lambda, half, half);
  }

  BasicCdResult<Real> cd(double lambda, const VectorT<Real>& w, const CdOptions& opts) const {
    if constexpr (std::is_same_v<Real, double>) {
      return cd_solve(inst_, lambda, w, opts);
    } else if constexpr (std::is_same_v<Real, Extended>) {
      return cd_solve_extended(inst_, lambda, w, opts);
    } else {
      return cd_solve_quad(inst_, lambda, w, opts);
    }
  }

 private:
  const ProblemInstance& inst_;
  VectorT<Real> y_;
  MatrixT<Real> owned_;
  const MatrixT<Real>* X_ = nullptr;
};

template <typename Real>
struct FollowState {
  Real lambda = 0;
  VectorT<Real> w;
  std::vector<Index> active;
  std::optional<Index> just_entered;
  std::optional<Index> just_left;
  int just_left_sign = 0;

  template <typename Other>
  FollowState<Other> cast() const {
    FollowState<Other> out;
    out.lambda = Other(lambda);
    out.w = w.template cast<Other>();
    out.active = active;
    out.just_entered = just_entered;
    out.just_left = just_left;
    out.just_left_sign = just_left_sign;
    return out;
  }
};

template <typename Real>
Kink make_record(Real lambda, const VectorT<Real>& w, std::vector<Index> active,
                 SignPattern pattern) {
  Kink k;
  k.lambda = static_cast<double>(lambda);
  k.valid_until = k.lambda;
  k.coeffs = w.template cast<double>();
  k.active_set = std::move(active);
  k.pattern = std::move(pattern);
  return k;
}

// Runs until λ₁, a failure recorded in path.status, or λ < hand_over.
// Returns true in the last case.
template <typename Real>
bool follow(const ProblemInstance& inst, const ApproxOptions& opts, double lambda_1,
            double hand_over, RegularizationPath& path, FollowState<Real>& st) {
  using Vec = VectorT<Real>;
  const Workspace<Real> ws(inst);
  const MatrixT<Real>& X = ws.X();
  const Vec& y = ws.y();
  const double eps = opts.epsilon;
  const double half = eps / 2.0;
  const double step = theta(eps) * std::sqrt(eps);
  const Index p = inst.p();

  const EventScanOptions scan{lambda_1, opts.event_tol, 1.0 + half};
  CdOptions cd;
  cd.epsilon1 = half;
  cd.epsilon2 = half;
  cd.max_sweeps = opts.max_sweeps;

  while (st.lambda > lambda_1) {
    if (st.lambda < hand_over) return true;
    if (path.kinks.size() >= opts.max_kinks) {
      path.status = PathStatus::MaxKinks;
      return false;
    }

    bool homotopy_step = false;
    std::optional<BasicGramSystem<Real>> gram;
    if (!st.active.empty()) {
      try {
        gram = BasicGramSystem<Real>::build(X, st.active, opts.max_condition);
      } catch (const SingularError&) {
        gram.reset();
      }
    }

    if (gram || st.active.empty()) {
      const Vec corr = ws.correlations(st.w);
      BasicActiveState<Real> state;
      state.active = st.active;
      state.eta.resize(static_cast<Index>(st.active.size()));
      for (std::size_t k = 0; k < st.active.size(); ++k) {
        state.eta[static_cast<Index>(k)] = corr[st.active[k]] / st.lambda;
      }
      state.just_entered = st.just_entered;
      state.just_left = st.just_left;
      state.just_left_sign = st.just_left_sign;
      BasicSegmentDirection<Real> dir;
      if (gram) dir = segment_direction<Real>(X, y, *gram, state.eta);
      const auto events = next_event<Real>(X, y, st.lambda, state, dir, scan);
      const Real next_lambda = events.front().lambda;
      const bool path_end = events.front().kind == EventKind::PathEnd;
      const auto leaves = [&](Index j) {
        return !path_end && std::any_of(events.begin(), events.end(), [&](const auto& e) {
          return e.kind == EventKind::Leave && e.index == j;
        });
      };

      if (path_end || st.lambda - next_lambda >= st.lambda * Real(step)) {
        Vec next_w = Vec::Zero(p);
        SignPattern pattern(p);
        std::vector<Index> kept;
        std::vector<Real> kept_eta;
        for (std::size_t k = 0; k < st.active.size(); ++k) {
          pattern.set(st.active[k], sign_of(state.eta[static_cast<Index>(k)]));
          if (!leaves(st.active[k])) {
            kept.push_back(st.active[k]);
            kept_eta.push_back(state.eta[static_cast<Index>(k)]);
          }
        }
        if (!kept.empty()) {
          // Leaving coordinates are dropped from the system rather than zeroed
          // afterwards, and one refinement step on X_Jᵀ(y − Xw) = λη brings the
          // correlations to working precision. Both matter near λ = 0, where
          // the band is narrower than the forward error of the solve.
          std::optional<BasicGramSystem<Real>> end_gram;
          try {
            end_gram = kept.size() == st.active.size()
                           ? *gram
                           : BasicGramSystem<Real>::build(X, kept, opts.max_condition);
          } catch (const SingularError&) {
          }
          const Index m = static_cast<Index>(kept.size());
          const Vec eta = Eigen::Map<const Vec>(kept_eta.data(), m);
          if (end_gram) {
            const Vec values = segment_direction<Real>(X, y, *end_gram, eta).at(next_lambda);
            for (Index k = 0; k < m; ++k) next_w[kept[k]] = values[k];
            const Vec corr_end = ws.correlations(next_w);
            Vec defect(m);
            for (Index k = 0; k < m; ++k) defect[k] = corr_end[kept[k]] - next_lambda * eta[k];
            const Vec fix = end_gram->solve(defect);
            for (Index k = 0; k < m; ++k) next_w[kept[k]] += fix[k];
          } else {
            const Vec values = dir.at(next_lambda);
            for (std::size_t k = 0; k < st.active.size(); ++k) {
              if (!leaves(st.active[k])) next_w[st.active[k]] = values[static_cast<Index>(k)];
            }
          }
        }
        // The segment end sits on the band boundary; a few ulps outside are
        // accepted. Anything more means the direction lost accuracy and the
        // first-order branch takes over.
        const double at = static_cast<double>(next_lambda);
        homotopy_step = eps == 0.0 || ws.band(next_w, at, half).worst() <= kBandSlack * at;
        if (homotopy_step) {
          if (events.size() > 1) path.simultaneous_events += events.size() - 1;
          std::vector<Index> next_active = kept;
          st.just_entered.reset();
          st.just_left.reset();
          if (!path_end) {
            for (const auto& e : events) {
              if (e.kind == EventKind::Enter) next_active.push_back(e.index);
            }
            if (events.size() == 1) {
              if (events.front().kind == EventKind::Enter) st.just_entered = events.front().index;
              if (events.front().kind == EventKind::Leave) {
                st.just_left = events.front().index;
                st.just_left_sign = pattern[*st.just_left];
              }
            }
          }
          path.kinks.push_back(make_record<Real>(next_lambda, next_w, st.active, std::move(pattern)));
          st.w = std::move(next_w);
          st.lambda = next_lambda;
          st.active = std::move(next_active);
        }
      }
    }

    if (!homotopy_step) {
      if (eps == 0.0) {
        // No first-order fallback exists for an exact target.
        path.status = PathStatus::Singular;
        return false;
      }
      const double next_lambda =
          std::max(static_cast<double>(st.lambda) * (1.0 - step), lambda_1);
      const auto res = ws.cd(next_lambda, st.w, cd);
      if (!res.converged) {
        path.status = PathStatus::MaxSweeps;
        return false;
      }
      path.kinks.back().valid_until = next_lambda;
      st.w = res.w;
      st.lambda = next_lambda;
      st.active = support<Real>(st.w);
      st.just_entered.reset();
      st.just_left.reset();

      SignPattern pattern(p);
      for (Index j : st.active) pattern.set(j, sign_of(st.w[j]));
      path.kinks.push_back(make_record<Real>(st.lambda, st.w, st.active, std::move(pattern)));
      ++path.first_order_steps;
    }
  }
  return false;
}

template <typename Real>
FollowState<Real> initial_state(const ProblemInstance& inst) {
  FollowState<Real> st;
  st.lambda = inst.lambda_max();
  st.w = VectorT<Real>::Zero(inst.p());
  st.active = {inst.lambda_max_index()};
  st.just_entered = inst.lambda_max_index();
  return st;
}

}  // namespace

RegularizationPath compute_approx_path(const ProblemInstance& inst, const ApproxOptions& opts) {
  const double eps = opts.epsilon;
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidEpsilon("epsilon must be in [0, 1)");
  const double lambda_inf = inst.lambda_max();
  if (!(lambda_inf > 0.0)) throw InvalidInstance("lambda_max must be positive (X^T y = 0)");
  const double lambda_1 = opts.lambda_1.value_or(1e-3 * lambda_inf);
  if (!(lambda_1 > 0.0) || !(lambda_1 < lambda_inf)) {
    throw LassoError("lambda_1 must satisfy 0 < lambda_1 < lambda_max");
  }

  RegularizationPath path;
  path.kind = PathKind::Approximate;
  path.epsilon = eps;
  path.lambda_max = lambda_inf;

  Kink first;
  first.lambda = lambda_inf;
  first.valid_until = lambda_inf;
  first.coeffs = Vector::Zero(inst.p());
  first.pattern = SignPattern(inst.p());
  path.kinks.push_back(first);

  if (!opts.extended_precision) {
    auto st = initial_state<double>(inst);
    follow<double>(inst, opts, lambda_1, 0.0, path, st);
    return path;
  }
  double hand_over = 0.0;
  if (eps > 0.0) {
    const double scale = inst.y().norm() * std::sqrt(inst.column_norms_sq().maxCoeff());
    const double ulp = static_cast<double>(std::numeric_limits<Extended>::epsilon());
    hand_over = kResolutionUlps * ulp * scale / (eps / 2.0);
  }
  auto st = initial_state<Extended>(inst);
  if (follow<Extended>(inst, opts, lambda_1, hand_over, path, st)) {
    auto quad = st.cast<Quad>();
    follow<Quad>(inst, opts, lambda_1, 0.0, path, quad);
  }
  return path;
}

RegularizationPath sampled_exact_path(const ProblemInstance& inst, double epsilon,
                                      double lambda_1) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidEpsilon("epsilon must be in (0, 1)");
  const double lambda_inf = inst.lambda_max();
  if (!(lambda_1 > 0.0) || lambda_1 > lambda_inf) {
    throw LassoError("lambda_1 must satisfy 0 < lambda_1 <= lambda_max");
  }

  RegularizationPath path;
  path.kind = PathKind::Approximate;
  path.epsilon = epsilon;
  path.lambda_max = lambda_inf;

  std::vector<double> samples;
  const double factor = 1.0 - std::sqrt(epsilon);
  for (double l = lambda_inf; l > lambda_1; l *= factor) samples.push_back(l);
  samples.push_back(lambda_1);

  HomotopyOptions hopts;
  hopts.lambda_min = std::min(lambda_1, lambda_inf);
  const RegularizationPath exact = compute_exact_path(inst, hopts);
  path.status = exact.status;
  if (exact.lambda_end() > lambda_1) {
    while (!samples.empty() && samples.back() < exact.lambda_end()) samples.pop_back();
  }

  for (std::size_t i = 0; i < samples.size(); ++i) {
    Kink k;
    k.lambda = samples[i];
    k.coeffs = interpolate(exact, samples[i]);
    k.valid_until = i + 1 < samples.size() ? samples[i + 1] : samples[i];
    k.pattern = sign_pattern(k.coeffs, 0.0);
    k.active_set = support<double>(k.coeffs);
    path.kinks.push_back(std::move(k));
  }
  return path;
}

}  // namespace lassopath
