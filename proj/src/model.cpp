#include "lassopath/model.hpp"

#include <algorithm>
#include <cmath>

namespace lassopath {

namespace {

void require_length(const Vector& v, Index expected, const char* what) {
  if (v.size() != expected) {
    throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(expected) +
                            ", got " + std::to_string(v.size()));
  }
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

ProblemInstance::ProblemInstance(Vector y, Matrix X) : y_(std::move(y)), X_(std::move(X)) {
  if (X_.rows() < 1 || X_.cols() < 1) {
    throw InvalidInstance("design matrix must have n >= 1 and p >= 1");
  }
  require_length(y_, X_.rows(), "response vector");
  if (!y_.allFinite() || !X_.allFinite()) {
    throw InvalidInstance("instance contains non-finite values");
  }
  column_norms_sq_ = X_.colwise().squaredNorm().transpose();
  for (Index j = 0; j < X_.cols(); ++j) {
    if (!(column_norms_sq_[j] > 0.0)) {
      throw InvalidInstance("column " + std::to_string(j) + " has zero norm");
    }
  }
  X_ext_ = X_.cast<Extended>();
  const Vector xty = X_.transpose() * y_;
  lambda_max_ = xty.cwiseAbs().maxCoeff(&lambda_max_index_);
}

VectorT<Extended> ProblemInstance::residual(const Vector& w) const {
  require_length(w, p(), "coefficient vector");
  return y_.cast<Extended>() - X_ext_ * w.cast<Extended>();
}

VectorT<Extended> ProblemInstance::residual_extended(const VectorT<Extended>& w) const {
  if (w.size() != p()) throw DimensionMismatch("coefficient vector has wrong length");
  return y_.cast<Extended>() - X_ext_ * w;
}

VectorT<Extended> ProblemInstance::correlations_extended(const VectorT<Extended>& w) const {
  return X_ext_.transpose() * residual_extended(w);
}

Vector ProblemInstance::correlations(const Vector& w) const {
  return (X_ext_.transpose() * residual(w)).cast<double>();
}

SignPattern::SignPattern(std::vector<std::int8_t> entries) : entries_(std::move(entries)) {
  for (auto e : entries_) {
    if (e < -1 || e > 1) throw LassoError("sign pattern entries must be -1, 0 or +1");
  }
}

void SignPattern::set(Index j, int sign) {
  if (sign < -1 || sign > 1) throw LassoError("sign pattern entries must be -1, 0 or +1");
  entries_.at(static_cast<std::size_t>(j)) = static_cast<std::int8_t>(sign);
}

bool SignPattern::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](auto e) { return e == 0; });
}

SignPattern SignPattern::operator-() const {
  SignPattern out = *this;
  for (auto& e : out.entries_) e = static_cast<std::int8_t>(-e);
  return out;
}

SignPattern SignPattern::extended(int last) const {
  SignPattern out = *this;
  out.entries_.push_back(0);
  out.set(out.size() - 1, last);
  return out;
}

std::string SignPattern::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += ',';
    s += entries_[i] > 0 ? "+1" : (entries_[i] < 0 ? "-1" : "0");
  }
  return s + "]";
}

std::string to_string(PathStatus status) {
  switch (status) {
    case PathStatus::Complete: return "complete";
    case PathStatus::Singular: return "singular";
    case PathStatus::MaxKinks: return "max_kinks";
    case PathStatus::MaxSweeps: return "max_sweeps";
  }
  return "unknown";
}

double RegularizationPath::last_kink_lambda() const {
  if (kinks.empty()) throw LassoError("empty path");
  if (kinks.size() == 1 || truncated()) return kinks.back().lambda;
  return kinks[kinks.size() - 2].lambda;
}

std::vector<SignPattern> RegularizationPath::patterns() const {
  std::vector<SignPattern> out;
  out.reserve(kinks.size());
  for (const auto& k : kinks) out.push_back(k.pattern);
  return out;
}

double objective(const ProblemInstance& inst, const Vector& w, double lambda) {
  const VectorT<Extended> r = inst.residual(w);
  return static_cast<double>(Extended(0.5) * r.squaredNorm() + Extended(lambda) * w.lpNorm<1>());
}

double objective_extended(const ProblemInstance& inst, const VectorT<Extended>& w, double lambda) {
  const VectorT<Extended> r = inst.residual_extended(w);
  return static_cast<double>(Extended(0.5) * r.squaredNorm() + Extended(lambda) * w.lpNorm<1>());
}

namespace {

struct DualParts {
  Extended value = 0;
  Extended constraint_norm = 0;
};

DualParts dual_parts(const ProblemInstance& inst, const VectorT<Extended>& kappa) {
  if (kappa.size() != inst.n()) {
    throw DimensionMismatch("dual vector: expected length " + std::to_string(inst.n()) +
                            ", got " + std::to_string(kappa.size()));
  }
  DualParts out;
  out.value = Extended(-0.5) * kappa.squaredNorm() - kappa.dot(inst.y().cast<Extended>());
  out.constraint_norm = (inst.X_extended().transpose() * kappa).lpNorm<Eigen::Infinity>();
  return out;
}

bool dual_feasible(Extended constraint_norm, double lambda) {
  return constraint_norm <= Extended(lambda) * (1 + Extended(kDualFeasibilityTol));
}

}  // namespace

DualValue dual_objective(const ProblemInstance& inst, const Vector& kappa, double lambda) {
  const DualParts d = dual_parts(inst, kappa.cast<Extended>());
  DualValue out;
  out.value = static_cast<double>(d.value);
  out.constraint_norm = static_cast<double>(d.constraint_norm);
  out.feasible = dual_feasible(d.constraint_norm, lambda);
  return out;
}

Vector dual_from_primal(const ProblemInstance& inst, const Vector& w, double epsilon1) {
  return (-inst.residual(w) / (1 + Extended(epsilon1))).cast<double>();
}

Certificate duality_gap(const ProblemInstance& inst, const Vector& w, const Vector& kappa,
                        double lambda) {
  return duality_gap(inst, w, VectorT<Extended>(kappa.cast<Extended>()), lambda);
}

Certificate duality_gap(const ProblemInstance& inst, const Vector& w,
                        const VectorT<Extended>& kappa, double lambda) {
  const DualParts d = dual_parts(inst, kappa);
  if (!dual_feasible(d.constraint_norm, lambda)) {
    throw InfeasibleDual("dual point violates ||X^T kappa||_inf <= lambda: " +
                         std::to_string(static_cast<double>(d.constraint_norm)) + " > " +
                         std::to_string(lambda));
  }
  const VectorT<Extended> r = inst.residual(w);
  const Extended primal = Extended(0.5) * r.squaredNorm() + Extended(lambda) * w.lpNorm<1>();
  const Extended gap = primal - d.value;
  Certificate c;
  c.w = w;
  c.kappa = kappa.cast<double>();
  c.lambda = lambda;
  c.primal = static_cast<double>(primal);
  c.dual = static_cast<double>(d.value);
  c.gap = static_cast<double>(gap);
  c.relative_gap = primal > 0 ? static_cast<double>(gap / primal) : 0.0;
  return c;
}

OptimalityReport check_exact_optimality(const ProblemInstance& inst, const Vector& w,
                                        double lambda, double tol) {
  const Vector c = inst.correlations(w);
  OptimalityReport rep;
  double worst = -1.0;
  for (Index j = 0; j < inst.p(); ++j) {
    double v = 0.0;
    if (w[j] != 0.0) {
      v = std::abs(c[j] - lambda * sign_of(w[j]));
      rep.equality_violation = std::max(rep.equality_violation, v);
      if (v > tol) rep.pass = false;
    } else {
      v = std::max(0.0, std::abs(c[j]) - lambda);
      rep.inequality_violation = std::max(rep.inequality_violation, v);
      if (std::abs(c[j]) > lambda + tol) rep.pass = false;
    }
    if (v > worst) {
      worst = v;
      rep.worst_index = j;
    }
  }
  return rep;
}

void require_epsilons(double epsilon1, double epsilon2) {
  if (!(epsilon1 >= 0.0) || !(epsilon2 >= -epsilon1)) {
    throw InvalidEpsilon("need epsilon1 >= 0 and epsilon2 >= -epsilon1");
  }
}

OptimalityReport check_opt_condition(const ProblemInstance& inst, const Vector& w,
                                     double lambda, double epsilon1, double epsilon2) {
  const VectorT<Extended> c = inst.X_extended().transpose() * inst.residual(w);
  return opt_band(w, c, lambda, epsilon1, epsilon2);
}

OptimalityReport check_opt_condition_extended(const ProblemInstance& inst,
                                              const VectorT<Extended>& w, double lambda,
                                              double epsilon1, double epsilon2) {
  return opt_band(w, inst.correlations_extended(w), lambda, epsilon1, epsilon2);
}

double gap_bound_factor(double epsilon1, double epsilon2) {
  require_epsilons(epsilon1, epsilon2);
  const double a = epsilon1 / (1.0 + epsilon1);
  return std::max(a * a, (epsilon1 + epsilon2) / (1.0 + epsilon1));
}

SignPattern sign_pattern(const Vector& w, double zero_tol) {
  if (zero_tol < 0.0) throw LassoError("zero tolerance must be nonnegative");
  SignPattern out(w.size());
  for (Index j = 0; j < w.size(); ++j) {
    if (std::abs(w[j]) > zero_tol) out.set(j, sign_of(w[j]));
  }
  return out;
}

}  // namespace lassopath
