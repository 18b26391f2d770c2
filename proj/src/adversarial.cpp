#include "lassopath/adversarial.hpp"

#include <random>
#include <string>

namespace lassopath {

double extension_alpha(const ProblemInstance& inst, const RegularizationPath& exact_path,
                       double y_next, double alpha_factor) {
  if (!(alpha_factor > 0.0 && alpha_factor < 1.0)) {
    throw LassoError("alpha_factor must lie strictly inside (0, 1)");
  }
  if (y_next == 0.0) throw LassoError("y_next must be nonzero");
  if (exact_path.kind != PathKind::Exact || exact_path.truncated()) {
    throw InvalidPath("extension needs a complete exact path (status " +
                      to_string(exact_path.status) + ")");
  }
  const double lambda_1 = exact_path.last_kink_lambda();
  return alpha_factor * lambda_1 / (2.0 * inst.y().squaredNorm() + y_next * y_next);
}

ProblemInstance extend_instance(const ProblemInstance& inst, const RegularizationPath& exact_path,
                                double y_next, double alpha_factor) {
  const double alpha = extension_alpha(inst, exact_path, y_next, alpha_factor);
  const Index n = inst.n();
  const Index p = inst.p();

  Vector y(n + 1);
  y.head(n) = inst.y();
  y[n] = y_next;

  Matrix X = Matrix::Zero(n + 1, p + 1);
  X.topLeftCorner(n, p) = inst.X();
  X.col(p).head(n) = 2.0 * alpha * inst.y();
  X(n, p) = alpha * y_next;
  return ProblemInstance(std::move(y), std::move(X));
}

std::vector<SignPattern> expected_pattern_sequence(const std::vector<SignPattern>& old_patterns) {
  if (old_patterns.empty() || !old_patterns.front().is_zero()) {
    throw InvalidSequence("pattern sequence must start with the zero pattern");
  }
  const std::size_t k = old_patterns.size();
  std::vector<SignPattern> out;
  out.reserve(3 * k - 1);
  for (const auto& eta : old_patterns) out.push_back(eta.extended(0));
  for (std::size_t i = k; i-- > 0;) out.push_back(old_patterns[i].extended(1));
  for (std::size_t i = 1; i < k; ++i) out.push_back((-old_patterns[i]).extended(1));
  return out;
}

std::uint64_t worst_case_segments(Index p) {
  if (p < 1 || p > 39) throw LassoError("worst-case count defined for 1 <= p <= 39");
  std::uint64_t pow3 = 1;
  for (Index i = 0; i < p; ++i) pow3 *= 3;
  return (pow3 + 1) / 2;
}

namespace {

void check_level(const RegularizationPath& path, const std::vector<SignPattern>* previous,
                 Index p) {
  const std::string where = "level p=" + std::to_string(p);
  if (path.truncated()) {
    throw PrecisionExhausted(where + ": exact path truncated (" + to_string(path.status) + ")",
                             p - 1);
  }
  const std::uint64_t expected = worst_case_segments(p);
  if (path.kinks.size() != expected) {
    throw PrecisionExhausted(where + ": " + std::to_string(path.kinks.size()) +
                                 " segments, expected " + std::to_string(expected),
                             p - 1);
  }
  if (previous && path.patterns() != expected_pattern_sequence(*previous)) {
    throw PrecisionExhausted(where + ": pattern sequence deviates from the prediction", p - 1);
  }
}

}  // namespace

HomotopyOptions pathological_options() {
  HomotopyOptions opts;
  opts.lambda_min = 0.0;
  opts.event_tol = 0.0;
  opts.extended_precision = true;
  return opts;
}

std::vector<PathologicalLevel> pathological_chain(const AdversarialConfig& config,
                                                  const HomotopyOptions& opts) {
  if (config.p < 1) throw LassoError("p must be at least 1");
  std::vector<PathologicalLevel> levels;
  levels.reserve(static_cast<std::size_t>(config.p));

  ProblemInstance inst(Vector::Ones(1), Matrix::Ones(1, 1));
  RegularizationPath path = compute_exact_path(inst, opts);
  check_level(path, nullptr, 1);
  levels.push_back({inst, path});

  for (Index level = 2; level <= config.p; ++level) {
    const auto& prev = levels.back();
    ProblemInstance next = extend_instance(prev.instance, prev.path, config.y_next,
                                           config.alpha_factor);
    RegularizationPath next_path = compute_exact_path(next, opts);
    const auto previous_patterns = prev.path.patterns();
    check_level(next_path, &previous_patterns, level);
    levels.push_back({std::move(next), std::move(next_path)});
  }
  return levels;
}

ProblemInstance gen_pathological(Index p, double alpha_factor, const HomotopyOptions& opts) {
  if (p < 1) throw LassoError("p must be at least 1");
  if (!(alpha_factor > 0.0 && alpha_factor < 1.0)) {
    throw LassoError("alpha_factor must lie strictly inside (0, 1)");
  }
  if (p == 1) return ProblemInstance(Vector::Ones(1), Matrix::Ones(1, 1));
  AdversarialConfig config{p - 1, alpha_factor, 1.0};
  const auto levels = pathological_chain(config, opts);
  return extend_instance(levels.back().instance, levels.back().path, 1.0, alpha_factor);
}

ProblemInstance gaussian_instance(Index n, Index p, std::uint64_t seed) {
  if (n < 1 || p < 1) throw LassoError("need n >= 1 and p >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector y(n);
  Matrix X(n, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) X(i, j) = normal(rng);
  }
  for (Index i = 0; i < n; ++i) y[i] = normal(rng);
  return ProblemInstance(std::move(y), std::move(X));
}

}  // namespace lassopath
