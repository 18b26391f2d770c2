#pragma once

#include <cstdint>
#include <vector>

#include "lassopath/homotopy.hpp"
#include "lassopath/model.hpp"

namespace lassopath {

class InvalidPath : public LassoError {
 public:
  using LassoError::LassoError;
};

class InvalidSequence : public LassoError {
 public:
  using LassoError::LassoError;
};

/// Raised when a level of the recursive construction no longer reproduces the
/// predicted path in the working precision.
class PrecisionExhausted : public LassoError {
 public:
  PrecisionExhausted(const std::string& what, Index achieved_p)
      : LassoError(what), achieved_p_(achieved_p) {}
  /// Largest dimension whose exact path was verified.
  Index achieved_p() const { return achieved_p_; }

 private:
  Index achieved_p_;
};

inline constexpr double kDefaultAlphaFactor = 0.5;

struct AdversarialConfig {
  Index p = 1;
  /// Fraction of the admissible upper bound on α, strictly inside (0, 1).
  double alpha_factor = kDefaultAlphaFactor;
  double y_next = 1.0;
};

/// Appends one observation and one variable:
///   ỹ = [y; y_next],  X̃ = [[X, 2αy], [0, α·y_next]],
/// with α = alpha_factor·λ₁/(2yᵀy + y_next²) and λ₁ the last kink of
/// `exact_path`. If the old path has k segments the new one has 3k − 1.
ProblemInstance extend_instance(const ProblemInstance& inst, const RegularizationPath& exact_path,
                                double y_next = 1.0, double alpha_factor = kDefaultAlphaFactor);

/// α used by extend_instance.
double extension_alpha(const ProblemInstance& inst, const RegularizationPath& exact_path,
                       double y_next, double alpha_factor);

/// Pattern sequence of the extended path predicted from the old one:
/// [ηⁱ;0] for i = 1..k, then [ηᵏ;1] … [η¹;1], then [−η²;1] … [−ηᵏ;1].
std::vector<SignPattern> expected_pattern_sequence(const std::vector<SignPattern>& old_patterns);

/// Segment count of the worst-case path in dimension p, (3^p + 1)/2.
std::uint64_t worst_case_segments(Index p);

struct PathologicalLevel {
  ProblemInstance instance;
  RegularizationPath path;
};

/// Exact-path settings for the recursive construction: no λ floor, no event
/// merging, extended precision. Kinks of deep levels sit within a few ulps of
/// each other in 64-bit arithmetic.
HomotopyOptions pathological_options();

/// Builds levels 1..p of the recursive construction starting from y = [1],
/// X = [1], computing and checking the exact path of every level (segment
/// count and pattern sequence). Throws PrecisionExhausted at the first level
/// that deviates.
std::vector<PathologicalLevel> pathological_chain(const AdversarialConfig& config,
                                                  const HomotopyOptions& opts = pathological_options());

/// Worst-case instance in dimension p. Only levels 1..p−1 are solved.
ProblemInstance gen_pathological(Index p, double alpha_factor = kDefaultAlphaFactor,
                                 const HomotopyOptions& opts = pathological_options());

/// Instance with i.i.d. standard normal entries, seeded deterministically.
ProblemInstance gaussian_instance(Index n, Index p, std::uint64_t seed);

}  // namespace lassopath
