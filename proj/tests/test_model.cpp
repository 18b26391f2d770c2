#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lassopath/adversarial.hpp"
#include "lassopath/coordinate_descent.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/model.hpp"
#include "oracles.hpp"

using namespace lassopath;

namespace {

ProblemInstance unit() { return ProblemInstance(Vector::Ones(1), Matrix::Ones(1, 1)); }

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST(ProblemInstance, RejectsBadShapes) {
  EXPECT_THROW(ProblemInstance(Vector::Ones(2), Matrix::Ones(3, 1)), DimensionMismatch);
  EXPECT_THROW(ProblemInstance(Vector::Ones(2), Matrix::Zero(2, 1)), InvalidInstance);
  Matrix X = Matrix::Ones(2, 1);
  X(0, 0) = NAN;
  EXPECT_THROW(ProblemInstance(Vector::Ones(2), X), InvalidInstance);
}

TEST(ProblemInstance, LambdaMax) {
  Matrix X(2, 2);
  X << 1, 0, 0, 2;
  const ProblemInstance inst(vec({1, -1}), X);
  EXPECT_DOUBLE_EQ(inst.lambda_max(), 2.0);
  EXPECT_EQ(inst.lambda_max_index(), 1);
}

TEST(Objective, Examples) {
  const auto inst = unit();
  EXPECT_DOUBLE_EQ(objective(inst, vec({0}), 0.3), 0.5);
  EXPECT_DOUBLE_EQ(objective(inst, vec({1}), 0.5), 0.5);
  EXPECT_DOUBLE_EQ(objective(inst, vec({0.5}), 0.5), 0.375);
  EXPECT_THROW(objective(inst, vec({0, 0}), 0.5), DimensionMismatch);
}

TEST(DualObjective, Examples) {
  const auto inst = unit();
  auto d = dual_objective(inst, vec({0}), 0.5);
  EXPECT_DOUBLE_EQ(d.value, 0.0);
  EXPECT_TRUE(d.feasible);
  d = dual_objective(inst, vec({-1}), 1.0);
  EXPECT_DOUBLE_EQ(d.value, 0.5);
  EXPECT_TRUE(d.feasible);
  d = dual_objective(inst, vec({-1}), 0.5);
  EXPECT_DOUBLE_EQ(d.value, 0.5);
  EXPECT_FALSE(d.feasible);
  EXPECT_DOUBLE_EQ(d.constraint_norm, 1.0);
}

TEST(DualFromPrimal, Examples) {
  const auto inst = unit();
  EXPECT_DOUBLE_EQ(dual_from_primal(inst, vec({0}), 0.0)[0], -1.0);
  EXPECT_DOUBLE_EQ(dual_from_primal(inst, vec({1}), 0.0)[0], 0.0);
  EXPECT_THROW(dual_from_primal(inst, vec({0, 0}), 0.0), DimensionMismatch);
}

TEST(DualFromPrimal, PathologicalHalfLambdaMax) {
  const auto inst = gen_pathological(2);
  ASSERT_EQ(inst.y().size(), 2);
  const double lambda = inst.lambda_max() / 2;
  const auto w = oracle::brute_force_lasso(inst.y(), inst.X(), lambda);
  ASSERT_TRUE(w.has_value());
  const Vector kappa = dual_from_primal(inst, *w, 0.0);
  EXPECT_TRUE(dual_objective(inst, kappa, lambda).feasible ||
              (inst.X().transpose() * kappa).lpNorm<Eigen::Infinity>() <= lambda * (1 + 1e-12));
  const auto cert = duality_gap(inst, *w, kappa, lambda);
  EXPECT_LE(cert.gap, 1e-10);
}

TEST(DualityGap, Examples) {
  const auto inst = unit();
  auto cert = duality_gap(inst, vec({0}), vec({-1}), 1.0);
  EXPECT_DOUBLE_EQ(cert.gap, 0.0);
  cert = duality_gap(inst, vec({0}), vec({-0.5}), 0.5);
  EXPECT_DOUBLE_EQ(cert.primal, 0.5);
  EXPECT_DOUBLE_EQ(cert.dual, 0.375);
  EXPECT_DOUBLE_EQ(cert.gap, 0.125);
  EXPECT_THROW(duality_gap(inst, vec({0}), vec({-1}), 0.5), InfeasibleDual);
}

TEST(DualityGap, StrongDualityAtOptimum) {
  const auto X = oracle::gaussian_matrix(12, 5, 7);
  const Vector y = oracle::gaussian_matrix(12, 1, 8).col(0);
  const ProblemInstance inst(y, X);
  const double lambda = 0.2 * inst.lambda_max();
  const auto w = oracle::brute_force_lasso(y, X, lambda);
  ASSERT_TRUE(w.has_value());
  const auto cert = duality_gap(inst, *w, dual_from_primal(inst, *w, 0.0), lambda);
  EXPECT_LE(cert.gap, 1e-10 * cert.primal);
  EXPECT_LE(cert.relative_gap, 1e-9);
}

TEST(ExactOptimality, Examples) {
  const auto inst = unit();
  EXPECT_TRUE(check_exact_optimality(inst, vec({0}), 1.5, 1e-9).pass);
  EXPECT_TRUE(check_exact_optimality(inst, vec({0.5}), 0.5, 1e-9).pass);
  const auto rep = check_exact_optimality(inst, vec({0.9}), 0.5, 1e-9);
  EXPECT_FALSE(rep.pass);
  EXPECT_NEAR(rep.equality_violation, 0.4, 1e-12);
  EXPECT_EQ(rep.worst_index, 0);
}

TEST(OptCondition, Examples) {
  const auto inst = unit();
  EXPECT_TRUE(check_opt_condition(inst, vec({0.45}), 0.5, 0.2, 0.2).pass);
  EXPECT_FALSE(check_opt_condition(inst, vec({0.45}), 0.5, 0.05, 0.05).pass);
  EXPECT_THROW(check_opt_condition(inst, vec({0.45}), 0.5, -0.1, 0.0), InvalidEpsilon);
}

TEST(OptCondition, ReducesToExactAtZero) {
  const auto inst = unit();
  for (double w : {0.0, 0.3, 0.5, 0.7}) {
    for (double lambda : {0.2, 0.5, 1.2}) {
      EXPECT_EQ(check_opt_condition(inst, vec({w}), lambda, 0, 0).pass,
                check_exact_optimality(inst, vec({w}), lambda, 0).pass);
    }
  }
}

TEST(GapBoundFactor, Examples) {
  EXPECT_DOUBLE_EQ(gap_bound_factor(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(gap_bound_factor(0, 0.3), 0.3);
  EXPECT_NEAR(gap_bound_factor(0.5, 0.5), 2.0 / 3.0, 1e-15);
}

TEST(SignPattern, Examples) {
  EXPECT_EQ(sign_pattern(vec({0.5, 0, -2}), 0).to_string(), "[+1,0,-1]");
  EXPECT_EQ(sign_pattern(vec({1e-14}), 1e-12)[0], 0);
  EXPECT_EQ(sign_pattern(vec({-1e-14}), 0)[0], -1);
}

TEST(SignPattern, Operations) {
  SignPattern s(std::vector<std::int8_t>{1, 0, -1});
  EXPECT_EQ((-s), SignPattern(std::vector<std::int8_t>{-1, 0, 1}));
  EXPECT_EQ(s.extended(1).size(), 4);
  EXPECT_FALSE(s.is_zero());
  EXPECT_TRUE(SignPattern(3).is_zero());
  EXPECT_THROW(SignPattern(std::vector<std::int8_t>{2}), LassoError);
}

// Weak duality: any feasible κ gives a lower bound on any primal value.
TEST(Properties, WeakDuality) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const ProblemInstance inst(oracle::gaussian_matrix(8, 1, 100 + trial).col(0),
                               oracle::gaussian_matrix(8, 4, 200 + trial));
    const double lambda = 0.5 * inst.lambda_max();
    Vector w(4), kappa(8);
    for (auto& x : w) x = normal(rng);
    for (auto& x : kappa) x = normal(rng);
    const double scale = (inst.X().transpose() * kappa).lpNorm<Eigen::Infinity>();
    kappa *= lambda / scale;
    const auto d = dual_objective(inst, kappa, lambda);
    ASSERT_TRUE(d.feasible);
    EXPECT_LE(d.value, objective(inst, w, lambda) + 1e-12);
  }
}

// Any point in the band certifies the stated relative gap.
TEST(Properties, GapBoundOnBand) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const ProblemInstance inst(oracle::gaussian_matrix(30, 1, 300 + trial).col(0),
                               oracle::gaussian_matrix(30, 10, 400 + trial));
    const double e1 = unif(rng), e2 = unif(rng);
    const double lambda = 0.3 * inst.lambda_max();
    CdOptions opts;
    opts.epsilon1 = e1;
    opts.epsilon2 = e2;
    const auto res = cd_solve(inst, lambda, Vector::Zero(10), opts);
    ASSERT_TRUE(res.converged);
    const auto cert = duality_gap(inst, res.w, dual_from_primal(inst, res.w, e1), lambda);
    EXPECT_LE(cert.relative_gap, gap_bound_factor(e1, e2) + 1e-10);
  }
}
