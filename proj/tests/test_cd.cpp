#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lassopath/adversarial.hpp"
#include "lassopath/coordinate_descent.hpp"
#include "lassopath/homotopy.hpp"
#include "oracles.hpp"

using namespace lassopath;

namespace {

ProblemInstance unit() { return ProblemInstance(Vector::Ones(1), Matrix::Ones(1, 1)); }

}  // namespace

TEST(SoftThreshold, Examples) {
  EXPECT_DOUBLE_EQ(soft_threshold(2, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(soft_threshold(-0.3, 0.5), 0.0);
  for (double z : {-2.5, 0.0, 1e-300, 7.0}) EXPECT_DOUBLE_EQ(soft_threshold(z, 0), z);
  EXPECT_DOUBLE_EQ(soft_threshold(-2, 0.5), -1.5);
  EXPECT_THROW(soft_threshold(1, -0.1), LassoError);
}

TEST(CdSolve, AboveLambdaMax) {
  const auto res = cd_solve(unit(), 1.5, Vector::Zero(1));
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.w[0], 0.0);
  EXPECT_LE(res.sweeps, 1u);
}

TEST(CdSolve, ClosedForm) {
  const auto res = cd_solve(unit(), 0.5, Vector::Zero(1));
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.w[0], 0.5, 1e-15);
}

TEST(CdSolve, MatchesOneDimensionalOracle) {
  Vector y(3);
  y << 1.0, -2.0, 0.5;
  Matrix X(3, 1);
  X << 0.3, -1.1, 2.0;
  const ProblemInstance inst(y, X);
  for (double lambda : {0.01, 0.5, 1.5, 3.0}) {
    const auto res = cd_solve(inst, lambda, Vector::Zero(1));
    EXPECT_NEAR(res.w[0], oracle::lasso_1d(X.col(0).dot(y), X.col(0).squaredNorm(), lambda),
                1e-14);
  }
}

TEST(CdSolve, AgreesWithHomotopy) {
  const auto inst = gaussian_instance(50, 20, 3);
  const double lambda = 0.3 * inst.lambda_max();
  CdOptions opts;
  opts.epsilon1 = opts.epsilon2 = 1e-9;
  const auto res = cd_solve(inst, lambda, Vector::Zero(20), opts);
  ASSERT_TRUE(res.converged);
  const auto path = compute_exact_path(inst);
  const double f_path = objective(inst, interpolate(path, lambda), lambda);
  EXPECT_LE(std::abs(objective(inst, res.w, lambda) - f_path), 1e-8 * f_path);
}

TEST(CdSolve, MonotoneDescent) {
  const auto inst = gaussian_instance(40, 30, 9);
  CdOptions opts;
  opts.trace_objective = true;
  opts.epsilon1 = opts.epsilon2 = 1e-10;
  const auto res = cd_solve(inst, 0.05 * inst.lambda_max(), Vector::Zero(30), opts);
  ASSERT_GE(res.objective_trace.size(), 2u);
  for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
    EXPECT_LE(res.objective_trace[i], res.objective_trace[i - 1] * (1 + 1e-14));
  }
}

TEST(CdSolve, StopsInsideBand) {
  const auto inst = gaussian_instance(60, 25, 4);
  for (double eps : {1e-1, 1e-3, 1e-6}) {
    CdOptions opts;
    opts.epsilon1 = opts.epsilon2 = eps;
    const double lambda = 0.1 * inst.lambda_max();
    const auto res = cd_solve(inst, lambda, Vector::Zero(25), opts);
    ASSERT_TRUE(res.converged);
    EXPECT_TRUE(check_opt_condition(inst, res.w, lambda, eps, eps).pass);
  }
}

TEST(CdSolve, ReportsNonConvergence) {
  const auto inst = gaussian_instance(60, 25, 5);
  CdOptions opts;
  opts.max_sweeps = 1;
  const auto res = cd_solve(inst, 1e-4 * inst.lambda_max(), Vector::Zero(25), opts);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.sweeps, 1u);
  EXPECT_FALSE(res.report.pass);
}

TEST(CdSolve, WarmStartDimensionChecked) {
  EXPECT_THROW(cd_solve(unit(), 0.5, Vector::Zero(2)), DimensionMismatch);
}

TEST(CdSolve, ExtendedIterate) {
  const auto inst = gen_pathological(5);
  const double lambda = 0.01 * inst.lambda_max();
  CdOptions opts;
  opts.epsilon1 = opts.epsilon2 = 1e-9;
  const auto res = cd_solve_extended(inst, lambda, VectorT<Extended>::Zero(5), opts);
  ASSERT_TRUE(res.converged);
  EXPECT_TRUE(check_opt_condition_extended(inst, res.w, lambda, 1e-9, 1e-9).pass);
}

// Certificate chain: the band reached by the solver bounds the relative gap.
TEST(CdSolve, CertificateChain) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = gaussian_instance(40, 15, 500 + static_cast<std::uint64_t>(trial));
    const double e1 = unif(rng), e2 = unif(rng);
    CdOptions opts;
    opts.epsilon1 = e1;
    opts.epsilon2 = e2;
    const double lambda = 0.2 * inst.lambda_max();
    const auto res = cd_solve(inst, lambda, Vector::Zero(15), opts);
    ASSERT_TRUE(res.converged);
    const auto cert = duality_gap(inst, res.w, dual_from_primal(inst, res.w, e1), lambda);
    EXPECT_LE(cert.relative_gap, gap_bound_factor(e1, e2) + 1e-10);
  }
}
