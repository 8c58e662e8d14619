#include "gap/solvers.hpp"

#include "gap/problem.hpp"
#include "gap/spectral.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gap;
using gap::testing::known_pair;
using gap::testing::random_vector;

namespace {

// Residual of the shadow recomputed from scratch with plain projectors.
double oracle_residual(const FeasibilityProblem& p, const Vector& x) {
  const Matrix& U = p.U.basis();
  const Vector z = U * (U.transpose() * x);
  if (p.W.dim() == 0) return z.norm();
  const Matrix& W = p.W.basis();
  return (z - W * (W.transpose() * z)).norm();
}

}  // namespace

TEST(RunFixed, StartInIntersectionStopsImmediately) {
  std::mt19937_64 rng(1);
  const auto pair = known_pair(rng, {0.0, 0.4, 0.8}, 3, 4, 10);
  const FeasibilityProblem prob(pair.U, pair.V);
  ASSERT_EQ(prob.W.dim(), 1);
  const Vector x0 = prob.W.basis().col(0) * 3.0;
  const auto trace = run_fixed(optimal_parameters(0.4), prob, x0);
  EXPECT_EQ(trace.iteration_count, 0);
  EXPECT_EQ(trace.termination, Termination::Converged);
  EXPECT_EQ(trace.iterations.size(), 1u);
}

TEST(RunFixed, OrthogonalLinesConvergeInOneStep) {
  const Subspace U(Matrix::Identity(2, 1));
  Matrix b(2, 1);
  b << 0, 1;
  const Subspace V(b);
  Vector x0(2);
  x0 << 1, 1;
  const auto trace = run_fixed(optimal_parameters(std::numbers::pi / 2), U, V, x0);
  EXPECT_EQ(trace.iteration_count, 1);
  EXPECT_EQ(trace.termination, Termination::Converged);
  EXPECT_LT(trace.final_point.norm(), 1e-15);
}

TEST(RunFixed, MaxIterationsIsReported) {
  std::mt19937_64 rng(2);
  const auto pair = known_pair(rng, {0.01, 0.5}, 2, 2, 6);
  const auto trace = run_fixed(preset(Method::parse("AP")), pair.U, pair.V, random_vector(rng, 6),
                               StoppingRule{1e-8, 50});
  EXPECT_EQ(trace.termination, Termination::MaxIterations);
  EXPECT_EQ(trace.iteration_count, 50);
  EXPECT_EQ(to_string(trace.termination), "max_iters");
}

TEST(RunFixed, CarriedShadowMatchesRecomputedResidual) {
  std::mt19937_64 rng(3);
  const auto pair = known_pair(rng, {0.0, 0.15, 0.7, 1.3}, 4, 6, 16);
  const FeasibilityProblem prob(pair.U, pair.V);
  const Vector x0 = random_vector(rng, 16);
  for (const char* m : {"GAP_STAR", "DR", "MAP"}) {
    const auto params = preset(Method::parse(m), 0.15);
    const auto trace = run_fixed(params, prob, x0, StoppingRule{1e-8, 37});
    EXPECT_NEAR(trace.final_residual(), oracle_residual(prob, trace.final_point), 1e-12) << m;
  }
}

TEST(RunFixed, RecordEveryKeepsTheLastIteration) {
  std::mt19937_64 rng(4);
  const auto pair = known_pair(rng, {0.2, 0.9}, 2, 3, 8);
  const auto trace = run_fixed(optimal_parameters(0.2), FeasibilityProblem(pair.U, pair.V),
                               random_vector(rng, 8), StoppingRule{}, 7);
  ASSERT_GE(trace.iterations.size(), 2u);
  EXPECT_EQ(trace.iterations.front().k, 0);
  EXPECT_EQ(trace.iterations.back().k, trace.iteration_count);
  for (std::size_t i = 0; i + 1 < trace.iterations.size(); ++i) EXPECT_EQ(trace.iterations[i].k % 7, 0);
}

TEST(RunFixed, ScalingTheStartScalesTheResiduals) {
  std::mt19937_64 rng(5);
  const auto pair = known_pair(rng, {0.0, 0.1, 0.6}, 3, 4, 12);
  const FeasibilityProblem prob(pair.U, pair.V);
  const Vector x0 = random_vector(rng, 12);
  const auto params = optimal_parameters(0.1);
  const auto a = run_fixed(params, prob, x0, StoppingRule{1e-8, 1000});
  const auto b = run_fixed(params, prob, 1024.0 * x0, StoppingRule{1024e-8, 1000});
  EXPECT_EQ(a.iteration_count, b.iteration_count);
  for (std::size_t i = 0; i < a.iterations.size(); ++i)
    EXPECT_NEAR(1024.0 * a.iterations[i].shadow_residual, b.iterations[i].shadow_residual,
                1e-9 * b.iterations.front().shadow_residual);
}

TEST(RunFixed, OptimalBeatsMapBeatsDouglasRachford) {
  std::mt19937_64 rng(6);
  for (double tf : {0.05, 0.15, 0.4}) {
    const auto pair = known_pair(rng, {0.0, tf, 2 * tf, 1.2, 1.5}, 5, 7, 20);
    const FeasibilityProblem prob(pair.U, pair.V);
    const Vector x0 = random_vector(rng, 20);
    const long star = run_fixed(preset(Method::parse("GAP_STAR"), tf), prob, x0).iteration_count;
    const long map = run_fixed(preset(Method::parse("MAP"), tf), prob, x0).iteration_count;
    const long dr = run_fixed(preset(Method::parse("DR"), tf), prob, x0).iteration_count;
    EXPECT_LE(star, map) << tf;
    EXPECT_LE(map, dr) << tf;
  }
}

TEST(RunFixed, IterationCountsTrackTheoryForSmallAngles) {
  // Benchmark-style problems: many principal angles cluster above theta_F,
  // so the shadow residual follows the rate envelope. (A lone small angle
  // makes the residual oscillate through near-zeros and stop early.)
  for (std::uint64_t seed : {3u, 4u}) {
    const ProblemInstance inst = generate_problem(90, seed);
    ASSERT_LT(inst.theta_f, 0.15);
    for (const char* name : {"GAP_STAR", "DR", "MAP"}) {
      const Method m = Method::parse(name);
      const double expected = static_cast<double>(expected_iterations(theoretical_rate(m, inst.theta_f), 1e-8));
      const auto trace = run_fixed(preset(m, inst.theta_f), inst.problem, inst.x0);
      EXPECT_GE(trace.iteration_count, expected / 2) << name << " theta_f " << inst.theta_f;
      EXPECT_LE(trace.iteration_count, expected * 2) << name << " theta_f " << inst.theta_f;
    }
  }
}

TEST(EstimateAngle, Examples) {
  Vector x(2), y(2), z(2);
  x << 0, 1;
  y << 0, 0;
  z << 1, 0;
  EXPECT_NEAR(estimate_angle(x, y, z), std::numbers::pi / 2, 1e-15);
  z << std::cos(0.3), std::sin(0.3);
  EXPECT_NEAR(estimate_angle(x, y, z), std::numbers::pi / 2 - 0.3, 1e-14);
  z << 0, -2;  // opposite directions fold to zero
  EXPECT_NEAR(estimate_angle(x, y, z), 0.0, 1e-15);
  EXPECT_NEAR(estimate_angle(y, y, z), std::numbers::pi / 2, 0.0);
  EXPECT_THROW(estimate_angle(x, Vector::Zero(3), z), DimensionError);
}

TEST(EstimateAngle, ShadowFormAgreesWithIterateForm) {
  // x+ - y = a (P_U y - y), so using z = P_U y instead of x+ gives the same angle
  std::mt19937_64 rng(11);
  const auto pair = known_pair(rng, {0.0, 0.2, 0.7}, 3, 4, 12);
  for (double a : {0.6, 1.0, 1.7, 1.99}) {
    const Vector x = random_vector(rng, 12);
    const Vector y = relaxed_project(pair.V, a, x);
    const Vector next = relaxed_project(pair.U, a, y);
    EXPECT_NEAR(estimate_angle(x, y, next), estimate_angle(x, y, project(pair.U, y)), 1e-12);
  }
}

TEST(FitObservedRate, GeometricSequence) {
  SolverTrace t;
  for (long k = 0; k < 30; ++k) t.iterations.push_back({k, std::pow(0.5, static_cast<double>(k)), {}, {}});
  EXPECT_NEAR(fit_observed_rate(t, 0), 0.5, 1e-12);
  EXPECT_THROW(fit_observed_rate(t, 25), std::invalid_argument);
}

TEST(FitObservedRate, MatchesTheoryForOptimalAndDouglasRachford) {
  std::mt19937_64 rng(7);
  const double tf = 0.1;
  const auto pair = known_pair(rng, {0.0, tf, 0.3, 0.8, 1.4}, 5, 6, 18);
  const FeasibilityProblem prob(pair.U, pair.V);
  const Vector x0 = random_vector(rng, 18);
  StoppingRule rule{1e-12, 200000};
  {
    const auto t = run_fixed(preset(Method::parse("GAP_STAR"), tf), prob, x0, rule);
    const double rate = fit_observed_rate(t, t.iteration_count / 2);
    EXPECT_NEAR(rate, gamma_star(tf), 0.05 * gamma_star(tf));
  }
  {
    const auto t = run_fixed(preset(Method::parse("DR"), tf), prob, x0, rule);
    const double rate = fit_observed_rate(t, t.iteration_count / 2);
    EXPECT_NEAR(rate, std::cos(tf), 0.10 * std::cos(tf));
  }
}

TEST(RunAdaptive, ConvergesAndStaysConservativeInsideSum) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const double tf = 0.05 + 0.1 * trial;
    const auto pair = known_pair(rng, {0.0, tf, tf + 0.2, 1.3}, 4, 5, 16);
    const FeasibilityProblem prob(pair.U, pair.V);
    // start inside U + V
    const Vector x0 = pair.U.basis() * random_vector(rng, 4) + pair.V.basis() * random_vector(rng, 5);
    const auto t = run_adaptive(prob, x0);
    EXPECT_EQ(t.termination, Termination::Converged);
    ASSERT_TRUE(t.min_angle_estimate());
    EXPECT_GE(*t.min_angle_estimate(), tf - 1e-9);
    EXPECT_FALSE(t.iterations.front().angle_estimate);
    for (const auto& rec : t.iterations)
      if (rec.alpha_used) EXPECT_LE(*rec.alpha_used, 2.0 - 1e-6 + 1e-15);
  }
}

TEST(RunAdaptive, EstimateApproachesFriedrichsAngle) {
  std::mt19937_64 rng(9);
  const double tf = 0.12;
  const auto pair = known_pair(rng, {0.0, tf, 0.5, 0.9, 1.4}, 5, 6, 20);
  const auto t = run_adaptive(pair.U, pair.V, random_vector(rng, 20), 1.0, StoppingRule{1e-10, 200000});
  ASSERT_TRUE(t.final_angle_estimate());
  EXPECT_NEAR(*t.final_angle_estimate(), tf, 0.05 * tf);
}

TEST(RunAdaptive, RejectsBadArguments) {
  const Subspace U(Matrix::Identity(2, 1));
  EXPECT_THROW(run_adaptive(U, U, Vector::Zero(2), 2.0), std::invalid_argument);
  EXPECT_THROW(run_adaptive(U, U, Vector::Zero(3)), DimensionError);
  EXPECT_THROW(run_fixed(make_parameters(1, 1, 1), U, U, Vector::Zero(2), StoppingRule{0.0, 10}),
               std::invalid_argument);
}
