#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tsvar/solver.hpp"

namespace tsvar {
namespace {

using testing::example1;
using testing::to_vector;

double sup_error_to_identity(const GridFunction& y) {
  double e = 0.0;
  for (Index i = 0; i < y.scale().size(); ++i) e = std::max(e, std::abs(y(i) - y.scale()[i]));
  return e;
}

TEST(Solve, ExampleOneThreePoints) {
  const TimeScale ts = make_timescale({0, 1, 2});
  const SolveResult r = solve(example1(ts));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(sup_error_to_identity(r.y), 1e-8);
  EXPECT_NEAR(r.j_value, 4.0, 1e-12);
  EXPECT_TRUE(r.el1.passes());
  EXPECT_TRUE(r.el2.passes());
}

TEST(Solve, ExampleOneMixedGraininessFromOffsetStart) {
  const TimeScale ts = make_timescale({0, 0.5, 1, 3});
  const VariationalProblem p = example1(ts);
  const SolveResult r = solve(p, {}, GridFunction(ts, {0, 1.7, -0.4, 3}));
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.iterations, 0);
  EXPECT_LE(sup_error_to_identity(r.y), 1e-8);
  EXPECT_NEAR(r.j_value, 9.0, 1e-8 * 9.0);
}

// The line y(t) = t zeroes the gradient: both derivatives are 1 and ∂₂L = 0.
TEST(Solve, IdentityIsStationaryForExampleOne) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const TimeScale ts = random_timescale(rng, 3, 30, 0.05, 2.0);
    const VariationalProblem p = example1(ts);
    const GridFunction id = sample(ts, [](double t) { return t; });
    EXPECT_LE(sup_norm(first_variation_gradient(p, id)), 1e-10);
  }
}

TEST(Solve, PureNablaDirichletMinimizerIsTheLine) {
  const TimeScale ts = make_timescale({0, 0.2, 0.9, 1.4, 2});
  const VariationalProblem p(ts, catalog("const(1/(b-a))", CatalogContext{0, 2}), catalog("dy_squared"), 1.0, -3.0);
  const SolveResult r = solve(p, {}, GridFunction(ts, {1, 0, 0, 0, -3}));
  EXPECT_TRUE(r.converged);
  // Discrete Dirichlet energy: the minimizer is the chord.
  const GridFunction chord = p.chord();
  for (Index i = 0; i < ts.size(); ++i) EXPECT_NEAR(r.y(i), chord(i), 1e-8);
  EXPECT_NEAR(r.j_value, 16.0 / 2.0, 1e-8);
}

TEST(Solve, DescentAndDeterminism) {
  const TimeScale ts = make_timescale({0, 0.4, 1.1, 1.5, 2.6, 3});
  const VariationalProblem p(ts, catalog("y_squared_plus_dy_squared"), catalog("dy_squared"), 0.5, 2.0);
  const GridFunction y0(ts, {0.5, 3, -2, 1, 0, 2});
  const SolveResult a = solve(p, {}, y0);
  const SolveResult b = solve(p, {}, y0);
  EXPECT_TRUE(a.converged);
  EXPECT_LE(a.gradient_norm, SolverConfig{}.gradient_tolerance);
  ASSERT_EQ(a.j_history.size(), static_cast<std::size_t>(a.iterations) + 1);
  for (std::size_t k = 1; k < a.j_history.size(); ++k) {
    EXPECT_LE(a.j_history[k], a.j_history[k - 1] + kRoundingSlack * std::abs(a.j_history[k - 1]));
  }
  EXPECT_LT(a.j_history.back(), a.j_history.front());
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(to_vector(a.y.values()), to_vector(b.y.values()));
  EXPECT_EQ(a.j_value, b.j_value);
  EXPECT_TRUE(a.el1.passes());
  EXPECT_TRUE(a.el2.passes());
  EXPECT_NEAR(a.el1.constant_c, a.el2.constant_c, 1e-9 * (1 + std::abs(a.el1.constant_c)));
}

TEST(Solve, IterationLimitIsNotAnError) {
  const TimeScale ts = make_timescale({0, 0.4, 1.1, 1.5, 2.6, 3});
  const VariationalProblem p(ts, catalog("y_squared_plus_dy_squared"), catalog("dy_squared"), 0.5, 2.0);
  SolverConfig cfg;
  cfg.max_iterations = 1;
  const SolveResult r = solve(p, cfg, GridFunction(ts, {0.5, 3, -2, 1, 0, 2}));
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
}

TEST(Solve, RejectsBadInputs) {
  const TimeScale ts = make_timescale({0, 1, 2});
  const VariationalProblem p = example1(ts);
  EXPECT_THROW(solve(p, {}, GridFunction(ts, {1, 1, 2})), ValidationError);
  SolverConfig bad;
  bad.backtrack_factor = 1.5;
  EXPECT_THROW(solve(p, bad), ValidationError);
  bad = {};
  bad.armijo_c = 0;
  EXPECT_THROW(solve(p, bad), ValidationError);
}

TEST(Solve, LineSearchShrinksPastDomainErrors) {
  // log(y) is undefined for y <= 0; large steps overshoot into that region.
  const TimeScale ts = make_timescale({0, 1, 2, 3});
  const VariationalProblem p(ts, parse_lagrangian("dy^2 - log(y)"), catalog("const(1)"), 1.0, 1.0);
  SolverConfig cfg;
  cfg.initial_step = 100.0;
  const SolveResult r = solve(p, cfg);
  EXPECT_TRUE(r.converged);
  for (double v : r.y.values()) EXPECT_GT(v, 0.0);
}

TEST(Solve, MaximizeFlipsTheObjective) {
  const TimeScale ts = make_timescale({0, 1, 2, 3});
  const VariationalProblem p(ts, parse_lagrangian("-dy^2"), catalog("dy_squared"), 0, 3);
  SolverConfig cfg;
  cfg.maximize = true;
  const SolveResult r = solve(p, cfg, GridFunction(ts, {0, 1.5, 1.5, 3}));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(sup_error_to_identity(r.y), 1e-8);
  EXPECT_NEAR(r.j_value, -9.0, 1e-8);
  for (std::size_t k = 1; k < r.j_history.size(); ++k) {
    EXPECT_GE(r.j_history[k], r.j_history[k - 1] - kRoundingSlack * std::abs(r.j_history[k - 1]));
  }
}

TEST(Oracle, ExampleOneThreePoints) {
  const TimeScale ts = make_timescale({0, 1, 2});
  const OracleResult o = brute_force_oracle(example1(ts), -2, 4, 601);
  EXPECT_NEAR(o.y(1), 1.0, 0.01);
  EXPECT_NEAR(o.j_value, testing::example1_three_point_j(o.y(1)), 1e-12);
}

TEST(Oracle, ExampleOneFourPoints) {
  const TimeScale ts = make_timescale({0, 1, 2, 3});
  const OracleResult o = brute_force_oracle(example1(ts), -2, 5, 141);
  EXPECT_NEAR(o.y(1), 1.0, 0.02);
  EXPECT_NEAR(o.y(2), 2.0, 0.02);
}

TEST(Oracle, FlatObjectiveReturnsFirstPoint) {
  const TimeScale ts = make_timescale({0, 1, 2});
  const CatalogContext ctx{0, 2};
  const VariationalProblem p(ts, catalog("const(1/(b-a))", ctx), catalog("const(1/(b-a))", ctx), 0, 2);
  const OracleResult o = brute_force_oracle(p, -1, 1, 11);
  EXPECT_EQ(o.y(1), -1.0);
  EXPECT_DOUBLE_EQ(o.j_value, 1.0);
}

TEST(Oracle, RejectsLargeProblems) {
  EXPECT_THROW(brute_force_oracle(example1(make_timescale({0, 1, 2, 3, 4, 5})), -1, 1, 11), ValidationError);
  EXPECT_THROW(brute_force_oracle(example1(make_timescale({0, 1, 2})), -1, 1, 10), ValidationError);
}

TEST(Audit, ExampleOneIsLocalMin) {
  const TimeScale ts = make_timescale({0, 1, 2});
  const VariationalProblem p = example1(ts);
  const SolveResult r = solve(p);
  const AuditRecord a = perturbation_audit(p, r, 0.1, 1000, 1);
  EXPECT_EQ(a.fraction_below, 0.0);
  EXPECT_EQ(a.verdict, AuditVerdict::local_min);
  EXPECT_GE(a.j_min, a.j_hat);
}

TEST(Audit, FlatProblemIsIndeterminate) {
  const TimeScale ts = make_timescale({0, 1, 2, 4});
  const VariationalProblem p(ts, catalog("const(2)"), catalog("const(3)"), 0, 1);
  const SolveResult r = solve(p);
  ASSERT_TRUE(r.converged);
  const AuditRecord a = perturbation_audit(p, r, 0.5, 200, 2);
  EXPECT_EQ(a.j_min, a.j_max);
  EXPECT_EQ(a.verdict, AuditVerdict::indeterminate);
}

TEST(Audit, SignFlippedExampleIsLocalMax) {
  const TimeScale ts = make_timescale({0, 1, 2});
  const VariationalProblem p(ts, parse_lagrangian("-dy^2"), catalog("dy_squared"), 0, 2);
  SolverConfig cfg;
  cfg.maximize = true;
  const SolveResult r = solve(p, cfg);
  ASSERT_TRUE(r.converged);
  const AuditRecord a = perturbation_audit(p, r, 0.1, 1000, 1);
  EXPECT_EQ(a.verdict, AuditVerdict::local_max);
  EXPECT_EQ(a.fraction_above, 0.0);
}

TEST(Audit, RequiresConvergedResult) {
  const TimeScale ts = make_timescale({0, 0.4, 1.1, 1.5, 2.6, 3});
  const VariationalProblem p(ts, catalog("y_squared_plus_dy_squared"), catalog("dy_squared"), 0.5, 2.0);
  SolverConfig cfg;
  cfg.max_iterations = 0;
  const SolveResult r = solve(p, cfg, GridFunction(ts, {0.5, 3, -2, 1, 0, 2}));
  EXPECT_THROW(perturbation_audit(p, r, 0.1, 10, 0), ValidationError);
}

TEST(Solve, ContinuumDirichletOnFineGrid) {
  for (std::size_t n : {11u, 51u, 101u}) {
    const TimeScale ts = uniform_scale(0, 1, n);
    const VariationalProblem p(ts, catalog("const(1)"), catalog("dy_squared"), 0, 1);
    const SolveResult r = solve(p);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(sup_error_to_identity(r.y), 1e-8);
    EXPECT_NEAR(r.j_value, 1.0, 1e-8);
  }
}

}  // namespace
}  // namespace tsvar
