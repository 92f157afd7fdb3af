#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spge/diagnostics.hpp"
#include "spge/problems.hpp"
#include "spge/solver.hpp"

using namespace spge;

namespace {

TEST(Residual, ZeroAtToyMinimizer) {
  const ProblemInstance p = gen_toy(1.2, 0.8);
  const auto loss = p.make_loss();
  EXPECT_LE(proximal_residual(Vector::Zero(2), 1e-6, *loss, p.penalty, p.box), 1e-12);
  Vector x(2);
  x << 0.5, 0.5;
  EXPECT_GT(proximal_residual(x, 1e-6, *loss, p.penalty, p.box), 0.1);
}

TEST(LowerBound, Cases) {
  const double v = 0.4;
  Vector x(4);
  x << v, 0.0, -v, 3.0;
  EXPECT_TRUE(lower_bound_check(x, v, 1e-3).ok);
  x[0] = v / 2;
  const LowerBoundReport r = lower_bound_check(x, v, 1e-3);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0], 0);
  x[0] = 5e-4;  // within tol of zero
  EXPECT_TRUE(lower_bound_check(x, v, 1e-3).ok);
  EXPECT_THROW(lower_bound_check(x, v, 0.0), std::invalid_argument);
}

TEST(StationarityGap, GlobalMinimizerOfToy) {
  const ProblemInstance p = gen_toy(0.7, 0.4);
  const auto loss = p.make_loss();
  Vector x(2);
  x << 1.0, 0.0;
  EXPECT_LE(lifted_stationarity_gap(x, *loss, p.penalty, p.box), 1e-4);
  // both coordinates on the rising piece: a lifted stationary point that
  // is not a global minimizer
  x << 0.6, 0.4;
  EXPECT_LE(lifted_stationarity_gap(x, *loss, p.penalty, p.box), 1e-12);
  x << 0.5, 0.2;
  EXPECT_GT(lifted_stationarity_gap(x, *loss, p.penalty, p.box), 1e-2);
}

TEST(Metrics, PerturbedTruth) {
  const Index n = 16;
  Vector xt = Vector::Zero(n);
  xt.head(4) << 1.0, 2.0, 3.0, 4.0;
  const Vector out = xt + Vector::Constant(n, 0.005);
  const RecoveryMetrics m = recovery_metrics(out, xt, {});
  ASSERT_TRUE(m.rel_err && m.success_rate);
  EXPECT_DOUBLE_EQ(*m.success_rate, 1.0);
  EXPECT_NEAR(*m.rel_err, 0.005 * std::sqrt(double(n)) / xt.norm(), 1e-14);
  EXPECT_EQ(m.support_size, n);

  const RecoveryMetrics none = recovery_metrics(out, std::nullopt, {});
  EXPECT_FALSE(none.rel_err.has_value());
  EXPECT_FALSE(none.success_rate.has_value());
}

TEST(Metrics, ExactSupport) {
  Vector xt = Vector::Zero(6), out = Vector::Zero(6);
  xt.head(2) << 1.0, -2.0;
  out.head(2) << 1.0, -2.5;
  const RecoveryMetrics m = recovery_metrics(out, xt, {});
  EXPECT_DOUBLE_EQ(*m.success_rate, 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(*m.sparsity_rate, 1.0);
}

TEST(ResidualScaling, MonotoneProfiles) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const CappedL1Penalty penalty(0.8, 0.5);
  const BoxConstraint box = BoxConstraint::uniform(5, -1.0, 1.5);
  std::vector<double> alphas;
  for (int i = 1; i <= 20; ++i) alphas.push_back(0.1 * i);
  for (int rep = 0; rep < 50; ++rep) {
    Vector y(5), z(5);
    for (int i = 0; i < 5; ++i) {
      y[i] = std::clamp(g(rng), -1.0, 1.5);
      z[i] = 2.0 * g(rng);
    }
    const auto prof = residual_scaling_profile(y, z, d_select(y, penalty.v()), penalty, box, alphas);
    for (std::size_t i = 1; i < prof.size(); ++i) {
      EXPECT_LE(prof[i].p, prof[i - 1].p + 1e-10);
      EXPECT_GE(prof[i].q, prof[i - 1].q - 1e-10);
    }
  }
}

TEST(SupportContainment, DetectsNewCoordinate) {
  std::vector<Vector> it(4, Vector::Zero(3));
  it[0][0] = 1.0;
  it[1][1] = 1.0;
  it[2][0] = 1.0;
  it[3][2] = 1.0;
  const std::vector<Vector> head(it.begin(), it.begin() + 3);
  EXPECT_FALSE(first_support_violation(head, 2).has_value());
  const auto bad = first_support_violation(it, 2);
  ASSERT_TRUE(bad.has_value());
  EXPECT_EQ(*bad, 3u);
}

}  // namespace
