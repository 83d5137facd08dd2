// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"

namespace riskbandit {
namespace {

constexpr double kA = 0.3;

Vector xstar() {
  Vector x(2);
  x << 0.3, -0.2;
  return x;
}

LossEnvironment quadratic_env() {
  return LossEnvironment::quadratic_uniform(FeasibleSet::ball(Vector::Zero(2), 1.0), xstar(), kA,
                                            0.05, 0.2);
}

// Plays `points` cyclically for `length` rounds on the replayable nature stream.
Trajectory play(const LossEnvironment& env, const RiskSpec& risk, const std::vector<Vector>& points,
                std::size_t length, std::uint64_t master = 9) {
  Trajectory traj("fixed", env.to_json(), risk, env.dim(), length);
  traj.set_seed(SeedInfo{master, 0, length});
  auto nature = RngStream::derive(master, 0, length, StreamPurpose::Nature);
  for (std::size_t t = 0; t < length; ++t) {
    const Vector& x = points[t % points.size()];
    traj.append(x, env.sample_loss(x, nature));
  }
  return traj;
}

// Point at squared distance excess / a from the minimizer, so its risk
// exceeds the optimum by `excess`.
Vector with_excess(double excess) {
  Vector x = xstar();
  x[0] -= std::sqrt(excess / kA);
  return x;
}

TEST(PseudoRegret, ZeroAtMinimizer) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::cvar(0.5);
  EXPECT_NEAR(pseudo_regret(play(env, risk, {xstar()}, 50), env, risk), 0.0, 1e-12);
}

TEST(PseudoRegret, SinglePlay) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::cvar(0.5);
  EXPECT_NEAR(pseudo_regret(play(env, risk, {with_excess(0.2)}, 1), env, risk), 0.2, 1e-12);
}

TEST(PseudoRegret, AlternatingPlays) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::cvar(0.25);
  const auto traj = play(env, risk, {xstar(), with_excess(0.1)}, 100);
  EXPECT_NEAR(pseudo_regret(traj, env, risk), 0.05, 1e-12);
}

TEST(PseudoRegret, EmptyTrajectoryIsDomainError) {
  const auto env = quadratic_env();
  Trajectory empty("fixed", env.to_json(), RiskSpec::cvar(0.5), 2, 10);
  EXPECT_THROW(pseudo_regret(empty, env, RiskSpec::cvar(0.5)), DomainError);
}

TEST(PseudoRegret, NonnegativeOnRandomPlays) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::kusuoka({0.2, 0.3, 0.5});
  RngStream gen(4);
  std::vector<Vector> pts;
  for (int i = 0; i < 40; ++i) {
    Vector x(2);
    x << 2.0 * gen.uniform() - 1.0, 2.0 * gen.uniform() - 1.0;
    pts.push_back(env.feasible_set().project(x));
  }
  EXPECT_GE(pseudo_regret(play(env, risk, pts, 40), env, risk), -1e-12);
}

TEST(RegretCurve, ConstantMinimizerIsZero) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::cvar(0.5);
  for (const auto& [t, r] : regret_curve(play(env, risk, {xstar()}, 20), env, risk)) {
    EXPECT_NEAR(r, 0.0, 1e-12) << "t = " << t;
  }
}

TEST(RegretCurve, LengthOne) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::cvar(0.5);
  const auto traj = play(env, risk, {with_excess(0.07)}, 1);
  const auto curve = regret_curve(traj, env, risk);
  ASSERT_EQ(curve.size(), 1u);
  EXPECT_EQ(curve[0].first, 1u);
  EXPECT_EQ(curve[0].second, pseudo_regret(traj, env, risk));
}

TEST(RegretCurve, NonincreasingExcessGivesNonincreasingCurve) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::cvar(0.5);
  std::vector<Vector> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(with_excess(0.3 / (1.0 + i)));
  const auto curve = regret_curve(play(env, risk, pts, pts.size()), env, risk);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_EQ(curve[i].first, i + 1);
    EXPECT_LE(curve[i].second, curve[i - 1].second + 1e-15);
  }
}

TEST(RealizedRegret, TwoRoundToy) {
  const std::vector<double> realized{0.2, 0.8};
  const std::vector<std::vector<double>> comparators{{0.1, 0.7}, {0.5, 0.9}};
  EXPECT_NEAR(realized_regret_from_losses(realized, comparators, RiskSpec::cvar(0.5)), 0.1, 1e-12);
}

TEST(RealizedRegret, ConstantBestPointIsZero) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::cvar(0.5);
  const auto traj = play(env, risk, {xstar()}, 500);
  EXPECT_NEAR(realized_regret(traj, env, risk, 11), 0.0, 1e-12);
}

TEST(RealizedRegret, MeanRiskIsAverageLossRegret) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::cvar(1.0);
  const auto traj = play(env, risk, {with_excess(0.1), with_excess(0.02)}, 400);
  const auto grid = comparator_grid(env, risk, 5);

  auto nature = RngStream::derive(9, 0, 400, StreamPurpose::Nature);
  std::vector<double> sums(grid.size(), 0.0);
  double realized = 0.0;
  for (std::size_t t = 0; t < 400; ++t) {
    const double xi = env.draw_noise(nature);
    realized += traj.loss(t);
    for (std::size_t k = 0; k < grid.size(); ++k) sums[k] += env.loss(grid[k], xi);
  }
  const double best = *std::min_element(sums.begin(), sums.end());
  EXPECT_NEAR(realized_regret(traj, env, risk, grid), (realized - best) / 400.0, 1e-12);
}

TEST(RealizedRegret, DeterministicEnvIsNonnegative) {
  const auto env =
      LossEnvironment::abs_noise(FeasibleSet::interval(0.0, 1.0), 0.4, 1.0, 0.1, 0.0);
  const auto risk = RiskSpec::cvar(0.5);
  Vector a(1), b(1), best(1);
  a << 0.9;
  b << 0.1;
  best << 0.4;
  const auto traj = play(env, risk, {a, b}, 60);
  EXPECT_GE(realized_regret(traj, env, risk, std::vector<Vector>{best}), 0.0);
}

TEST(RealizedRegret, MissingSeedIsUnsupported) {
  const auto env = quadratic_env();
  Trajectory traj("fixed", env.to_json(), RiskSpec::cvar(0.5), 2, 1);
  traj.append(xstar(), 0.3);
  EXPECT_THROW(realized_regret(traj, env, RiskSpec::cvar(0.5), 3), UnsupportedMetricError);
}

TEST(RealizedRegret, TamperedLossIsIntegrityError) {
  const auto env = quadratic_env();
  const auto risk = RiskSpec::cvar(0.5);
  const auto good = play(env, risk, {xstar()}, 5);
  Trajectory bad("fixed", env.to_json(), risk, 2, 5);
  bad.set_seed(*good.seed());
  for (std::size_t t = 0; t < 5; ++t) {
    bad.append(good.point(t), t == 3 ? good.loss(t) * 0.5 : good.loss(t));
  }
  EXPECT_THROW(realized_regret(bad, env, risk, 3), IntegrityError);
}

TEST(ComparatorGrid, InsideSetAndContainsMinimizer) {
  const auto env = quadratic_env();
  const auto grid = comparator_grid(env, RiskSpec::cvar(0.5), 11);
  EXPECT_EQ((grid.front() - xstar()).norm(), 0.0);
  for (const auto& x : grid) EXPECT_LE(x.norm(), 1.0 + 1e-12);
  EXPECT_GT(grid.size(), 60u);
}

TEST(Consistency, EmpiricalCvarAtFixedPoint) {
  const auto env = quadratic_env();
  Vector x(2);
  x << -0.4, 0.5;
  for (double alpha : {0.25, 0.5, 1.0}) {
    const auto risk = RiskSpec::cvar(alpha);
    const double truth = env.ground_truth_risk(x, risk).value;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto traj = play(env, risk, {x}, 10000, 1000 + seed);
      hits += std::abs(empirical_cvar(traj.losses(), alpha) - truth) <= 0.02;
    }
    EXPECT_GE(hits, 95) << "alpha " << alpha;
  }
}

}  // namespace
}  // namespace riskbandit
