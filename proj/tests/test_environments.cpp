// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <vector>

#include "core/environments.hpp"
#include "core/errors.hpp"
#include "core/risk_measures.hpp"
#include "core/rng.hpp"

namespace riskbandit {
namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec1(double a) { return Vector::Constant(1, a); }

LossEnvironment quad() {
  return LossEnvironment::quadratic_uniform(FeasibleSet::ball(Vector::Zero(2), 1.0),
                                            vec2(0.3, -0.2), 0.3, 0.1, 0.2);
}

LossEnvironment bern() {
  return LossEnvironment::linear_bernoulli(FeasibleSet::box(vec2(-1, -1), vec2(1, 1)),
                                           vec2(0.2, -0.1), 0.35, 0.3, 0.25);
}

LossEnvironment absn() {
  return LossEnvironment::abs_noise(FeasibleSet::interval(0.0, 1.0), 0.4, 1.0, 0.05, 0.3);
}

Vector random_in(const FeasibleSet& set, RngStream& rng) {
  Vector x(static_cast<Eigen::Index>(set.dim()));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = 4.0 * rng.uniform() - 2.0;
  return set.project(x);
}

TEST(SampleLoss, QuadraticAtMinimizerStaysInNoiseBand) {
  const auto env = quad();
  RngStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double f = env.sample_loss(vec2(0.3, -0.2), rng);
    EXPECT_GE(f, 0.1);
    EXPECT_LE(f, 0.3);
  }
}

TEST(SampleLoss, SameSeedSameSequence) {
  const auto env = bern();
  RngStream a(42);
  RngStream b(42);
  RngStream c(43);
  bool differs = false;
  for (int i = 0; i < 200; ++i) {
    const Vector x = vec2(0.1 * (i % 7), -0.05 * (i % 5));
    const double fa = env.sample_loss(x, a);
    EXPECT_EQ(fa, env.sample_loss(x, b));
    differs = differs || fa != env.sample_loss(x, c);
  }
  EXPECT_TRUE(differs);
}

TEST(SampleLoss, AbsNoiseWithoutNoise) {
  const auto env = LossEnvironment::abs_noise(FeasibleSet::interval(0.0, 1.0), 0.5, 1.0, 0.0, 0.0);
  RngStream rng(2);
  EXPECT_NEAR(env.sample_loss(vec1(0.6), rng), 0.1, 1e-12);
}

TEST(SampleLoss, RejectsPointsOutsideTheSet) {
  const auto env = quad();
  RngStream rng(3);
  EXPECT_THROW(env.sample_loss(vec2(2.0, 0.0), rng), DomainError);
}

TEST(SampleLoss, RangeAndMidpointConvexity) {
  RngStream rng(4);
  for (const auto& env : {quad(), bern(), absn()}) {
    const auto& set = env.feasible_set();
    for (int i = 0; i < 100000; ++i) {
      const Vector x = random_in(set, rng);
      const double f = env.sample_loss(x, rng);
      ASSERT_GE(f, 0.0);
      ASSERT_LE(f, 1.0);
    }
    for (int i = 0; i < 1000; ++i) {
      const Vector x = random_in(set, rng);
      const Vector y = random_in(set, rng);
      const double xi = env.draw_noise(rng);
      EXPECT_LE(env.loss(0.5 * (x + y), xi), 0.5 * (env.loss(x, xi) + env.loss(y, xi)) + 1e-12);
    }
  }
}

TEST(GroundTruth, QuadraticCvarClosedForm) {
  // a |x - x*|^2 + b = 0.3 with noise U[0, 0.2] at alpha 0.5.
  const auto env = LossEnvironment::quadratic_uniform(FeasibleSet::ball(Vector::Zero(2), 1.0),
                                                      vec2(0.0, 0.0), 0.2, 0.1, 0.2);
  const RiskValue r = env.ground_truth_risk(vec2(1.0, 0.0), RiskSpec::cvar(0.5));
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.value, 0.45, 1e-12);
}

TEST(GroundTruth, AlphaOneIsTheMean) {
  RngStream rng(5);
  for (const auto& env : {quad(), bern(), absn()}) {
    const Vector x = random_in(env.feasible_set(), rng);
    const double mean = env.deterministic_part(x) + env.noise_risk(RiskSpec::cvar(1.0));
    EXPECT_NEAR(env.ground_truth_risk(x, RiskSpec::cvar(1.0)).value, mean, 1e-12);
  }
  EXPECT_NEAR(bern().noise_risk(RiskSpec::cvar(1.0)), 0.3 * 0.25, 1e-12);
  EXPECT_NEAR(quad().noise_risk(RiskSpec::cvar(1.0)), 0.1, 1e-12);
}

TEST(GroundTruth, DeterministicEnvIgnoresAlpha) {
  const auto env = LossEnvironment::abs_noise(FeasibleSet::interval(0.0, 1.0), 0.5, 1.0, 0.1, 0.0);
  for (double a : {0.1, 0.5, 1.0}) {
    EXPECT_NEAR(env.ground_truth_risk(vec1(0.8), RiskSpec::cvar(a)).value, 0.4, 1e-12);
  }
}

TEST(GroundTruth, BernoulliUsesDiscreteTail) {
  const auto env = bern();
  // Noise is 0.3 with probability 0.25: the upper 0.2 tail sits on the atom.
  EXPECT_NEAR(env.noise_risk(RiskSpec::cvar(0.2)), 0.3, 1e-12);
  EXPECT_NEAR(env.noise_risk(RiskSpec::cvar(0.5)), 0.15, 1e-12);
}

TEST(GroundTruth, KusuokaIsTheMixtureOfLevels) {
  const auto env = quad();
  const auto mix = RiskSpec::kusuoka({0.2, 0.3, 0.5});
  const double expected = 0.2 * env.noise_risk(RiskSpec::cvar(1.0 / 3.0)) +
                          0.3 * env.noise_risk(RiskSpec::cvar(2.0 / 3.0)) +
                          0.5 * env.noise_risk(RiskSpec::cvar(1.0));
  EXPECT_NEAR(env.noise_risk(mix), expected, 1e-12);
}

TEST(GroundTruth, MonteCarloAgreement) {
  RngStream rng(6);
  for (const auto& env : {quad(), bern(), absn()}) {
    for (double alpha : {0.25, 0.5, 1.0}) {
      const Vector x = random_in(env.feasible_set(), rng);
      const RiskSpec risk = RiskSpec::cvar(alpha);
      const RiskValue mc = monte_carlo_risk(env, x, risk, 100000, 77);
      EXPECT_FALSE(mc.exact);
      EXPECT_NEAR(mc.value, env.ground_truth_risk(x, risk).value, 0.01);
    }
  }
}

TEST(GroundTruthMinimizer, QuadraticAndAbs) {
  const auto env = quad();
  const auto [x, value] = env.ground_truth_minimizer(RiskSpec::cvar(0.5));
  EXPECT_TRUE(x.isApprox(vec2(0.3, -0.2)));
  EXPECT_NEAR(value, 0.1 + 0.2 * 0.75, 1e-12);

  const auto [xa, va] = absn().ground_truth_minimizer(RiskSpec::cvar(0.25));
  EXPECT_NEAR(xa[0], 0.4, 1e-15);
  EXPECT_NEAR(va, 0.05 + 0.3 * (1.0 - 0.125), 1e-12);
}

TEST(GroundTruthMinimizer, IndependentOfAlpha) {
  for (const auto& env : {quad(), bern(), absn()}) {
    const Vector ref = env.ground_truth_minimizer(RiskSpec::cvar(1.0)).first;
    for (double a : {0.1, 0.3, 0.7}) {
      EXPECT_EQ(env.ground_truth_minimizer(RiskSpec::cvar(a)).first, ref);
    }
    RngStream rng(9);
    const double best = env.ground_truth_minimizer(RiskSpec::cvar(0.3)).second;
    for (int i = 0; i < 500; ++i) {
      const Vector x = random_in(env.feasible_set(), rng);
      EXPECT_GE(env.ground_truth_risk(x, RiskSpec::cvar(0.3)).value, best - 1e-12);
    }
  }
}

TEST(Construction, RejectsParametersThatLeaveTheUnitInterval) {
  EXPECT_THROW(LossEnvironment::quadratic_uniform(FeasibleSet::ball(Vector::Zero(2), 1.0),
                                                  vec2(0.0, 0.0), 0.9, 0.1, 0.2),
               DomainError);
  EXPECT_THROW(LossEnvironment::linear_bernoulli(FeasibleSet::box(vec2(-1, -1), vec2(1, 1)),
                                                 vec2(0.2, 0.2), 0.1, 0.1, 0.5),
               DomainError);
  EXPECT_THROW(LossEnvironment::abs_noise(FeasibleSet::interval(0.0, 1.0), 1.5, 0.5, 0.0, 0.1),
               DomainError);
  EXPECT_THROW(LossEnvironment::abs_noise(FeasibleSet::ball(Vector::Zero(2), 1.0), 0.0, 0.5, 0.0,
                                          0.1),
               DomainError);
}

TEST(Descriptor, RoundTripsThroughJson) {
  for (const auto& env : {quad(), bern(), absn()}) {
    const auto doc = env.to_json();
    const auto back = LossEnvironment::from_json(doc);
    EXPECT_TRUE(back == env) << doc.dump();
    EXPECT_EQ(back.to_json(), doc);
  }
}

TEST(Descriptor, ErrorsNameTheField) {
  auto doc = quad().to_json();
  doc["a"] = "steep";
  try {
    LossEnvironment::from_json(doc);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "environment.a");
  }
  doc = quad().to_json();
  doc["family"] = "cubic";
  EXPECT_THROW(LossEnvironment::from_json(doc), ConfigError);
  doc = quad().to_json();
  doc["a"] = 5.0;
  EXPECT_THROW(LossEnvironment::from_json(doc), ConfigError);
}

TEST(Descriptor, AbsNoiseDefaults) {
  const auto env = LossEnvironment::from_json(
      nlohmann::json::parse(R"({"family":"abs_noise","x_star":[0.5],"g":1.0,"c":0.2})"));
  EXPECT_EQ(env.feasible_set(), FeasibleSet::interval(0.0, 1.0));
  EXPECT_NEAR(env.deterministic_part(vec1(0.5)), 0.0, 1e-15);
}

TEST(Constants, LipschitzAndCurvature) {
  const auto env = quad();
  EXPECT_NEAR(env.strong_convexity_beta(), 0.6, 1e-12);
  EXPECT_NEAR(env.lipschitz_G(), 2.0 * 0.3 * (1.0 + std::sqrt(0.13)), 1e-12);
  EXPECT_NEAR(absn().lipschitz_G(), 1.0, 1e-12);
  EXPECT_NEAR(bern().lipschitz_G(), std::sqrt(0.05), 1e-12);
  EXPECT_NEAR(env.feasible_diameter(), 2.0, 1e-12);
}

TEST(Streams, ReplicationsAreDistinct) {
  auto a = RngStream::derive(1, 0, 1024, StreamPurpose::Nature);
  auto b = RngStream::derive(1, 1, 1024, StreamPurpose::Nature);
  auto c = RngStream::derive(1, 0, 1024, StreamPurpose::Algorithm);
  auto d = RngStream::derive(1, 0, 2048, StreamPurpose::Nature);
  int same_ab = 0;
  int same_ac = 0;
  int same_ad = 0;
  double corr = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double ua = a.uniform();
    const double ub = b.uniform();
    same_ab += ua == ub;
    same_ac += ua == c.uniform();
    same_ad += ua == d.uniform();
    corr += (ua - 0.5) * (ub - 0.5);
  }
  EXPECT_EQ(same_ab + same_ac + same_ad, 0);
  EXPECT_NEAR(corr / 10000.0 * 12.0, 0.0, 0.05);
}

}  // namespace
}  // namespace riskbandit
