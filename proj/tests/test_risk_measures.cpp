// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "core/errors.hpp"
#include "core/risk_measures.hpp"
#include "core/rng.hpp"
#include "oracles.hpp"

namespace riskbandit {
namespace {

TEST(EmpiricalCvar, AlphaOneIsTheMean) {
  const std::vector<double> s{0.2, 0.4, 0.6, 0.8};
  EXPECT_NEAR(empirical_cvar(s, 1.0), 0.5, 1e-12);
}

TEST(EmpiricalCvar, ThirdTailOfThreePoints) {
  const std::vector<double> s{0.1, 0.5, 0.9};
  EXPECT_NEAR(empirical_cvar(s, 1.0 / 3.0), 0.9, 1e-12);
  EXPECT_NEAR(testing::grid_cvar(s, 1.0 / 3.0, 1e-3), 0.9, 1e-3);
}

TEST(EmpiricalCvar, FractionalBoundaryWeight) {
  const std::vector<double> s{0.0, 1.0};
  EXPECT_NEAR(empirical_cvar(s, 0.75), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(testing::grid_cvar(s, 0.75, 1e-3), 2.0 / 3.0, 1e-3);
}

TEST(EmpiricalCvar, TopHalfAverage) {
  const std::vector<double> s{0.2, 0.4, 0.6, 0.8};
  EXPECT_NEAR(empirical_cvar(s, 0.5), 0.7, 1e-12);
  EXPECT_NEAR(testing::grid_cvar(s, 0.5), 0.7, 1e-4);
}

TEST(EmpiricalCvar, RejectsBadInput) {
  const std::vector<double> empty;
  const std::vector<double> ok{0.5};
  const std::vector<double> out_of_range{0.5, 1.5};
  EXPECT_THROW(empirical_cvar(empty, 0.5), DomainError);
  EXPECT_THROW(empirical_cvar(ok, 0.0), DomainError);
  EXPECT_THROW(empirical_cvar(ok, 1.5), DomainError);
  EXPECT_THROW(empirical_cvar(out_of_range, 0.5), DomainError);
}

TEST(EmpiricalCvar, MatchesGridOracleOnRandomSamples) {
  RngStream rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 9);
    std::vector<double> s(n);
    for (auto& v : s) v = rng.uniform();
    const double alpha = 0.05 + 0.95 * rng.uniform();
    EXPECT_NEAR(empirical_cvar(s, alpha), testing::grid_cvar(s, alpha), 1e-4);
  }
}

TEST(EmpiricalCvar, MonotoneInAlphaAndBounded) {
  RngStream rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(7);
    for (auto& v : s) v = rng.uniform();
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / 7.0;
    const double max = *std::max_element(s.begin(), s.end());
    double a1 = rng.uniform() * 0.99 + 0.01;
    double a2 = rng.uniform() * 0.99 + 0.01;
    if (a1 > a2) std::swap(a1, a2);
    EXPECT_GE(empirical_cvar(s, a1), empirical_cvar(s, a2) - 1e-12);
    EXPECT_GE(empirical_cvar(s, a2), mean - 1e-12);
    EXPECT_LE(empirical_cvar(s, a1), max + 1e-12);
    EXPECT_NEAR(empirical_cvar(s, 1.0 / 7.0), max, 1e-12);
    EXPECT_NEAR(empirical_cvar(s, 1.0), mean, 1e-12);
  }
}

TEST(EmpiricalCvar, ElementwiseMonotone) {
  RngStream rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(6);
    std::vector<double> t(6);
    for (std::size_t i = 0; i < 6; ++i) {
      s[i] = rng.uniform() * 0.5;
      t[i] = s[i] + rng.uniform() * 0.5;
    }
    const double alpha = 0.1 + 0.9 * rng.uniform();
    EXPECT_LE(empirical_cvar(s, alpha), empirical_cvar(t, alpha) + 1e-12);
  }
}

TEST(ExactCvarDiscrete, KnownValues) {
  const std::vector<double> v{0.0, 1.0};
  const std::vector<double> p{0.5, 0.5};
  EXPECT_NEAR(exact_cvar_discrete(v, p, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(exact_cvar_discrete(v, p, 1.0), 0.5, 1e-12);
  const std::vector<double> c{0.37};
  const std::vector<double> one{1.0};
  for (double a : {0.1, 0.5, 1.0}) EXPECT_NEAR(exact_cvar_discrete(c, one, a), 0.37, 1e-12);
}

TEST(ExactCvarDiscrete, FractionalAtomAndErrors) {
  const std::vector<double> v{0.2, 0.9};
  const std::vector<double> p{0.8, 0.2};
  // Upper 0.4 tail: mass 0.2 at 0.9 and 0.2 at 0.2.
  EXPECT_NEAR(exact_cvar_discrete(v, p, 0.4), 0.55, 1e-12);
  const std::vector<double> bad{0.5, 0.4};
  EXPECT_THROW(exact_cvar_discrete(v, bad, 0.5), DomainError);
}

TEST(CiSampleCount, KnownValues) {
  EXPECT_EQ(ci_sample_count(1024, 0.5, 0.25, 1.0), 577u);
  EXPECT_EQ(ci_sample_count(std::exp(1.0), 1.0, 1.0, 1.0), 1u);
  const double base = ci_sample_count_unrounded(5000, 0.3, 0.1, 1.0);
  EXPECT_NEAR(ci_sample_count_unrounded(5000, 0.3, 0.1, 2.0), 2.0 * base, 1e-9 * base);
  EXPECT_THROW(ci_sample_count(0.5, 1.0, 1.0, 1.0), DomainError);
}

TEST(KusuokaCiSampleCount, KnownValues) {
  EXPECT_EQ(kusuoka_ci_sample_count(100, 2, 0.5, 1.0), 100u);
  EXPECT_EQ(kusuoka_ci_sample_count(1000, 1, 0.3, 1.0),
            static_cast<std::uint64_t>(std::ceil(std::log(1000.0) / 0.09)));
  for (std::size_t n = 1; n < 6; ++n) {
    EXPECT_LT(kusuoka_ci_sample_count(1000, n, 0.25, 1.0),
              kusuoka_ci_sample_count(1000, n + 1, 0.25, 1.0));
    EXPECT_LT(kusuoka_ci_sample_count(1000, n, 0.25, 1.0),
              kusuoka_ci_sample_count(1000, n, 0.125, 1.0));
    const double level_n = std::ceil(std::log(std::sqrt(double(n)) * 1000.0) / (0.25 * 0.25));
    EXPECT_GE(static_cast<double>(kusuoka_ci_sample_count(1000, n, 0.25, 1.0)),
              static_cast<double>(n) * level_n);
  }
}

TEST(KusuokaEval, KnownValues) {
  const std::vector<double> s{0.2, 0.8};
  const std::vector<double> mean_only{0.0, 1.0};
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(kusuoka_eval(s, mean_only), 0.5, 1e-12);
  EXPECT_NEAR(kusuoka_eval(s, half), 0.65, 1e-12);

  const std::vector<double> five{0.3, 0.1, 0.7, 0.2, 0.6};
  std::vector<double> worst(5, 0.0);
  worst[0] = 1.0;
  EXPECT_NEAR(kusuoka_eval(five, worst), 0.7, 1e-12);
  EXPECT_NEAR(testing::grid_cvar(five, 1.0 / 5.0), 0.7, 1e-4);
}

TEST(KusuokaEval, RejectsInvalidWeights) {
  const std::vector<double> s{0.2, 0.8};
  const std::vector<double> negative{1.5, -0.5};
  const std::vector<double> short_sum{0.3, 0.3};
  EXPECT_THROW(kusuoka_eval(s, negative), DomainError);
  EXPECT_THROW(kusuoka_eval(s, short_sum), DomainError);
  EXPECT_THROW(RiskSpec::kusuoka({0.5, 0.4}), DomainError);
  EXPECT_THROW(RiskSpec::cvar(0.0), DomainError);
}

TEST(KusuokaEval, CoherenceProperties) {
  RngStream rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n_levels = 1 + static_cast<std::size_t>(rng.uniform() * 5);
    std::vector<double> mu(n_levels);
    for (auto& m : mu) m = rng.uniform();
    const double total = std::accumulate(mu.begin(), mu.end(), 0.0);
    for (auto& m : mu) m /= total;
    mu.back() = 1.0 - std::accumulate(mu.begin(), mu.end() - 1, 0.0);

    std::vector<double> s(10);
    for (auto& v : s) v = 0.5 * rng.uniform();
    const double base = kusuoka_eval(s, mu);

    const double shift = 0.4 * rng.uniform();
    std::vector<double> shifted(s);
    for (auto& v : shifted) v += shift;
    EXPECT_NEAR(kusuoka_eval(shifted, mu), base + shift, 1e-9);

    const double scale = 1.9 * rng.uniform();
    std::vector<double> scaled(s);
    for (auto& v : scaled) v *= scale;
    EXPECT_NEAR(kusuoka_eval(scaled, mu), scale * base, 1e-9);
  }
}

TEST(ConfidenceInterval, KnownValues) {
  const std::vector<double> flat{0.5, 0.5};
  const auto ci = confidence_interval(flat, RiskSpec::cvar(0.3), 0.1);
  EXPECT_NEAR(ci.lower, 0.4, 1e-12);
  EXPECT_NEAR(ci.upper, 0.6, 1e-12);

  const std::vector<double> s{0.1, 0.5, 0.9};
  const auto tail = confidence_interval(s, RiskSpec::cvar(1.0 / 3.0), 0.05);
  EXPECT_NEAR(tail.lower, 0.85, 1e-12);
  EXPECT_NEAR(tail.upper, 0.95, 1e-12);
  EXPECT_EQ(tail.sample_count, 3u);
}

TEST(ConfidenceInterval, WidthInvariantAndNoClipping) {
  RngStream rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(4);
    for (auto& v : s) v = rng.uniform();
    const double gamma = rng.uniform() + 1e-3;
    const auto ci = confidence_interval(s, RiskSpec::kusuoka({0.25, 0.25, 0.5}), gamma);
    EXPECT_NEAR(ci.upper - ci.lower, 2.0 * gamma, 1e-12);
    EXPECT_LE(ci.lower, ci.upper);
  }
  const std::vector<double> high{0.95, 0.95};
  EXPECT_GT(confidence_interval(high, RiskSpec::cvar(1.0), 0.5).upper, 1.0);
}

TEST(RiskSpec, DescribesAndCompares) {
  EXPECT_EQ(RiskSpec::cvar(0.5), RiskSpec::cvar(0.5));
  EXPECT_FALSE(RiskSpec::cvar(0.5) == RiskSpec::cvar(0.25));
  EXPECT_EQ(RiskSpec::kusuoka({0.5, 0.5}).levels(), 2u);
  EXPECT_FALSE(RiskSpec::cvar(0.5).describe().empty());
}

}  // namespace
}  // namespace riskbandit
