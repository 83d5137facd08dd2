// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include "core/feasible_set.hpp"
#include "core/risk_measures.hpp"
#include "core/rng.hpp"
#include "json.hpp"

namespace riskbandit {

enum class EnvFamily {
  QuadraticUniform,  // a ||x - x*||^2 + b + xi,  xi ~ U[0, c]
  LinearBernoulli,   // b + <w, x> + xi,          xi = c w.p. p, else 0
  AbsNoise,          // g |x - x*| + b + xi,      xi ~ U[0, c], one-dimensional
};

std::string family_name(EnvFamily family);

/// A risk value together with whether it came from a closed form.
struct RiskValue {
  double value = 0.0;
  bool exact = true;
};

/// Stochastic convex loss f(x, xi) with values in [0, 1].
///
/// Noise enters additively, so the minimizer of any law-invariant risk of
/// F(x) coincides with the minimizer of the deterministic part. Parameters that
/// would let the loss leave [0, 1] on the feasible set are rejected at
/// construction; the closed-form risk oracles rely on clamping never being
/// active. Each noise draw consumes exactly one uniform variate from the
/// nature stream, which makes the xi sequence replayable from the seed alone.
class LossEnvironment {
 public:
  static LossEnvironment quadratic_uniform(FeasibleSet set, Vector x_star, double a, double b,
                                           double c);
  static LossEnvironment linear_bernoulli(FeasibleSet set, Vector w, double b, double c,
                                          double p);
  static LossEnvironment abs_noise(FeasibleSet set, double x_star, double g, double b, double c);

  /// Parses a descriptor of the form {"family": ..., "set": {...}, params...}.
  /// Throws ConfigError naming the offending field below `path`.
  static LossEnvironment from_json(const nlohmann::json& doc,
                                   const std::string& path = "environment");
  nlohmann::json to_json() const;

  EnvFamily family() const noexcept { return family_; }
  std::size_t dim() const noexcept { return set_.dim(); }
  const FeasibleSet& feasible_set() const noexcept { return set_; }
  double lipschitz_G() const noexcept { return lipschitz_; }
  double strong_convexity_beta() const noexcept { return beta_; }
  double feasible_diameter() const noexcept { return set_.diameter(); }

  /// One noise variate xi.
  double draw_noise(RngStream& nature) const;

  /// f(x, xi), clamped to [0, 1]. Throws DomainError for x outside X.
  double loss(const Vector& x, double xi) const;

  /// One draw f(x, xi) with a fresh xi from `nature`.
  double sample_loss(const Vector& x, RngStream& nature) const;

  /// The noise-free part of the loss at x.
  double deterministic_part(const Vector& x) const;

  /// Closed-form risk of F(x): deterministic part plus the risk of the noise.
  RiskValue ground_truth_risk(const Vector& x, const RiskSpec& risk) const;

  /// Risk of the noise variable xi alone.
  double noise_risk(const RiskSpec& risk) const;

  /// Minimizer of the risk over X and the minimum value.
  std::pair<Vector, double> ground_truth_minimizer(const RiskSpec& risk) const;

  std::string describe() const;

  friend bool operator==(const LossEnvironment&, const LossEnvironment&);

 private:
  LossEnvironment(EnvFamily family, FeasibleSet set) : family_(family), set_(std::move(set)) {}
  void check_range() const;
  void check_point(const Vector& x) const;

  EnvFamily family_;
  FeasibleSet set_;
  Vector anchor_;  // x* for QuadraticUniform / AbsNoise, w for LinearBernoulli
  double scale_ = 0.0;  // a or g; unused for LinearBernoulli
  double offset_ = 0.0;  // b
  double noise_ = 0.0;   // c
  double prob_ = 0.0;    // p, LinearBernoulli only
  double lipschitz_ = 0.0;
  double beta_ = 0.0;
};

/// Monte-Carlo estimate of the risk at x from `draws` fresh noise draws.
RiskValue monte_carlo_risk(const LossEnvironment& env, const Vector& x, const RiskSpec& risk,
                           std::size_t draws, std::uint64_t seed);

FeasibleSet feasible_set_from_json(const nlohmann::json& doc, const std::string& path);
nlohmann::json feasible_set_to_json(const FeasibleSet& set);

}  // namespace riskbandit
