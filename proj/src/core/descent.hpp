// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "core/environments.hpp"
#include "core/feasible_set.hpp"
#include "core/risk_measures.hpp"
#include "core/rng.hpp"
#include "core/trajectory.hpp"

namespace riskbandit {

struct DescentParams {
  double eta = 0.0;
  double delta = 0.0;
};

/// Step size and smoothing radius for horizon T.
///   CVaR:    eta = alpha (D_X + 1) / ((d + 1) T^{3/4}),  delta = T^{-1/4}
///   Kusuoka: eta = 1 / (d N^{3/2} T^{3/4}),             delta = min(sqrt(N) T^{-1/4}, 1/2)
/// Throws DomainError for T < 16.
DescentParams default_parameters(std::uint64_t horizon, std::size_t dim, const RiskSpec& risk,
                                 double diameter);

/// Joint iterate over the decision x and the auxiliary thresholds z.
struct DescentState {
  Vector x;
  Vector z;
  double eta = 0.0;
  double delta = 0.0;
  std::uint64_t t = 0;
};

struct DescentStep {
  DescentState next;
  Vector played;
  double loss = 0.0;
  Vector z_tilde;
  double surrogate = 0.0;
  Vector u;  // the (d + N)-dimensional sphere direction
};

/// z + [loss - z]_+ / alpha.
double cvar_surrogate(double z_tilde, double loss, double alpha);

/// sum_n mu_n (z_n + (N / n) [loss - z_n]_+).
double kusuoka_surrogate(std::span<const double> z_tilde, double loss,
                         std::span<const double> mu);

/// Initial state: x = projection of the origin onto X_delta, z = 0.
DescentState initial_state(const FeasibleSet& set, const RiskSpec& risk,
                           const DescentParams& params);

/// One round: perturb, play, observe, update. Consumes one sphere direction
/// from `algorithm` and one noise draw from `nature`. Throws InvariantViolation
/// if the perturbed point leaves X.
DescentStep descent_step(const DescentState& state, const LossEnvironment& env,
                         const RiskSpec& risk, RngStream& algorithm, RngStream& nature);

/// T rounds from the initial state. Requires the unit ball about the origin
/// to lie inside X, which keeps every perturbed play feasible.
Trajectory run_descent(const LossEnvironment& env, const RiskSpec& risk, std::uint64_t horizon,
                       const DescentParams& params, RngStream& algorithm, RngStream& nature);

}  // namespace riskbandit
