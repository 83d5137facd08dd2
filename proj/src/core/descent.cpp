// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/descent.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace riskbandit {
namespace {

void check_params(const DescentParams& params) {
  if (!(params.eta >= 0.0) || !std::isfinite(params.eta)) {
    throw DomainError("step size eta must be finite and >= 0");
  }
  if (!(params.delta > 0.0 && params.delta < 1.0)) {
    throw DomainError("smoothing radius delta must lie in (0, 1)");
  }
}

}  // namespace

DescentParams default_parameters(std::uint64_t horizon, std::size_t dim, const RiskSpec& risk,
                                 double diameter) {
  if (horizon < 16) throw DomainError("default descent parameters need T >= 16");
  if (dim == 0) throw DomainError("dimension must be at least 1");
  const double t = static_cast<double>(horizon);
  const double t34 = std::pow(t, 0.75);
  const double d = static_cast<double>(dim);
  if (risk.is_cvar()) {
    return {risk.alpha() * (diameter + 1.0) / ((d + 1.0) * t34), 1.0 / std::pow(t, 0.25)};
  }
  const double n = static_cast<double>(risk.levels());
  return {1.0 / (d * std::pow(n, 1.5) * t34), std::min(std::sqrt(n) / std::pow(t, 0.25), 0.5)};
}

double cvar_surrogate(double z_tilde, double loss, double alpha) {
  return z_tilde + std::max(loss - z_tilde, 0.0) / alpha;
}

double kusuoka_surrogate(std::span<const double> z_tilde, double loss,
                         std::span<const double> mu) {
  const double levels = static_cast<double>(mu.size());
  double total = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double inverse_level = levels / static_cast<double>(k + 1);
    total += mu[k] * (z_tilde[k] + std::max(loss - z_tilde[k], 0.0) * inverse_level);
  }
  return total;
}

DescentState initial_state(const FeasibleSet& set, const RiskSpec& risk,
                           const DescentParams& params) {
  check_params(params);
  DescentState state;
  state.x = set.project_shrunken(Vector::Zero(static_cast<Eigen::Index>(set.dim())), params.delta);
  state.z = Vector::Zero(static_cast<Eigen::Index>(risk.levels()));
  state.eta = params.eta;
  state.delta = params.delta;
  state.t = 0;
  return state;
}

DescentStep descent_step(const DescentState& state, const LossEnvironment& env,
                         const RiskSpec& risk, RngStream& algorithm, RngStream& nature) {
  const auto d = static_cast<Eigen::Index>(env.dim());
  const auto n = static_cast<Eigen::Index>(risk.levels());
  if (state.x.size() != d || state.z.size() != n) {
    throw DomainError("descent state does not match environment and risk dimensions");
  }

  DescentStep step;
  step.u = sphere_sample(static_cast<std::size_t>(d + n), algorithm);
  step.played = state.x + state.delta * step.u.head(d);
  step.z_tilde = state.z + state.delta * step.u.tail(n);

  const FeasibleSet& set = env.feasible_set();
  if (!set.contains(step.played)) {
    throw InvariantViolation("perturbed play left the feasible set at round " +
                             std::to_string(state.t + 1));
  }
  step.loss = env.sample_loss(step.played, nature);

  step.surrogate = risk.is_cvar()
                       ? cvar_surrogate(step.z_tilde[0], step.loss, risk.alpha())
                       : kusuoka_surrogate({step.z_tilde.data(), static_cast<std::size_t>(step.z_tilde.size())}, step.loss,
                                           risk.mu());

  const Vector g = one_point_gradient(step.surrogate, step.u, static_cast<std::size_t>(d + n),
                                      state.delta);
  step.next.eta = state.eta;
  step.next.delta = state.delta;
  step.next.t = state.t + 1;
  step.next.x = set.project_shrunken(state.x - state.eta * g.head(d), state.delta);
  step.next.z = (state.z - state.eta * g.tail(n)).cwiseMax(0.0).cwiseMin(1.0 - state.delta);
  return step;
}

Trajectory run_descent(const LossEnvironment& env, const RiskSpec& risk, std::uint64_t horizon,
                       const DescentParams& params, RngStream& algorithm, RngStream& nature) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  if (env.feasible_set().inradius_about_origin() < 1.0 - 1e-12) {
    throw DomainError("descent needs the unit ball about the origin inside the feasible set");
  }
  Trajectory traj("descent", env.to_json(), risk, env.dim(), horizon);
  DescentState state = initial_state(env.feasible_set(), risk, params);
  for (std::uint64_t t = 0; t < horizon; ++t) {
    DescentStep step = descent_step(state, env, risk, algorithm, nature);
    traj.append(step.played, step.loss);
    state = std::move(step.next);
  }
  return traj;
}

}  // namespace riskbandit
