// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/trisect1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace riskbandit {

double EpochState1D::gamma() const noexcept { return std::ldexp(1.0, -static_cast<int>(round)); }

TrisectDecision classify_round(const ConfidenceInterval& left, const ConfidenceInterval& center,
                               const ConfidenceInterval& right, double gamma) {
  const double top_lb = std::max(left.lower, right.lower);
  const bool discard_left = left.lower >= right.lower;
  if (top_lb >= std::min(left.upper, right.upper) + gamma) {
    return {TrisectCase::Case1, discard_left};
  }
  if (top_lb >= center.upper + gamma) return {TrisectCase::Case2, discard_left};
  return {TrisectCase::Case3, false};
}

EpochState1D apply_case(const EpochState1D& state, const TrisectDecision& decision) {
  EpochState1D next = state;
  if (decision.kind == TrisectCase::Case3) {
    ++next.round;
    return next;
  }
  if (decision.discard_left) {
    next.l = state.x_left();
  } else {
    next.r = state.x_right();
  }
  ++next.epoch;
  next.round = 1;
  return next;
}

std::string case_name(TrisectCase kind) {
  switch (kind) {
    case TrisectCase::Case1:
      return "case1";
    case TrisectCase::Case2:
      return "case2";
    case TrisectCase::Case3:
      return "case3";
  }
  return "unknown";
}

Trajectory run_trisect(const LossEnvironment& env, const RiskSpec& risk, std::uint64_t horizon,
                       double kappa, RngStream& nature, std::vector<TrisectEvent>* events) {
  if (env.dim() != 1) throw DomainError("trisection needs a one-dimensional environment");
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  const FeasibleSet& set = env.feasible_set();
  const double t_real = static_cast<double>(horizon);

  Trajectory traj("trisect1d", env.to_json(), risk, 1, horizon);
  EpochState1D state;
  state.l = set.lo()[0];
  state.r = set.hi()[0];

  std::vector<double> block;
  while (traj.length() < horizon) {
    const double gamma = state.gamma();
    const std::uint64_t per_probe = risk_ci_sample_count(t_real, risk, gamma, kappa);
    const std::array<double, 3> probes{state.x_left(), state.x_center(), state.x_right()};
    std::array<ConfidenceInterval, 3> cis;
    bool truncated = false;

    for (std::size_t k = 0; k < probes.size() && !truncated; ++k) {
      const Vector x = Vector::Constant(1, probes[k]);
      block.clear();
      for (std::uint64_t s = 0; s < per_probe; ++s) {
        if (traj.length() >= horizon) {
          truncated = true;
          break;
        }
        const double loss = env.sample_loss(x, nature);
        traj.append(x, loss);
        block.push_back(loss);
      }
      if (!truncated) cis[k] = confidence_interval(block, risk, gamma);
    }
    if (truncated) break;

    // A completed round spends at most T plays per probe.
    if (risk.is_cvar()) {
      const double floor = 1.0 / std::sqrt(risk.alpha() * risk.alpha() * t_real /
                                           (kappa * std::log(t_real)));
      if (horizon > 1 && gamma < floor * (1.0 - 1e-12)) {
        throw InvariantViolation("trisection round completed below the gamma floor");
      }
    }

    const TrisectDecision decision = classify_round(cis[0], cis[1], cis[2], gamma);
    const EpochState1D next = apply_case(state, decision);
    if (decision.kind != TrisectCase::Case3) {
      const double slack =
          8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(state.l), std::abs(state.r));
      if (std::abs(next.width() - 0.75 * state.width()) > slack) {
        throw InvariantViolation("epoch transition did not shrink the interval by 3/4");
      }
    }
    if (events) {
      events->push_back(TrisectEvent{state.epoch, state.round, decision.kind,
                                     decision.discard_left, next.l, next.r, gamma,
                                     traj.length()});
    }
    state = next;
  }
  return traj;
}

}  // namespace riskbandit
