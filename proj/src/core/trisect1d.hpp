// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/environments.hpp"
#include "core/risk_measures.hpp"
#include "core/rng.hpp"
#include "core/trajectory.hpp"

namespace riskbandit {

enum class TrisectCase { Case1, Case2, Case3 };

struct TrisectDecision {
  TrisectCase kind = TrisectCase::Case3;
  bool discard_left = false;  // meaningful for Case1 / Case2 only
};

/// Working interval [l, r] of the current epoch and the round inside it.
struct EpochState1D {
  double l = 0.0;
  double r = 1.0;
  std::uint64_t epoch = 1;
  std::uint32_t round = 1;

  double width() const noexcept { return r - l; }
  double gamma() const noexcept;  // 2^{-round}
  double x_left() const noexcept { return l + 0.25 * width(); }
  double x_center() const noexcept { return l + 0.5 * width(); }
  double x_right() const noexcept { return l + 0.75 * width(); }
};

/// Case 1: max(LB_l, LB_r) >= min(UB_l, UB_r) + gamma.
/// Case 2: max(LB_l, LB_r) >= UB_c + gamma.
/// In both, LB_l >= LB_r discards [l, x_l); otherwise (x_r, r] goes.
TrisectDecision classify_round(const ConfidenceInterval& left, const ConfidenceInterval& center,
                               const ConfidenceInterval& right, double gamma);

/// Case 1/2 moves to the next epoch with round 1; Case 3 advances the round.
EpochState1D apply_case(const EpochState1D& state, const TrisectDecision& decision);

struct TrisectEvent {
  std::uint64_t epoch = 0;
  std::uint32_t round = 0;
  TrisectCase kind = TrisectCase::Case3;
  bool discard_left = false;
  double l = 0.0;  // interval after the decision
  double r = 0.0;
  double gamma = 0.0;
  std::uint64_t plays_used = 0;
};

std::string case_name(TrisectCase kind);

/// Runs epochs of trisection until T plays are spent, truncating the last
/// round. Each probe is played in one contiguous block with fresh samples.
/// `events`, when given, receives one entry per completed round.
Trajectory run_trisect(const LossEnvironment& env, const RiskSpec& risk, std::uint64_t horizon,
                       double kappa, RngStream& nature, std::vector<TrisectEvent>* events = nullptr);

}  // namespace riskbandit
