// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "core/environments.hpp"
#include "core/risk_measures.hpp"
#include "core/trajectory.hpp"

namespace riskbandit {

/// (1/T) sum_t rho[F](x_t) - min_x rho[F](x), from the closed-form oracles.
double pseudo_regret(const Trajectory& traj, const LossEnvironment& env, const RiskSpec& risk);

/// Prefix averages of the per-round excess risk; the last entry equals
/// pseudo_regret.
std::vector<std::pair<std::size_t, double>> regret_curve(const Trajectory& traj,
                                                         const LossEnvironment& env,
                                                         const RiskSpec& risk);

/// rho of the realized losses minus the smallest rho of a comparator's
/// losses on the same noise sequence. Each row of `comparator_losses` holds
/// one fixed point's losses.
double realized_regret_from_losses(std::span<const double> realized,
                                   const std::vector<std::vector<double>>& comparator_losses,
                                   const RiskSpec& risk);

/// Grid of fixed comparator points: `resolution` points per axis over the
/// bounding box of X, filtered to X, plus the true minimizer.
std::vector<Vector> comparator_grid(const LossEnvironment& env, const RiskSpec& risk,
                                    std::size_t resolution);

/// Realized regret against `comparators`, replaying the run's noise
/// sequence from its seed. Throws UnsupportedMetricError if the trajectory
/// has no seed to replay.
double realized_regret(const Trajectory& traj, const LossEnvironment& env, const RiskSpec& risk,
                       const std::vector<Vector>& comparators);

double realized_regret(const Trajectory& traj, const LossEnvironment& env, const RiskSpec& risk,
                       std::size_t comparator_grid_resolution);

}  // namespace riskbandit
