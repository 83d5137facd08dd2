// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/metrics.hpp"

#include <algorithm>
#include <limits>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace riskbandit {
namespace {

void require_rows(const Trajectory& traj) {
  if (traj.empty()) throw DomainError("trajectory is empty");
}

}  // namespace

double pseudo_regret(const Trajectory& traj, const LossEnvironment& env, const RiskSpec& risk) {
  const auto curve = regret_curve(traj, env, risk);
  return curve.back().second;
}

std::vector<std::pair<std::size_t, double>> regret_curve(const Trajectory& traj,
                                                         const LossEnvironment& env,
                                                         const RiskSpec& risk) {
  require_rows(traj);
  if (traj.dim() != env.dim()) {
    throw UnsupportedMetricError("trajectory dimension does not match the environment");
  }
  const double best = env.ground_truth_minimizer(risk).second;
  std::vector<std::pair<std::size_t, double>> curve;
  curve.reserve(traj.length());
  double total = 0.0;
  for (std::size_t i = 0; i < traj.length(); ++i) {
    total += env.ground_truth_risk(traj.point(i), risk).value - best;
    curve.emplace_back(i + 1, total / static_cast<double>(i + 1));
  }
  return curve;
}

double realized_regret_from_losses(std::span<const double> realized,
                                   const std::vector<std::vector<double>>& comparator_losses,
                                   const RiskSpec& risk) {
  if (realized.empty()) throw DomainError("realized loss sequence is empty");
  if (comparator_losses.empty()) throw DomainError("comparator set is empty");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : comparator_losses) {
    if (row.size() != realized.size()) {
      throw DomainError("comparator loss sequence length differs from the realized one");
    }
    best = std::min(best, empirical_risk(row, risk));
  }
  return empirical_risk(realized, risk) - best;
}

std::vector<Vector> comparator_grid(const LossEnvironment& env, const RiskSpec& risk,
                                    std::size_t resolution) {
  if (resolution < 1) throw DomainError("comparator grid resolution must be at least 1");
  const FeasibleSet& set = env.feasible_set();
  const auto d = static_cast<Eigen::Index>(set.dim());
  std::vector<Vector> grid;
  grid.push_back(env.ground_truth_minimizer(risk).first);
  if (resolution == 1) return grid;

  std::vector<std::size_t> index(static_cast<std::size_t>(d), 0);
  const double steps = static_cast<double>(resolution - 1);
  while (true) {
    Vector x(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double frac = static_cast<double>(index[static_cast<std::size_t>(j)]) / steps;
      x[j] = set.lo()[j] + frac * (set.hi()[j] - set.lo()[j]);
    }
    if (set.contains(x)) grid.push_back(std::move(x));
    std::size_t k = 0;
    while (k < index.size() && ++index[k] == resolution) index[k++] = 0;
    if (k == index.size()) break;
  }
  return grid;
}

double realized_regret(const Trajectory& traj, const LossEnvironment& env, const RiskSpec& risk,
                       const std::vector<Vector>& comparators) {
  require_rows(traj);
  if (!traj.seed()) {
    throw UnsupportedMetricError("trajectory carries no seed; its noise sequence cannot be replayed");
  }
  const SeedInfo& seed = *traj.seed();
  RngStream nature =
      RngStream::derive(seed.master, seed.replication, seed.horizon, StreamPurpose::Nature);

  std::vector<std::vector<double>> comparator_losses(comparators.size());
  for (auto& row : comparator_losses) row.reserve(traj.length());
  for (std::size_t t = 0; t < traj.length(); ++t) {
    const double xi = env.draw_noise(nature);
    if (env.loss(traj.point(t), xi) != traj.loss(t)) {
      throw IntegrityError("replayed noise does not reproduce the recorded loss at t = " +
                           std::to_string(t + 1));
    }
    for (std::size_t k = 0; k < comparators.size(); ++k) {
      comparator_losses[k].push_back(env.loss(comparators[k], xi));
    }
  }
  return realized_regret_from_losses(traj.losses(), comparator_losses, risk);
}

double realized_regret(const Trajectory& traj, const LossEnvironment& env, const RiskSpec& risk,
                       std::size_t comparator_grid_resolution) {
  return realized_regret(traj, env, risk, comparator_grid(env, risk, comparator_grid_resolution));
}

}  // namespace riskbandit
