// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/environments.hpp"
#include "core/risk_measures.hpp"
#include "core/trajectory.hpp"
#include "json.hpp"

namespace riskbandit {

struct AlgorithmConfig {
  std::string name;  // "descent", "trisect1d" or "ellipsoid"
  std::optional<double> eta;
  std::optional<double> delta;
  double c1 = 64.0;
  double c2 = 1.0 / 32.0;
  double kappa = 1.0;
  std::optional<double> delta_coefficient;
};

/// One experiment: an algorithm on an environment, replicated over seeds at
/// each horizon. Parsing validates everything and reports the dotted path of
/// the first bad field through ConfigError.
struct ExperimentConfig {
  AlgorithmConfig algorithm;
  nlohmann::json environment;  // canonical descriptor
  RiskSpec risk = RiskSpec::cvar(1.0);
  std::vector<std::uint64_t> horizons;
  std::uint64_t master_seed = 0;
  std::uint64_t replications = 1;
  std::string output_dir = ".";
  std::size_t comparator_grid_resolution = 11;
  bool event_log = false;

  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;

  /// 16 hex digits of FNV-1a over the canonical document without output_dir.
  std::string hash() const;

  LossEnvironment make_environment() const;
};

/// One replication at horizon T. Seeds derive from (master, rep, T).
/// `events`, when given, receives the algorithm's event log as JSON objects.
Trajectory run_single(const ExperimentConfig& config, std::uint64_t horizon,
                      std::uint64_t replication, std::vector<nlohmann::json>* events = nullptr);

/// Metrics document for one trajectory.
nlohmann::json compute_metrics(const Trajectory& traj, const LossEnvironment& env,
                               std::size_t comparator_grid_resolution);

/// Writes traj_T{T}_rep{r}.csv and metrics_T{T}_rep{r}.json for every pair,
/// then summary.json. Replications run on up to `jobs` threads. Returns the
/// summary document.
nlohmann::json run_experiment(const ExperimentConfig& config, std::size_t jobs);

/// Recomputes metrics from trajectory files. With a config, each header must
/// match its environment, risk and hash, or IntegrityError is thrown.
nlohmann::json evaluate_files(const std::vector<std::string>& paths,
                              const std::optional<ExperimentConfig>& config,
                              std::size_t comparator_grid_resolution = 11);

/// Aggregates metrics documents: per-T mean/std of both regrets and the
/// least-squares slope of log mean pseudo-regret against log T.
nlohmann::json summarize_metrics(const std::vector<nlohmann::json>& metrics);

/// Reads every metrics_*.json in `dir` and summarizes them.
nlohmann::json summarize_directory(const std::string& dir);

/// Least-squares slope of log y against log x; nullopt if fewer than two
/// distinct points or any value is nonpositive.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Worker count from RISKBANDIT_JOBS, else 1.
std::size_t default_jobs();

}  // namespace riskbandit
