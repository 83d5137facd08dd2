// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/feasible_set.hpp"
#include "core/risk_measures.hpp"
#include "json.hpp"

namespace riskbandit {

/// Seed coordinates of one replication. The nature stream of the run is
/// re-derivable from these, which is what realized-regret replay needs.
struct SeedInfo {
  std::uint64_t master = 0;
  std::uint64_t replication = 0;
  std::uint64_t horizon = 0;

  friend bool operator==(const SeedInfo&, const SeedInfo&) = default;
};

/// Played points and observed losses of one run, rows t = 1..length().
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::string algorithm, nlohmann::json environment, RiskSpec risk, std::size_t dim,
             std::uint64_t horizon);

  void append(const Vector& point, double loss);

  std::size_t length() const noexcept { return losses_.size(); }
  bool empty() const noexcept { return losses_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t horizon() const noexcept { return horizon_; }

  /// Row accessors use 0-based index; the CSV t column is index + 1.
  Vector point(std::size_t index) const;
  double loss(std::size_t index) const { return losses_.at(index); }
  const std::vector<double>& losses() const noexcept { return losses_; }
  const std::vector<double>& flat_points() const noexcept { return points_; }

  const std::string& algorithm() const noexcept { return algorithm_; }
  const nlohmann::json& environment() const noexcept { return environment_; }
  const RiskSpec& risk() const noexcept { return risk_; }

  const std::optional<SeedInfo>& seed() const noexcept { return seed_; }
  void set_seed(SeedInfo seed) { seed_ = seed; }

  const std::string& config_hash() const noexcept { return config_hash_; }
  void set_config_hash(std::string hash) { config_hash_ = std::move(hash); }

  /// '#'-prefixed header block, then `t,x_0,...,x_{d-1},loss`, 17 significant digits.
  void write_csv(std::ostream& out) const;
  void write_csv_file(const std::string& path) const;

  /// Throws ParseError with the 1-based line number on malformed input.
  static Trajectory read_csv(std::istream& in, const std::string& source = "<stream>");
  static Trajectory read_csv_file(const std::string& path);

 private:
  std::string algorithm_;
  nlohmann::json environment_;
  RiskSpec risk_ = RiskSpec::cvar(1.0);
  std::size_t dim_ = 0;
  std::uint64_t horizon_ = 0;
  std::optional<SeedInfo> seed_;
  std::string config_hash_;
  std::vector<double> points_;
  std::vector<double> losses_;
};

nlohmann::json risk_to_json(const RiskSpec& risk);

/// Accepts {"kind":"cvar","alpha":a} or {"kind":"kusuoka","mu":[...]}.
RiskSpec risk_from_json(const nlohmann::json& doc, const std::string& path = "risk");

}  // namespace riskbandit
