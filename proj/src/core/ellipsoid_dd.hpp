// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/cutting_geometry.hpp"
#include "core/environments.hpp"
#include "core/errors.hpp"
#include "core/risk_measures.hpp"
#include "core/rng.hpp"
#include "core/trajectory.hpp"

namespace riskbandit {

/// Raised when the budget runs out before the first simplex round completes.
/// Carries whatever was played.
class DegenerateRunError : public Error {
 public:
  DegenerateRunError(const std::string& what, Trajectory partial)
      : Error(ErrorKind::DegenerateRun, what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

struct EllipsoidParams {
  double c1 = 64.0;
  double c2 = 1.0 / 32.0;
  double kappa = 1.0;
  /// Replaces 6 c1 d^4 / c2^2 in the gap functions when set.
  std::optional<double> delta_coefficient;
};

struct DeltaPair {
  double delta = 0.0;
  double delta_bar = 0.0;
};

/// Delta = (6 c1 d^4 / c2^2 + 3) gamma, DeltaBar = (6 c1 d^4 / c2^2 + 5) gamma.
DeltaPair delta_functions(double c1, double c2, std::size_t dim, double gamma);

/// Same shape with an explicit leading coefficient.
DeltaPair delta_functions_with(double coefficient, double gamma);

enum class PyramidCase { Case1a, Case1b, Case2a, Case2b };

std::string case_name(PyramidCase kind);

PyramidCase classify_pyramid(const ConfidenceInterval& top, const ConfidenceInterval& bottom,
                             const ConfidenceInterval& apex, const ConfidenceInterval& center,
                             double gamma_hat, double delta, double delta_bar);

/// Indices of the largest and smallest lower bound; the lowest index wins ties.
struct TopBottom {
  std::size_t top = 0;
  std::size_t bottom = 0;
};
TopBottom select_top_bottom(const std::vector<ConfidenceInterval>& cis);

/// ceil(2 d^2 ln(d) / c2^2) + 1.
std::uint64_t apex_chain_cap(std::size_t dim, double c2);

/// Initial working ellipsoid: the ball itself, or for a box the ellipsoid
/// with semi-axes sqrt(d) times the half-widths about the box center.
Ellipsoid enclosing_ellipsoid(const FeasibleSet& set);

struct EllipsoidEvent {
  std::string kind;  // "round_end", "epoch_end", "apex_warning"
  std::uint64_t epoch = 0;
  std::uint32_t round = 0;
  double gamma = 0.0;
  double gamma_hat = 0.0;
  std::string pyramid_case;
  std::uint64_t pyramid_count = 0;
  double log_volume = 0.0;
  bool depth_clamped = false;
  std::uint64_t plays_used = 0;
};

struct EllipsoidDiagnostics {
  std::uint64_t cuts = 0;
  std::uint64_t max_chain = 0;
  std::uint64_t clamped_cuts = 0;
  std::uint64_t apex_warnings = 0;
  std::vector<double> log_volumes;  // working ellipsoid at the start of each epoch
  std::vector<EllipsoidEvent> events;
};

/// Epochs of simplex sampling and pyramid probing, ending in cone cuts of the
/// working ellipsoid. Kusuoka risks use the Kusuoka sample count. Played
/// points outside X are projected onto X. Throws DegenerateRunError if T
/// cannot cover one simplex round.
Trajectory run_ellipsoid(const LossEnvironment& env, const RiskSpec& risk, std::uint64_t horizon,
                         const EllipsoidParams& params, RngStream& nature,
                         EllipsoidDiagnostics* diagnostics = nullptr);

}  // namespace riskbandit
