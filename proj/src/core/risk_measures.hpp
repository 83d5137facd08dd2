// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace riskbandit {

/// Risk objective: a single CVaR level, or a Kusuoka mixture
/// rho(X) = sum_n mu_n * CVaR_{n/N}(X) over the fixed levels n/N.
class RiskSpec {
 public:
  enum class Kind { CVaR, Kusuoka };

  static RiskSpec cvar(double alpha);
  static RiskSpec kusuoka(std::vector<double> mu);

  Kind kind() const noexcept { return kind_; }
  bool is_cvar() const noexcept { return kind_ == Kind::CVaR; }
  double alpha() const noexcept { return alpha_; }
  const std::vector<double>& mu() const noexcept { return mu_; }

  /// Number of auxiliary z-coordinates the risk needs (1 for CVaR, N for Kusuoka).
  std::size_t levels() const noexcept { return is_cvar() ? 1 : mu_.size(); }

  std::string describe() const;

  friend bool operator==(const RiskSpec&, const RiskSpec&) = default;

 private:
  RiskSpec(Kind kind, double alpha, std::vector<double> mu)
      : kind_(kind), alpha_(alpha), mu_(std::move(mu)) {}

  Kind kind_;
  double alpha_;
  std::vector<double> mu_;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double width_gamma = 0.0;
  std::uint64_t sample_count = 0;

  double center() const noexcept { return 0.5 * (lower + upper); }
};

/// Empirical CVaR: the exact minimum over z in [0, 1] of
/// z + (1 / (alpha N)) sum_n [f_n - z]_+, evaluated through the sorted upper
/// tail. When alpha N is fractional the boundary order statistic carries weight
/// (alpha N - floor(alpha N)) / (alpha N).
///
/// Throws DomainError for an empty sample, alpha outside (0, 1], or a sample
/// outside [0, 1].
double empirical_cvar(std::span<const double> samples, double alpha);

/// CVaR of a finite distribution; the atom at the VaR level receives the
/// fractional remainder of the alpha mass.
double exact_cvar_discrete(std::span<const double> values, std::span<const double> probs,
                           double alpha);

/// Plays needed for a gamma-wide CVaR interval:
/// ceil(kappa * ln(T / (alpha gamma)) / (alpha^2 gamma^2)).
std::uint64_t ci_sample_count(double horizon, double alpha, double gamma, double kappa);

/// Same value before rounding up; exposed for the linearity-in-kappa check.
double ci_sample_count_unrounded(double horizon, double alpha, double gamma, double kappa);

/// Plays needed for a gamma-wide Kusuoka interval with N levels. Level n gets
/// ceil(kappa N^2 ln(sqrt(N) T) / (n^2 gamma^2)) and the levels are summed.
std::uint64_t kusuoka_ci_sample_count(double horizon, std::size_t levels, double gamma,
                                      double kappa);

/// Throws DomainError unless every mu_n >= 0 and the weights sum to 1.
void validate_kusuoka_weights(std::span<const double> mu);

double kusuoka_eval(std::span<const double> samples, std::span<const double> mu);

/// Empirical value of either risk kind.
double empirical_risk(std::span<const double> samples, const RiskSpec& risk);

/// Sample count for a gamma-wide interval of either risk kind.
std::uint64_t risk_ci_sample_count(double horizon, const RiskSpec& risk, double gamma,
                                   double kappa);

/// Interval of half-width gamma centered on the empirical risk. Not clipped to
/// [0, 1]. Whether the sample is large enough is the caller's business.
ConfidenceInterval confidence_interval(std::span<const double> samples, const RiskSpec& risk,
                                       double gamma);

}  // namespace riskbandit
