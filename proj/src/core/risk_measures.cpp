// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "core/errors.hpp"

namespace riskbandit {
namespace {

constexpr double kWeightSumTolerance = 1e-12;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("CVaR level alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

void check_unit_samples(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("risk estimate needs at least one sample");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double s = samples[i];
    if (!(s >= 0.0 && s <= 1.0)) {
      throw DomainError("sample " + std::to_string(i) + " = " + std::to_string(s) +
                        " lies outside [0, 1]");
    }
  }
}

// Tail average given the descending prefix sums of the sample.
double cvar_from_prefix(std::span<const double> sorted_desc, std::span<const double> prefix,
                        double alpha) {
  const auto n = sorted_desc.size();
  const double mass = alpha * static_cast<double>(n);
  auto full = static_cast<std::size_t>(std::floor(mass));
  if (full >= n) return prefix[n] / static_cast<double>(n);
  const double frac = mass - static_cast<double>(full);
  return (prefix[full] + frac * sorted_desc[full]) / mass;
}

}  // namespace

RiskSpec RiskSpec::cvar(double alpha) {
  check_alpha(alpha);
  return RiskSpec(Kind::CVaR, alpha, {});
}

RiskSpec RiskSpec::kusuoka(std::vector<double> mu) {
  validate_kusuoka_weights(mu);
  return RiskSpec(Kind::Kusuoka, 0.0, std::move(mu));
}

std::string RiskSpec::describe() const {
  std::ostringstream out;
  if (is_cvar()) {
    out << "CVaR(alpha=" << alpha_ << ")";
  } else {
    out << "Kusuoka(N=" << mu_.size() << ")";
  }
  return out.str();
}

double empirical_cvar(std::span<const double> samples, double alpha) {
  check_alpha(alpha);
  check_unit_samples(samples);

  const auto n = samples.size();
  const double mass = alpha * static_cast<double>(n);
  const auto full = static_cast<std::size_t>(std::floor(mass));
  if (full >= n) {
    return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  }

  std::vector<double> work(samples.begin(), samples.end());
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(full), work.end(),
                   std::greater<>());
  const double boundary = work[full];
  const double top = std::accumulate(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(full), 0.0);
  return (top + (mass - static_cast<double>(full)) * boundary) / mass;
}

double exact_cvar_discrete(std::span<const double> values, std::span<const double> probs,
                           double alpha) {
  check_alpha(alpha);
  if (values.empty() || values.size() != probs.size()) {
    throw DomainError("discrete distribution needs matching, nonempty value and probability lists");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw DomainError("probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw DomainError("probabilities sum to " + std::to_string(total) + ", expected 1");
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  double remaining = alpha;
  double acc = 0.0;
  for (std::size_t idx : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(probs[idx], remaining);
    acc += take * values[idx];
    remaining -= take;
  }
  return acc / alpha;
}

double ci_sample_count_unrounded(double horizon, double alpha, double gamma, double kappa) {
  check_alpha(alpha);
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("CI width gamma must lie in (0, 1]");
  if (!(kappa > 0.0)) throw DomainError("sample-count constant kappa must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon T must be positive");
  const double ratio = horizon / (alpha * gamma);
  if (!(ratio > 1.0)) {
    throw DomainError("T / (alpha gamma) must exceed 1 for a positive log factor");
  }
  return kappa * std::log(ratio) / (alpha * alpha * gamma * gamma);
}

std::uint64_t ci_sample_count(double horizon, double alpha, double gamma, double kappa) {
  return static_cast<std::uint64_t>(
      std::ceil(ci_sample_count_unrounded(horizon, alpha, gamma, kappa)));
}

std::uint64_t kusuoka_ci_sample_count(double horizon, std::size_t levels, double gamma,
                                      double kappa) {
  if (levels == 0) throw DomainError("Kusuoka risk needs at least one level");
  if (!(gamma > 0.0)) throw DomainError("CI width gamma must be positive");
  if (!(kappa > 0.0)) throw DomainError("sample-count constant kappa must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon T must be positive");
  const auto big_n = static_cast<double>(levels);
  const double arg = std::sqrt(big_n) * horizon;
  if (!(arg > 1.0)) throw DomainError("sqrt(N) T must exceed 1 for a positive log factor");
  const double base = kappa * big_n * big_n * std::log(arg) / (gamma * gamma);
  std::uint64_t total = 0;
  for (std::size_t n = 1; n <= levels; ++n) {
    const auto level = static_cast<double>(n);
    total += static_cast<std::uint64_t>(std::ceil(base / (level * level)));
  }
  return total;
}

void validate_kusuoka_weights(std::span<const double> mu) {
  if (mu.empty()) throw DomainError("Kusuoka weight vector must be nonempty");
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] >= 0.0)) {
      throw DomainError("Kusuoka weight mu[" + std::to_string(i) + "] is negative");
    }
    total += mu[i];
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw DomainError("Kusuoka weights sum to " + std::to_string(total) + ", expected 1");
  }
}

double kusuoka_eval(std::span<const double> samples, std::span<const double> mu) {
  validate_kusuoka_weights(mu);
  check_unit_samples(samples);

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> prefix(sorted.size() + 1, 0.0);
  std::partial_sum(sorted.begin(), sorted.end(), prefix.begin() + 1);

  const auto big_n = static_cast<double>(mu.size());
  double value = 0.0;
  for (std::size_t n = 1; n <= mu.size(); ++n) {
    if (mu[n - 1] == 0.0) continue;
    value += mu[n - 1] * cvar_from_prefix(sorted, prefix, static_cast<double>(n) / big_n);
  }
  return value;
}

double empirical_risk(std::span<const double> samples, const RiskSpec& risk) {
  return risk.is_cvar() ? empirical_cvar(samples, risk.alpha()) : kusuoka_eval(samples, risk.mu());
}

std::uint64_t risk_ci_sample_count(double horizon, const RiskSpec& risk, double gamma,
                                   double kappa) {
  return risk.is_cvar() ? ci_sample_count(horizon, risk.alpha(), gamma, kappa)
                        : kusuoka_ci_sample_count(horizon, risk.mu().size(), gamma, kappa);
}

ConfidenceInterval confidence_interval(std::span<const double> samples, const RiskSpec& risk,
                                       double gamma) {
  if (!(gamma > 0.0)) throw DomainError("CI width gamma must be positive");
  const double center = empirical_risk(samples, risk);
  return ConfidenceInterval{center - gamma, center + gamma, gamma, samples.size()};
}

}  // namespace riskbandit
