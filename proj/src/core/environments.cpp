// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/environments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "core/errors.hpp"
#include "core/json_fields.hpp"

namespace riskbandit {
namespace {

constexpr double kRangeTolerance = 1e-12;
constexpr double kMembershipTolerance = 1e-9;

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string("environment parameter ") + name + " must be finite and >= 0");
  }
}

// CVaR_alpha of U[0, c].
double uniform_cvar(double c, double alpha) { return c * (1.0 - 0.5 * alpha); }

double bernoulli_cvar(double c, double p, double alpha) {
  const std::array<double, 2> values{0.0, c};
  const std::array<double, 2> probs{1.0 - p, p};
  return exact_cvar_discrete(values, probs, alpha);
}

}  // namespace

std::string family_name(EnvFamily family) {
  switch (family) {
    case EnvFamily::QuadraticUniform:
      return "quadratic_uniform";
    case EnvFamily::LinearBernoulli:
      return "linear_bernoulli";
    case EnvFamily::AbsNoise:
      return "abs_noise";
  }
  return "unknown";
}

LossEnvironment LossEnvironment::quadratic_uniform(FeasibleSet set, Vector x_star, double a,
                                                   double b, double c) {
  if (static_cast<std::size_t>(x_star.size()) != set.dim()) {
    throw DomainError("x_star dimension does not match the feasible set");
  }
  require_nonnegative(a, "a");
  require_nonnegative(b, "b");
  require_nonnegative(c, "c");
  LossEnvironment env(EnvFamily::QuadraticUniform, std::move(set));
  env.anchor_ = std::move(x_star);
  env.scale_ = a;
  env.offset_ = b;
  env.noise_ = c;
  env.lipschitz_ = 2.0 * a * env.set_.max_distance_from(env.anchor_);
  env.beta_ = 2.0 * a;
  env.check_range();
  return env;
}

LossEnvironment LossEnvironment::linear_bernoulli(FeasibleSet set, Vector w, double b, double c,
                                                  double p) {
  if (static_cast<std::size_t>(w.size()) != set.dim()) {
    throw DomainError("w dimension does not match the feasible set");
  }
  require_nonnegative(c, "c");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("Bernoulli probability p must lie in [0, 1]");
  if (!std::isfinite(b)) throw DomainError("environment parameter b must be finite");
  LossEnvironment env(EnvFamily::LinearBernoulli, std::move(set));
  env.anchor_ = std::move(w);
  env.offset_ = b;
  env.noise_ = c;
  env.prob_ = p;
  env.lipschitz_ = env.anchor_.norm();
  env.beta_ = 0.0;
  env.check_range();
  return env;
}

LossEnvironment LossEnvironment::abs_noise(FeasibleSet set, double x_star, double g, double b,
                                           double c) {
  if (set.dim() != 1) throw DomainError("abs_noise is one-dimensional");
  require_nonnegative(g, "g");
  require_nonnegative(b, "b");
  require_nonnegative(c, "c");
  LossEnvironment env(EnvFamily::AbsNoise, std::move(set));
  env.anchor_ = Vector::Constant(1, x_star);
  env.scale_ = g;
  env.offset_ = b;
  env.noise_ = c;
  env.lipschitz_ = g;
  env.beta_ = 0.0;
  env.check_range();
  return env;
}

void LossEnvironment::check_range() const {
  double lowest = 0.0;
  double highest = 0.0;
  switch (family_) {
    case EnvFamily::QuadraticUniform: {
      if (!set_.contains(anchor_, kMembershipTolerance)) {
        throw DomainError("x_star must lie in the feasible set");
      }
      const double reach = set_.max_distance_from(anchor_);
      lowest = offset_;
      highest = scale_ * reach * reach + offset_ + noise_;
      break;
    }
    case EnvFamily::LinearBernoulli: {
      lowest = offset_ + anchor_.dot(set_.argmin_linear(anchor_));
      highest = offset_ + anchor_.dot(set_.argmin_linear(-anchor_)) + noise_;
      break;
    }
    case EnvFamily::AbsNoise: {
      if (!set_.contains(anchor_, kMembershipTolerance)) {
        throw DomainError("x_star must lie in the feasible set");
      }
      lowest = offset_;
      highest = scale_ * set_.max_distance_from(anchor_) + offset_ + noise_;
      break;
    }
  }
  if (lowest < -kRangeTolerance || highest > 1.0 + kRangeTolerance) {
    std::ostringstream msg;
    msg << family_name(family_) << " parameters reach [" << lowest << ", " << highest
        << "] on the feasible set; losses must stay inside [0, 1] without clamping";
    throw DomainError(msg.str());
  }
}

void LossEnvironment::check_point(const Vector& x) const {
  if (!set_.contains(x, kMembershipTolerance)) {
    throw DomainError("query point lies outside the feasible set " + set_.describe());
  }
}

double LossEnvironment::draw_noise(RngStream& nature) const {
  const double u = nature.uniform();
  if (family_ == EnvFamily::LinearBernoulli) return u < prob_ ? noise_ : 0.0;
  return noise_ * u;
}

double LossEnvironment::deterministic_part(const Vector& x) const {
  switch (family_) {
    case EnvFamily::QuadraticUniform:
      return scale_ * (x - anchor_).squaredNorm() + offset_;
    case EnvFamily::LinearBernoulli:
      return offset_ + anchor_.dot(x);
    case EnvFamily::AbsNoise:
      return scale_ * std::abs(x[0] - anchor_[0]) + offset_;
  }
  return 0.0;
}

double LossEnvironment::loss(const Vector& x, double xi) const {
  check_point(x);
  return std::clamp(deterministic_part(x) + xi, 0.0, 1.0);
}

double LossEnvironment::sample_loss(const Vector& x, RngStream& nature) const {
  check_point(x);
  return std::clamp(deterministic_part(x) + draw_noise(nature), 0.0, 1.0);
}

double LossEnvironment::noise_risk(const RiskSpec& risk) const {
  auto level_risk = [&](double alpha) {
    return family_ == EnvFamily::LinearBernoulli ? bernoulli_cvar(noise_, prob_, alpha)
                                                 : uniform_cvar(noise_, alpha);
  };
  if (risk.is_cvar()) return level_risk(risk.alpha());
  const auto& mu = risk.mu();
  const auto big_n = static_cast<double>(mu.size());
  double value = 0.0;
  for (std::size_t n = 1; n <= mu.size(); ++n) {
    if (mu[n - 1] != 0.0) value += mu[n - 1] * level_risk(static_cast<double>(n) / big_n);
  }
  return value;
}

RiskValue LossEnvironment::ground_truth_risk(const Vector& x, const RiskSpec& risk) const {
  check_point(x);
  // Translation invariance: rho(d(x) + xi) = d(x) + rho(xi).
  return RiskValue{deterministic_part(x) + noise_risk(risk), true};
}

std::pair<Vector, double> LossEnvironment::ground_truth_minimizer(const RiskSpec& risk) const {
  Vector argmin = family_ == EnvFamily::LinearBernoulli ? set_.argmin_linear(anchor_) : anchor_;
  const double value = deterministic_part(argmin) + noise_risk(risk);
  return {std::move(argmin), value};
}

std::string LossEnvironment::describe() const { return to_json().dump(); }

bool operator==(const LossEnvironment& a, const LossEnvironment& b) {
  return a.family_ == b.family_ && a.set_ == b.set_ && a.anchor_ == b.anchor_ &&
         a.scale_ == b.scale_ && a.offset_ == b.offset_ && a.noise_ == b.noise_ &&
         a.prob_ == b.prob_;
}

nlohmann::json feasible_set_to_json(const FeasibleSet& set) {
  using json_fields::vector_to_json;
  switch (set.kind()) {
    case FeasibleSet::Kind::Ball:
      return {{"kind", "ball"}, {"center", vector_to_json(set.center())}, {"radius", set.radius()}};
    case FeasibleSet::Kind::Box:
      return {{"kind", "box"}, {"lo", vector_to_json(set.lo())}, {"hi", vector_to_json(set.hi())}};
    case FeasibleSet::Kind::Interval:
      return {{"kind", "interval"}, {"lo", set.lo()[0]}, {"hi", set.hi()[0]}};
  }
  return {};
}

FeasibleSet feasible_set_from_json(const nlohmann::json& doc, const std::string& path) {
  namespace jf = json_fields;
  const std::string kind = jf::string(doc, "kind", path);
  try {
    if (kind == "ball") {
      Vector center = jf::as_vector(jf::require(doc, "center", path), jf::join(path, "center"));
      return FeasibleSet::ball(std::move(center), jf::number(doc, "radius", path));
    }
    if (kind == "box") {
      return FeasibleSet::box(jf::as_vector(jf::require(doc, "lo", path), jf::join(path, "lo")),
                              jf::as_vector(jf::require(doc, "hi", path), jf::join(path, "hi")));
    }
    if (kind == "interval") {
      return FeasibleSet::interval(jf::number(doc, "lo", path), jf::number(doc, "hi", path));
    }
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(jf::join(path, "kind"), "unknown feasible set kind '" + kind + "'");
}

nlohmann::json LossEnvironment::to_json() const {
  using json_fields::vector_to_json;
  nlohmann::json doc;
  doc["family"] = family_name(family_);
  doc["set"] = feasible_set_to_json(set_);
  switch (family_) {
    case EnvFamily::QuadraticUniform:
      doc["x_star"] = vector_to_json(anchor_);
      doc["a"] = scale_;
      doc["b"] = offset_;
      doc["c"] = noise_;
      break;
    case EnvFamily::LinearBernoulli:
      doc["w"] = vector_to_json(anchor_);
      doc["b"] = offset_;
      doc["c"] = noise_;
      doc["p"] = prob_;
      break;
    case EnvFamily::AbsNoise:
      doc["x_star"] = anchor_[0];
      doc["g"] = scale_;
      doc["b"] = offset_;
      doc["c"] = noise_;
      break;
  }
  return doc;
}

LossEnvironment LossEnvironment::from_json(const nlohmann::json& doc, const std::string& path) {
  namespace jf = json_fields;
  auto nonnegative = [&](const char* key, std::optional<double> fallback = std::nullopt) {
    const double v = fallback ? jf::number_or(doc, key, path, *fallback) : jf::number(doc, key, path);
    if (!(v >= 0.0)) throw ConfigError(jf::join(path, key), "must be >= 0");
    return v;
  };
  const std::string family = jf::string(doc, "family", path);
  const std::string set_path = jf::join(path, "set");
  if (family != "abs_noise" && family != "quadratic_uniform" && family != "linear_bernoulli") {
    throw ConfigError(jf::join(path, "family"), "unknown environment family '" + family + "'");
  }

  if (family == "abs_noise") {
    FeasibleSet set = doc.contains("set") ? feasible_set_from_json(doc.at("set"), set_path)
                                          : FeasibleSet::interval(0.0, 1.0);
    const auto& xs = jf::require(doc, "x_star", path);
    double x_star = 0.0;
    if (xs.is_array()) {
      const Vector v = jf::as_vector(xs, jf::join(path, "x_star"));
      if (v.size() != 1) throw ConfigError(jf::join(path, "x_star"), "abs_noise is one-dimensional");
      x_star = v[0];
    } else {
      x_star = jf::as_number(xs, jf::join(path, "x_star"));
    }
    const double g = nonnegative("g");
    const double b = nonnegative("b", 0.0);
    const double c = nonnegative("c");
    try {
      return abs_noise(std::move(set), x_star, g, b, c);
    } catch (const DomainError& e) {
      throw ConfigError(path, e.what());
    }
  }

  FeasibleSet set = feasible_set_from_json(jf::require(doc, "set", path), set_path);
  if (family == "quadratic_uniform") {
    Vector x_star = jf::as_vector(jf::require(doc, "x_star", path), jf::join(path, "x_star"));
    const double a = nonnegative("a");
    const double b = nonnegative("b");
    const double c = nonnegative("c");
    try {
      return quadratic_uniform(std::move(set), std::move(x_star), a, b, c);
    } catch (const DomainError& e) {
      throw ConfigError(path, e.what());
    }
  }
  if (family == "linear_bernoulli") {
    Vector w = jf::as_vector(jf::require(doc, "w", path), jf::join(path, "w"));
    const double b = jf::number(doc, "b", path);
    const double c = nonnegative("c");
    const double p = jf::number(doc, "p", path);
    try {
      return linear_bernoulli(std::move(set), std::move(w), b, c, p);
    } catch (const DomainError& e) {
      throw ConfigError(path, e.what());
    }
  }
  throw InvariantViolation("unhandled environment family '" + family + "'");
}

RiskValue monte_carlo_risk(const LossEnvironment& env, const Vector& x, const RiskSpec& risk,
                           std::size_t draws, std::uint64_t seed) {
  RngStream nature(seed);
  std::vector<double> losses(draws);
  for (auto& l : losses) l = env.sample_loss(x, nature);
  return RiskValue{empirical_risk(losses, risk), false};
}

}  // namespace riskbandit
