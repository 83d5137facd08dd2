// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/ellipsoid_dd.hpp"

#include <algorithm>
#include <cmath>

namespace riskbandit {

DeltaPair delta_functions_with(double coefficient, double gamma) {
  return {(coefficient + 3.0) * gamma, (coefficient + 5.0) * gamma};
}

DeltaPair delta_functions(double c1, double c2, std::size_t dim, double gamma) {
  const double d = static_cast<double>(dim);
  return delta_functions_with(6.0 * c1 * d * d * d * d / (c2 * c2), gamma);
}

std::string case_name(PyramidCase kind) {
  switch (kind) {
    case PyramidCase::Case1a:
      return "case1a";
    case PyramidCase::Case1b:
      return "case1b";
    case PyramidCase::Case2a:
      return "case2a";
    case PyramidCase::Case2b:
      return "case2b";
  }
  return "unknown";
}

PyramidCase classify_pyramid(const ConfidenceInterval& top, const ConfidenceInterval& bottom,
                             const ConfidenceInterval& apex, const ConfidenceInterval& center,
                             double gamma_hat, double delta, double delta_bar) {
  if (top.lower >= bottom.upper + delta) {
    return top.lower >= apex.upper + gamma_hat ? PyramidCase::Case1a : PyramidCase::Case1b;
  }
  return center.upper >= bottom.lower - delta_bar ? PyramidCase::Case2a : PyramidCase::Case2b;
}

TopBottom select_top_bottom(const std::vector<ConfidenceInterval>& cis) {
  TopBottom out;
  for (std::size_t i = 1; i < cis.size(); ++i) {
    if (cis[i].lower > cis[out.top].lower) out.top = i;
    if (cis[i].lower < cis[out.bottom].lower) out.bottom = i;
  }
  return out;
}

std::uint64_t apex_chain_cap(std::size_t dim, double c2) {
  const double d = static_cast<double>(dim);
  return static_cast<std::uint64_t>(std::ceil(2.0 * d * d * std::log(d) / (c2 * c2))) + 1;
}

Ellipsoid enclosing_ellipsoid(const FeasibleSet& set) {
  if (set.kind() == FeasibleSet::Kind::Ball) return Ellipsoid::ball(set.center(), set.radius());
  const double scale = set.kind() == FeasibleSet::Kind::Interval
                           ? 1.0
                           : std::sqrt(static_cast<double>(set.dim()));
  const Vector semi = 0.5 * (set.hi() - set.lo()) * scale;
  return Ellipsoid{0.5 * (set.lo() + set.hi()), semi.cwiseProduct(semi).asDiagonal()};
}

namespace {

// Mutable state of one run, shared by the epoch/round/pyramid loops.
class Driver {
 public:
  Driver(const LossEnvironment& env, const RiskSpec& risk, std::uint64_t horizon,
         const EllipsoidParams& params, RngStream& nature, EllipsoidDiagnostics* diag)
      : env_(env),
        risk_(risk),
        horizon_(horizon),
        params_(params),
        nature_(nature),
        diag_(diag),
        dim_(env.dim()),
        traj_("ellipsoid", env.to_json(), risk, env.dim(), horizon),
        working_(enclosing_ellipsoid(env.feasible_set())) {}

  Trajectory run() {
    const double d = static_cast<double>(dim_);
    const double coefficient = params_.delta_coefficient.value_or(
        6.0 * params_.c1 * d * d * d * d / (params_.c2 * params_.c2));
    const std::uint64_t cap = apex_chain_cap(dim_, params_.c2);

    while (!exhausted()) {
      // Frame: world = c + S w with S = A^{1/2} / R, so the working ellipsoid is B(0, R).
      const RoundingMap map = RoundingMap::from_ellipsoid(working_);
      const double log_vol = working_.log_volume();
      const double big_r = std::exp(log_vol / d);
      const Matrix frame = map.linear_inverse() / big_r;
      const Vector& origin = working_.center;
      if (diag_) diag_->log_volumes.push_back(log_vol);

      const double small_r = big_r / (params_.c1 * d);
      const Vector x0 = Vector::Zero(static_cast<Eigen::Index>(dim_));
      const auto simplex = regular_simplex(x0, small_r, dim_);
      auto to_world = [&](const Vector& w) -> Vector { return origin + frame * w; };

      bool epoch_done = false;
      for (std::uint32_t round = 1; !epoch_done; ++round) {
        const double gamma = std::ldexp(1.0, -static_cast<int>(round));
        std::vector<ConfidenceInterval> simplex_cis;
        for (const auto& v : simplex) {
          auto ci = play(to_world(v), gamma);
          if (!ci) {
            if (!first_round_done_) {
              throw DegenerateRunError(
                  "horizon too small to complete one simplex round", std::move(traj_));
            }
            return std::move(traj_);
          }
          simplex_cis.push_back(*ci);
        }
        first_round_done_ = true;
        const Vector y1 = simplex[select_top_bottom(simplex_cis).top];

        Pyramid pyramid = build_pyramid(y1, x0, params_.c2);
        std::uint64_t chain = 0;
        std::uint64_t pyramids = 1;
        double gamma_hat = 1.0;

        while (true) {
          // Apex first, then the center, then the base vertices.
          auto apex_ci = play(to_world(pyramid.apex), gamma_hat);
          if (!apex_ci) return std::move(traj_);
          auto center_ci = play(to_world(pyramid.center), gamma_hat);
          if (!center_ci) return std::move(traj_);
          std::vector<ConfidenceInterval> vertex_cis{*apex_ci};
          for (const auto& z : pyramid.base) {
            auto ci = play(to_world(z), gamma_hat);
            if (!ci) return std::move(traj_);
            vertex_cis.push_back(*ci);
          }
          const TopBottom tb = select_top_bottom(vertex_cis);
          const DeltaPair gaps = delta_functions_with(coefficient, gamma_hat);
          const PyramidCase kind =
              classify_pyramid(vertex_cis[tb.top], vertex_cis[tb.bottom], vertex_cis[0],
                               *center_ci, gamma_hat, gaps.delta, gaps.delta_bar);

          if (kind == PyramidCase::Case1a) {
            const Vector next_apex = pyramid.vertices()[tb.top];
            const bool too_close = next_apex.norm() < small_r / d * (1.0 - 1e-12);
            if (too_close || chain + 1 > cap) {
              // The next apex would break the chain preconditions; cut with
              // the current pyramid instead.
              note("apex_warning", round, gamma, gamma_hat, kind, pyramids, log_vol, false);
              if (diag_) ++diag_->apex_warnings;
              cut(pyramid, big_r, origin, frame, log_vol, round, gamma, gamma_hat, kind, pyramids);
              epoch_done = true;
              break;
            }
            ++chain;
            if (diag_) diag_->max_chain = std::max(diag_->max_chain, chain);
            pyramid = build_pyramid(next_apex, x0, params_.c2);
            ++pyramids;
            gamma_hat = 1.0;
            continue;
          }
          if (kind == PyramidCase::Case1b) {
            cut(pyramid, big_r, origin, frame, log_vol, round, gamma, gamma_hat, kind, pyramids);
            epoch_done = true;
            break;
          }
          if (kind == PyramidCase::Case2b) {
            cut(hat_raise(pyramid), big_r, origin, frame, log_vol, round, gamma, gamma_hat, kind,
                pyramids);
            epoch_done = true;
            break;
          }
          gamma_hat /= 2.0;
          if (gamma_hat < gamma) {
            note("round_end", round, gamma, gamma_hat, kind, pyramids, log_vol, false);
            break;
          }
        }
      }
    }
    return std::move(traj_);
  }

 private:
  bool exhausted() const { return traj_.length() >= horizon_; }

  // Plays `world` enough times for a gamma-wide interval. Returns nothing if
  // the budget ran out first.
  std::optional<ConfidenceInterval> play(Vector world, double gamma) {
    const FeasibleSet& set = env_.feasible_set();
    if (!set.contains(world)) world = set.project(world);
    const std::uint64_t count = risk_ci_sample_count(static_cast<double>(horizon_), risk_, gamma,
                                                     params_.kappa);
    block_.clear();
    for (std::uint64_t s = 0; s < count; ++s) {
      if (exhausted()) return std::nullopt;
      const double loss = env_.sample_loss(world, nature_);
      traj_.append(world, loss);
      block_.push_back(loss);
    }
    return confidence_interval(block_, risk_, gamma);
  }

  void cut(const Pyramid& pyramid, double big_r, const Vector& origin, const Matrix& frame,
           double log_vol, std::uint32_t round, double gamma, double gamma_hat, PyramidCase kind,
           std::uint64_t pyramids) {
    const auto n = static_cast<Eigen::Index>(dim_);
    const Ellipsoid ball = Ellipsoid::ball(Vector::Zero(n), big_r);
    const Cone cone = reflect_cone(pyramid);
    HalfspaceCut hs;
    if (ball.contains(cone.apex, 1e-9)) {
      hs = cone_to_halfspace(cone, ball);
    } else {
      // A raised apex can leave the ball; fall back to the clamped depth range.
      hs.normal = cone.axis();
      hs.raw_depth = -hs.normal.dot(cone.apex) / big_r;
      hs.depth = std::clamp(hs.raw_depth, min_cut_depth(dim_), 1.0 - 1e-9);
      hs.clamped = true;
    }
    if (hs.clamped && diag_) ++diag_->clamped_cuts;

    const Ellipsoid next_frame = shallow_cut_ellipsoid(ball, hs.normal, hs.depth);
    Ellipsoid next;
    next.center = origin + frame * next_frame.center;
    next.shape = frame * next_frame.shape * frame.transpose();
    next.shape = 0.5 * (next.shape + next.shape.transpose());

    const double next_log_vol = next.log_volume();
    const double bound = -1.0 / (4.0 * (static_cast<double>(dim_) + 1.0));
    if (!(next_log_vol - log_vol <= bound + 1e-9)) {
      throw InvariantViolation("cone cut did not shrink the working ellipsoid enough");
    }
    working_ = std::move(next);
    if (diag_) ++diag_->cuts;
    note("epoch_end", round, gamma, gamma_hat, kind, pyramids, next_log_vol, hs.clamped);
    ++epoch_;
  }

  void note(const char* kind, std::uint32_t round, double gamma, double gamma_hat,
            PyramidCase pyramid_case, std::uint64_t pyramids, double log_vol, bool clamped) {
    if (!diag_) return;
    diag_->events.push_back(EllipsoidEvent{kind, epoch_, round, gamma, gamma_hat,
                                           case_name(pyramid_case), pyramids, log_vol, clamped,
                                           traj_.length()});
  }

  const LossEnvironment& env_;
  const RiskSpec& risk_;
  std::uint64_t horizon_;
  EllipsoidParams params_;
  RngStream& nature_;
  EllipsoidDiagnostics* diag_;
  std::size_t dim_;
  Trajectory traj_;
  Ellipsoid working_;
  std::vector<double> block_;
  std::uint64_t epoch_ = 1;
  bool first_round_done_ = false;
};

}  // namespace

Trajectory run_ellipsoid(const LossEnvironment& env, const RiskSpec& risk, std::uint64_t horizon,
                         const EllipsoidParams& params, RngStream& nature,
                         EllipsoidDiagnostics* diagnostics) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  const double d = static_cast<double>(env.dim());
  if (!(params.c1 >= 1.0)) throw DomainError("c1 must be at least 1");
  if (!(params.c2 > 0.0 && params.c2 < d)) throw DomainError("c2 must lie in (0, dim)");
  if (!(params.kappa > 0.0)) throw DomainError("kappa must be positive");
  if (params.delta_coefficient && !(*params.delta_coefficient >= 0.0)) {
    throw DomainError("delta_coefficient must be nonnegative");
  }
  Driver driver(env, risk, horizon, params, nature, diagnostics);
  return driver.run();
}

}  // namespace riskbandit
