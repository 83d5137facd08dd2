// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>

#include "core/rng.hpp"

namespace riskbandit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Convex compact feasible region containing the origin. Balls and boxes have
/// closed-form Euclidean projections, which also gives closed-form projection
/// onto the shrunken set (1 - delta) X.
class FeasibleSet {
 public:
  enum class Kind { Ball, Box, Interval };

  static FeasibleSet ball(Vector center, double radius);
  static FeasibleSet box(Vector lo, Vector hi);
  static FeasibleSet interval(double lo, double hi);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(lo_.size()); }
  double diameter() const noexcept { return diameter_; }

  // Ball: center_ / radius_. Box and Interval: lo_ / hi_.
  const Vector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  const Vector& lo() const noexcept { return lo_; }
  const Vector& hi() const noexcept { return hi_; }

  bool contains(const Vector& x, double tol = 1e-12) const;
  Vector project(const Vector& x) const;

  /// Projection onto X_delta = (1 - delta) X. delta must lie in [0, 1).
  Vector project_shrunken(const Vector& x, double delta) const;

  /// The set scaled about the origin by `factor` > 0.
  FeasibleSet scaled(double factor) const;

  /// Radius of the largest origin-centered ball inside the set.
  double inradius_about_origin() const;

  /// max over x in X of ||x - p||.
  double max_distance_from(const Vector& p) const;

  /// A minimizer of <w, x> over X.
  Vector argmin_linear(const Vector& w) const;

  std::string describe() const;

  friend bool operator==(const FeasibleSet& a, const FeasibleSet& b);

 private:
  FeasibleSet() = default;
  void finish();

  Kind kind_ = Kind::Ball;
  Vector center_;
  double radius_ = 0.0;
  Vector lo_;
  Vector hi_;
  double diameter_ = 0.0;
};

/// Uniform draw from the unit sphere in R^dim (normalized Gaussian vector).
/// dim = 1 yields -1 or +1.
Vector sphere_sample(std::size_t dim, RngStream& stream);

/// One-point gradient estimate (dim / delta) * value * u of the delta-smoothed
/// function. Throws DomainError when delta <= 0.
Vector one_point_gradient(double value, const Vector& u, std::size_t dim, double delta);

}  // namespace riskbandit
