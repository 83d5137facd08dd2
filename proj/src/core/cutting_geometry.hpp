// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "core/feasible_set.hpp"

namespace riskbandit {

/// {x : (x - c)^T A^{-1} (x - c) <= 1} with A symmetric positive definite.
struct Ellipsoid {
  Vector center;
  Matrix shape;

  static Ellipsoid ball(const Vector& center, double radius);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(center.size()); }
  bool contains(const Vector& x, double tol = 1e-12) const;

  /// 0.5 * log det A, the log volume up to the unit-ball constant.
  double log_volume() const;

  /// sqrt(a^T A a): half the width of E along the unit direction a.
  double radius_along(const Vector& a) const;
};

/// Throws NumericalError unless A is symmetric (1e-10) with positive eigenvalues.
void validate_ellipsoid(const Ellipsoid& e);

/// dim + 1 points on the sphere of `radius` about `center`, pairwise equidistant,
/// with centroid `center`.
std::vector<Vector> regular_simplex(const Vector& center, double radius, std::size_t dim);

/// Orthonormal basis (as columns) of the complement of the unit vector v.
Matrix orthogonal_complement(const Vector& v);

struct Pyramid {
  Vector apex;
  std::vector<Vector> base;  // d vertices
  Vector center;             // centroid of apex and base
  Vector ball_center;        // x0 used at construction
  double cos_phi = 0.0;      // cosine of the angle between axis and edges

  std::size_t dim() const noexcept { return static_cast<std::size_t>(apex.size()); }

  /// Apex followed by the base vertices.
  std::vector<Vector> vertices() const;
};

/// Base vertices z_i = y + L cos(phi) (cos(phi) v + sin(phi) w_i) with
/// L = |y - x0|, v = (x0 - y) / L, cos(phi) = c2 / dim and {w_i} the regular
/// (dim - 1)-simplex directions orthogonal to v. Each z_i sees the segment
/// [x0, y] at a right angle. Throws DomainError when y == x0 or c2 / dim is
/// outside (0, 1).
Pyramid build_pyramid(const Vector& apex, const Vector& ball_center, double c2);

/// Same base, apex moved to 2y - center; cos_phi is recomputed.
Pyramid hat_raise(const Pyramid& pyramid);

/// Largest cosine of the angle between the pyramid axis (apex minus base
/// centroid) and an edge from the apex to a base vertex.
double apex_half_angle_cos(const Vector& apex, const std::vector<Vector>& base);

/// Distance from the apex to the affine hull of the base.
double pyramid_height(const Pyramid& pyramid);

/// Radius of the largest ball inside the simplex spanned by dim + 1 points.
double simplex_inradius(const std::vector<Vector>& points);

/// Reflection of a pyramid through its apex: {y + sum_i lambda_i (y - z_i), lambda >= 0}.
struct Cone {
  Vector apex;
  std::vector<Vector> generators;

  bool contains(const Vector& x, double tol = 1e-9) const;

  /// Unit vector along the sum of the generators.
  Vector axis() const;
};

Cone reflect_cone(const Pyramid& pyramid);

/// Minimum-volume ellipsoid containing {x in E : a^T (x - c) <= -depth * sqrt(a^T A a)}
/// for unit a. Requires -1/n < depth < 1; n = 1 is handled as an interval.
Ellipsoid shallow_cut_ellipsoid(const Ellipsoid& e, const Vector& normal, double depth);

/// vol(E+) / vol(E) of the update above.
double shallow_cut_volume_ratio(std::size_t dim, double depth);

/// Most negative cut depth the volume guarantee allows: -1 / (4 (dim + 1)).
double min_cut_depth(std::size_t dim);

struct HalfspaceCut {
  Vector normal;  // unit, pointing into the discarded cone
  double depth = 0.0;
  double raw_depth = 0.0;
  bool clamped = false;
};

/// Halfspace through the cone apex with normal along the cone axis, as a
/// relative depth in the frame of `ball`. The depth is clamped from below at
/// min_cut_depth. Throws DomainError if the apex lies outside `ball`.
HalfspaceCut cone_to_halfspace(const Cone& cone, const Ellipsoid& ball);

/// Affine map u = M (x - c) taking E onto the unit ball, and its inverse.
class RoundingMap {
 public:
  /// Throws NumericalError if the shape matrix has condition number above 1e12.
  static RoundingMap from_ellipsoid(const Ellipsoid& e);

  Vector forward(const Vector& x) const;
  Vector inverse(const Vector& u) const;

  const Matrix& linear() const noexcept { return forward_; }
  const Matrix& linear_inverse() const noexcept { return inverse_; }
  const Vector& offset() const noexcept { return offset_; }

 private:
  Matrix forward_;
  Matrix inverse_;
  Vector offset_;
};

}  // namespace riskbandit
