// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/cutting_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace riskbandit {
namespace {

constexpr double kMaxCondition = 1e12;

Vector centroid(const std::vector<Vector>& points) {
  Vector sum = Vector::Zero(points.front().size());
  for (const auto& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

Vector pyramid_center(const Vector& apex, const std::vector<Vector>& base) {
  Vector sum = apex;
  for (const auto& z : base) sum += z;
  return sum / static_cast<double>(base.size() + 1);
}

}  // namespace

Ellipsoid Ellipsoid::ball(const Vector& center, double radius) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  const auto n = center.size();
  return Ellipsoid{center, Matrix::Identity(n, n) * (radius * radius)};
}

bool Ellipsoid::contains(const Vector& x, double tol) const {
  const Vector offset = x - center;
  const double q = offset.dot(shape.ldlt().solve(offset));
  return q <= 1.0 + tol;
}

double Ellipsoid::log_volume() const {
  Eigen::LLT<Matrix> llt(shape);
  if (llt.info() != Eigen::Success) throw NumericalError("ellipsoid shape is not positive definite");
  return llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double Ellipsoid::radius_along(const Vector& a) const { return std::sqrt(a.dot(shape * a)); }

void validate_ellipsoid(const Ellipsoid& e) {
  if (e.shape.rows() != e.center.size() || e.shape.cols() != e.center.size()) {
    throw NumericalError("ellipsoid shape and center dimensions differ");
  }
  if ((e.shape - e.shape.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw NumericalError("ellipsoid shape is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(e.shape, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
    throw NumericalError("ellipsoid shape is not positive definite");
  }
}

std::vector<Vector> regular_simplex(const Vector& center, double radius, std::size_t dim) {
  if (!(radius > 0.0)) throw DomainError("simplex radius must be positive");
  if (dim == 0 || static_cast<std::size_t>(center.size()) != dim) {
    throw DomainError("simplex center must have dimension dim >= 1");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  // Rows of an orthonormal basis of the sum-zero hyperplane in R^{n+1} are the
  // projections of the standard basis: a regular simplex centered at 0.
  Eigen::HouseholderQR<Matrix> qr(Matrix::Ones(n + 1, 1));
  const Matrix q = qr.householderQ() * Matrix::Identity(n + 1, n + 1);
  const Matrix basis = q.rightCols(n);
  std::vector<Vector> out;
  out.reserve(dim + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    const Vector row = basis.row(i).transpose();
    out.push_back(center + row * (radius / row.norm()));
  }
  return out;
}

Matrix orthogonal_complement(const Vector& v) {
  const auto n = v.size();
  const Matrix column = v;
  Eigen::HouseholderQR<Matrix> qr(column);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - 1);
}

std::vector<Vector> Pyramid::vertices() const {
  std::vector<Vector> out;
  out.reserve(base.size() + 1);
  out.push_back(apex);
  out.insert(out.end(), base.begin(), base.end());
  return out;
}

Pyramid build_pyramid(const Vector& apex, const Vector& ball_center, double c2) {
  const auto n = apex.size();
  if (n == 0 || ball_center.size() != n) throw DomainError("pyramid points must share a dimension");
  const double d = static_cast<double>(n);
  const double cos_phi = c2 / d;
  if (!(cos_phi > 0.0 && cos_phi < 1.0)) throw DomainError("pyramid needs 0 < c2 / dim < 1");
  const Vector to_center = ball_center - apex;
  const double length = to_center.norm();
  if (!(length > 0.0)) throw DomainError("degenerate pyramid: apex coincides with the ball center");

  const Vector v = to_center / length;
  const double sin_phi = std::sqrt(1.0 - cos_phi * cos_phi);
  const double chord = length * cos_phi;

  Pyramid p;
  p.apex = apex;
  p.ball_center = ball_center;
  p.cos_phi = cos_phi;
  p.base.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    p.base.push_back(apex + chord * v);
  } else {
    const Matrix complement = orthogonal_complement(v);
    const auto dirs = regular_simplex(Vector::Zero(n - 1), 1.0, static_cast<std::size_t>(n - 1));
    for (const auto& s : dirs) {
      p.base.push_back(apex + chord * (cos_phi * v + sin_phi * (complement * s)));
    }
  }
  p.center = pyramid_center(p.apex, p.base);
  return p;
}

Pyramid hat_raise(const Pyramid& pyramid) {
  Pyramid raised = pyramid;
  raised.apex = 2.0 * pyramid.apex - pyramid.center;
  raised.center = pyramid_center(raised.apex, raised.base);
  raised.cos_phi = apex_half_angle_cos(raised.apex, raised.base);
  return raised;
}

double apex_half_angle_cos(const Vector& apex, const std::vector<Vector>& base) {
  const Vector axis = apex - centroid(base);
  double worst = -1.0;
  for (const auto& z : base) {
    const Vector edge = apex - z;
    worst = std::max(worst, axis.dot(edge) / (axis.norm() * edge.norm()));
  }
  return worst;
}

double pyramid_height(const Pyramid& pyramid) {
  const auto& base = pyramid.base;
  const Vector rel = pyramid.apex - base.front();
  if (base.size() == 1) return rel.norm();
  Matrix spans(rel.size(), static_cast<Eigen::Index>(base.size() - 1));
  for (std::size_t i = 1; i < base.size(); ++i) {
    spans.col(static_cast<Eigen::Index>(i - 1)) = base[i] - base.front();
  }
  const Vector coef = spans.colPivHouseholderQr().solve(rel);
  return (rel - spans * coef).norm();
}

double simplex_inradius(const std::vector<Vector>& points) {
  const auto n = points.front().size();
  if (static_cast<Eigen::Index>(points.size()) != n + 1) {
    throw DomainError("simplex inradius needs dim + 1 points");
  }
  Matrix edges(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    edges.col(i) = points[static_cast<std::size_t>(i + 1)] - points.front();
  }
  Eigen::FullPivLU<Matrix> lu(edges);
  if (!lu.isInvertible()) return 0.0;
  // Rows of the inverse are the gradients of the barycentric coordinates.
  const Matrix grads = lu.inverse();
  double total = grads.colwise().sum().norm();
  for (Eigen::Index i = 0; i < n; ++i) total += grads.row(i).norm();
  return 1.0 / total;
}

bool Cone::contains(const Vector& x, double tol) const {
  const auto n = apex.size();
  Matrix g(n, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t i = 0; i < generators.size(); ++i) {
    g.col(static_cast<Eigen::Index>(i)) = generators[i];
  }
  const Vector rel = x - apex;
  if (rel.norm() <= tol) return true;
  const Vector lambda = g.colPivHouseholderQr().solve(rel);
  const double residual = (g * lambda - rel).norm();
  return residual <= tol * (1.0 + rel.norm()) && lambda.minCoeff() >= -tol;
}

Vector Cone::axis() const {
  Vector sum = Vector::Zero(apex.size());
  for (const auto& g : generators) sum += g / g.norm();
  return sum / sum.norm();
}

Cone reflect_cone(const Pyramid& pyramid) {
  Cone cone;
  cone.apex = pyramid.apex;
  cone.generators.reserve(pyramid.base.size());
  for (const auto& z : pyramid.base) {
    Vector g = pyramid.apex - z;
    if (!(g.norm() > 0.0)) throw NumericalError("pyramid base vertex coincides with its apex");
    cone.generators.push_back(std::move(g));
  }
  return cone;
}

Ellipsoid shallow_cut_ellipsoid(const Ellipsoid& e, const Vector& normal, double depth) {
  const auto n = static_cast<double>(e.dim());
  if (!(depth > -1.0 / n && depth < 1.0)) {
    throw DomainError("cut depth must lie in (-1/dim, 1)");
  }
  const double norm = normal.norm();
  if (!(norm > 0.0)) throw DomainError("cut normal must be nonzero");
  const Vector a = normal / norm;
  const double width = e.radius_along(a);
  const Vector b = e.shape * a / width;

  if (e.dim() == 1) {
    const double rho = width;
    Ellipsoid out;
    out.center = e.center - a * (rho * (1.0 + depth) / 2.0);
    const double half = rho * (1.0 - depth) / 2.0;
    out.shape = Matrix::Constant(1, 1, half * half);
    return out;
  }

  const double tau = (1.0 + n * depth) / (n + 1.0);
  const double sigma = 2.0 * (1.0 + n * depth) / ((n + 1.0) * (1.0 + depth));
  const double scale = n * n * (1.0 - depth * depth) / (n * n - 1.0);
  Ellipsoid out;
  out.center = e.center - tau * b;
  out.shape = scale * (e.shape - sigma * b * b.transpose());
  out.shape = 0.5 * (out.shape + out.shape.transpose());
  return out;
}

double shallow_cut_volume_ratio(std::size_t dim, double depth) {
  const auto n = static_cast<double>(dim);
  if (!(depth > -1.0 / n && depth < 1.0)) throw DomainError("cut depth must lie in (-1/dim, 1)");
  if (dim == 1) return (1.0 - depth) / 2.0;
  const double sigma = 2.0 * (1.0 + n * depth) / ((n + 1.0) * (1.0 + depth));
  const double scale = n * n * (1.0 - depth * depth) / (n * n - 1.0);
  return std::pow(scale, n / 2.0) * std::sqrt(1.0 - sigma);
}

double min_cut_depth(std::size_t dim) { return -1.0 / (4.0 * (static_cast<double>(dim) + 1.0)); }

HalfspaceCut cone_to_halfspace(const Cone& cone, const Ellipsoid& ball) {
  if (!ball.contains(cone.apex, 1e-9)) throw DomainError("cone apex lies outside the ball");
  HalfspaceCut cut;
  cut.normal = cone.axis();
  cut.raw_depth = -cut.normal.dot(cone.apex - ball.center) / ball.radius_along(cut.normal);
  const double floor = min_cut_depth(ball.dim());
  cut.clamped = cut.raw_depth < floor;
  cut.depth = std::max(cut.raw_depth, floor);
  return cut;
}

RoundingMap RoundingMap::from_ellipsoid(const Ellipsoid& e) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(e.shape);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Vector values = eig.eigenvalues();
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    throw NumericalError("ellipsoid shape is too ill-conditioned to round");
  }
  const Matrix& vecs = eig.eigenvectors();
  RoundingMap map;
  map.forward_ = vecs * values.cwiseSqrt().cwiseInverse().asDiagonal() * vecs.transpose();
  map.inverse_ = vecs * values.cwiseSqrt().asDiagonal() * vecs.transpose();
  map.offset_ = e.center;
  return map;
}

Vector RoundingMap::forward(const Vector& x) const { return forward_ * (x - offset_); }

Vector RoundingMap::inverse(const Vector& u) const { return offset_ + inverse_ * u; }

}  // namespace riskbandit
