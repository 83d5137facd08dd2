// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/feasible_set.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace riskbandit {

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw DomainError("ball needs a center of dimension >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball radius must be positive");
  FeasibleSet set;
  set.kind_ = Kind::Ball;
  set.center_ = std::move(center);
  set.radius_ = radius;
  set.lo_ = set.center_.array() - radius;
  set.hi_ = set.center_.array() + radius;
  set.finish();
  return set;
}

FeasibleSet FeasibleSet::box(Vector lo, Vector hi) {
  if (lo.size() == 0 || lo.size() != hi.size()) {
    throw DomainError("box bounds must be nonempty and of equal dimension");
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw DomainError("box needs lo < hi in every coordinate");
  }
  FeasibleSet set;
  set.kind_ = Kind::Box;
  set.lo_ = std::move(lo);
  set.hi_ = std::move(hi);
  set.center_ = 0.5 * (set.lo_ + set.hi_);
  set.finish();
  return set;
}

FeasibleSet FeasibleSet::interval(double lo, double hi) {
  FeasibleSet set = box(Vector::Constant(1, lo), Vector::Constant(1, hi));
  set.kind_ = Kind::Interval;
  return set;
}

void FeasibleSet::finish() {
  diameter_ = kind_ == Kind::Ball ? 2.0 * radius_ : (hi_ - lo_).norm();
  if (!contains(Vector::Zero(static_cast<Eigen::Index>(dim())))) {
    throw DomainError("feasible set must contain the origin");
  }
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (static_cast<std::size_t>(x.size()) != dim()) return false;
  if (kind_ == Kind::Ball) return (x - center_).norm() <= radius_ * (1.0 + tol) + tol;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
  }
  return true;
}

Vector FeasibleSet::project(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw DomainError("projection input has the wrong dimension");
  }
  if (kind_ == Kind::Ball) {
    const Vector offset = x - center_;
    const double dist = offset.norm();
    if (dist <= radius_) return x;
    return center_ + offset * (radius_ / dist);
  }
  return x.cwiseMax(lo_).cwiseMin(hi_);
}

Vector FeasibleSet::project_shrunken(const Vector& x, double delta) const {
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("shrinkage delta must lie in [0, 1)");
  if (delta == 0.0) return project(x);
  return scaled(1.0 - delta).project(x);
}

FeasibleSet FeasibleSet::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  switch (kind_) {
    case Kind::Ball:
      return ball(center_ * factor, radius_ * factor);
    case Kind::Box:
      return box(lo_ * factor, hi_ * factor);
    case Kind::Interval:
      return interval(lo_[0] * factor, hi_[0] * factor);
  }
  return *this;
}

double FeasibleSet::inradius_about_origin() const {
  if (kind_ == Kind::Ball) return radius_ - center_.norm();
  return std::min((-lo_).minCoeff(), hi_.minCoeff());
}

double FeasibleSet::max_distance_from(const Vector& p) const {
  if (kind_ == Kind::Ball) return (p - center_).norm() + radius_;
  return (p - lo_).cwiseAbs().cwiseMax((p - hi_).cwiseAbs()).norm();
}

Vector FeasibleSet::argmin_linear(const Vector& w) const {
  if (kind_ == Kind::Ball) {
    const double n = w.norm();
    if (n == 0.0) return project(Vector::Zero(w.size()));
    return center_ - w * (radius_ / n);
  }
  Vector out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) {
      out[i] = lo_[i];
    } else if (w[i] < 0.0) {
      out[i] = hi_[i];
    } else {
      out[i] = 0.0;  // any value is optimal; the origin is feasible
    }
  }
  return out;
}

std::string FeasibleSet::describe() const {
  std::ostringstream out;
  const Eigen::IOFormat fmt(Eigen::StreamPrecision, Eigen::DontAlignCols, ", ", ", ", "", "", "[",
                            "]");
  switch (kind_) {
    case Kind::Ball:
      out << "ball(center=" << center_.transpose().format(fmt) << ", radius=" << radius_ << ")";
      break;
    case Kind::Box:
      out << "box(lo=" << lo_.transpose().format(fmt) << ", hi=" << hi_.transpose().format(fmt)
          << ")";
      break;
    case Kind::Interval:
      out << "interval[" << lo_[0] << ", " << hi_[0] << "]";
      break;
  }
  return out.str();
}

bool operator==(const FeasibleSet& a, const FeasibleSet& b) {
  return a.kind_ == b.kind_ && a.radius_ == b.radius_ && a.lo_ == b.lo_ && a.hi_ == b.hi_ &&
         a.center_ == b.center_;
}

Vector sphere_sample(std::size_t dim, RngStream& stream) {
  if (dim == 0) throw DomainError("sphere dimension must be at least 1");
  Vector u(static_cast<Eigen::Index>(dim));
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = stream.normal();
    norm = u.norm();
  } while (norm == 0.0);
  return u / norm;
}

Vector one_point_gradient(double value, const Vector& u, std::size_t dim, double delta) {
  if (!(delta > 0.0)) throw DomainError("smoothing radius delta must be positive");
  return (static_cast<double>(dim) / delta) * value * u;
}

}  // namespace riskbandit
