#pragma once

#include <Eigen/Core>

#include "tcplan/errors.hpp"

namespace tcplan {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace tol {
inline constexpr double norm = 1e-9;
inline constexpr double zero = 1e-12;
inline constexpr double pole_margin = 1e-9;
inline constexpr double junction = 1e-9;
inline constexpr double domain = 1e-12;
}  // namespace tol

/// A point of R^k with finite coordinates, k >= 1.
class EuclidPoint {
 public:
  explicit EuclidPoint(Vec coords);

  const Vec& coords() const noexcept { return coords_; }
  Eigen::Index dim() const noexcept { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

 private:
  Vec coords_;
};

/// A point on the sphere of the given radius centred at the origin.
///
/// Construction checks | ||coords|| - radius | <= tol::norm; it never rescales.
/// Use `normalize` to project an arbitrary nonzero vector.
class SpherePoint {
 public:
  explicit SpherePoint(Vec coords, double radius = 1.0);

  const Vec& coords() const noexcept { return coords_; }
  double radius() const noexcept { return radius_; }
  /// Sphere dimension m, for a point of S^m in R^{m+1}.
  Eigen::Index sphere_dim() const noexcept { return coords_.size() - 1; }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  EuclidPoint as_euclid() const { return EuclidPoint(coords_); }
  SpherePoint antipode() const { return SpherePoint(-coords_, radius_); }

 private:
  Vec coords_;
  double radius_;
};

SpherePoint normalize(const EuclidPoint& v);
SpherePoint normalize(const Vec& v);

/// Stereographic projection from the north pole (0,...,0,1) of S^m onto R^m.
EuclidPoint stereo_proj(const SpherePoint& x);
/// Inverse chart R^m -> S^m minus the north pole.
SpherePoint stereo_inv(const EuclidPoint& y);

/// Unit tangent field (x1,y1,...) -> (-y1,x1,...) on odd spheres.
EuclidPoint tangent_odd(const SpherePoint& x);
/// Tangent field (x1,x2,x3,...) -> (0,-x3,x2,...) on even spheres; zero exactly at +-e1.
EuclidPoint tangent_even(const SpherePoint& x);

SpherePoint north_pole(Eigen::Index m);
SpherePoint south_pole(Eigen::Index m);
/// i-th standard basis vector of R^{m+1} as a point of S^m.
SpherePoint basis_point(Eigen::Index m, Eigen::Index i);

/// Smallest singular value of a (possibly rectangular) matrix; 0 for empty input.
double sigma_min(const Mat& a);

}  // namespace tcplan
