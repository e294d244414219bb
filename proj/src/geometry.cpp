#include "tcplan/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace tcplan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::AtPole: return "AtPole";
    case ErrorCode::OddAmbientDim: return "OddAmbientDim";
    case ErrorCode::EvenAmbientDim: return "EvenAmbientDim";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotOnSphere: return "NotOnSphere";
    case ErrorCode::JunctionMismatch: return "JunctionMismatch";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::BadMargin: return "BadMargin";
    case ErrorCode::AntipodalPair: return "AntipodalPair";
    case ErrorCode::EqualPair: return "EqualPair";
    case ErrorCode::PoleOfField: return "PoleOfField";
    case ErrorCode::Uncovered: return "Uncovered";
    case ErrorCode::LiftFailure: return "LiftFailure";
    case ErrorCode::SingleRegion: return "SingleRegion";
    case ErrorCode::InvalidGerm: return "InvalidGerm";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::AmbiguousAssignment: return "AmbiguousAssignment";
    case ErrorCode::WrongCodomain: return "WrongCodomain";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

EuclidPoint::EuclidPoint(Vec coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "point needs at least one coordinate");
  }
  if (!coords_.allFinite()) {
    throw Error(ErrorCode::NonFinite, "point has NaN or Inf coordinates");
  }
}

SpherePoint::SpherePoint(Vec coords, double radius) : coords_(std::move(coords)), radius_(radius) {
  if (coords_.size() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "sphere point needs at least two coordinates");
  }
  if (!coords_.allFinite() || !std::isfinite(radius_)) {
    throw Error(ErrorCode::NonFinite, "sphere point has NaN or Inf coordinates");
  }
  if (!(radius_ > 0.0)) {
    throw Error(ErrorCode::DomainError, "sphere radius must be positive");
  }
  const double dev = std::abs(coords_.norm() - radius_);
  if (dev > tol::norm) {
    throw Error(ErrorCode::NotOnSphere, "norm deviates from radius by " + std::to_string(dev));
  }
}

SpherePoint normalize(const Vec& v) {
  if (!v.allFinite()) {
    throw Error(ErrorCode::NonFinite, "cannot normalize a non-finite vector");
  }
  const double n = v.norm();
  if (n <= tol::zero) {
    throw Error(ErrorCode::ZeroVector, "norm " + std::to_string(n) + " below zero tolerance");
  }
  return SpherePoint(v / n);
}

SpherePoint normalize(const EuclidPoint& v) { return normalize(v.coords()); }

EuclidPoint stereo_proj(const SpherePoint& x) {
  const Eigen::Index m = x.sphere_dim();
  const Vec u = x.coords() / x.radius();
  const double last = u[m];
  if (!(last < 1.0 - tol::pole_margin)) {
    throw Error(ErrorCode::AtPole, "stereographic projection undefined at the north pole");
  }
  return EuclidPoint(u.head(m) / (1.0 - last));
}

SpherePoint stereo_inv(const EuclidPoint& y) {
  const Eigen::Index m = y.dim();
  const double sq = y.coords().squaredNorm();
  const double denom = sq + 1.0;
  Vec out(m + 1);
  out.head(m) = 2.0 * y.coords() / denom;
  out[m] = (sq - 1.0) / denom;
  // q(y) is unit up to a few ulps; rescale so the strict tolerance check holds for huge y.
  return SpherePoint(out / out.norm());
}

EuclidPoint tangent_odd(const SpherePoint& x) {
  const Eigen::Index k = x.coords().size();
  if (k % 2 != 0) {
    throw Error(ErrorCode::OddAmbientDim, "tangent_odd needs an even ambient dimension");
  }
  const Vec& c = x.coords();
  Vec v(k);
  for (Eigen::Index j = 0; j < k; j += 2) {
    v[j] = -c[j + 1];
    v[j + 1] = c[j];
  }
  return EuclidPoint(v);
}

EuclidPoint tangent_even(const SpherePoint& x) {
  const Eigen::Index k = x.coords().size();
  if (k % 2 == 0) {
    throw Error(ErrorCode::EvenAmbientDim, "tangent_even needs an odd ambient dimension");
  }
  const Vec& c = x.coords();
  Vec v = Vec::Zero(k);
  for (Eigen::Index j = 1; j < k; j += 2) {
    v[j] = -c[j + 1];
    v[j + 1] = c[j];
  }
  return EuclidPoint(v);
}

SpherePoint north_pole(Eigen::Index m) { return basis_point(m, m); }

SpherePoint south_pole(Eigen::Index m) { return north_pole(m).antipode(); }

SpherePoint basis_point(Eigen::Index m, Eigen::Index i) {
  Vec v = Vec::Zero(m + 1);
  v[i] = 1.0;
  return SpherePoint(v);
}

double sigma_min(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  return s.size() == 0 ? 0.0 : s[s.size() - 1];
}

}  // namespace tcplan
