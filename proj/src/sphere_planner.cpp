#include "tcplan/sphere_planner.hpp"

#include <cmath>

namespace tcplan {

namespace {

void check_pair(const SpherePoint& a, const SpherePoint& b) {
  if (a.coords().size() != b.coords().size()) {
    throw Error(ErrorCode::DimensionMismatch, "query points lie on spheres of different dimension");
  }
  if (a.radius() != 1.0 || b.radius() != 1.0) {
    throw Error(ErrorCode::DomainError, "sphere planners act on the unit sphere");
  }
}

double last_coord(const SpherePoint& x) { return x[x.sphere_dim()]; }

bool clear_of_antipodal(const SpherePoint& a, const SpherePoint& b, double margin) {
  return (a.coords() + b.coords()).norm() >= margin;
}

bool clear_of_diagonal(const SpherePoint& a, const SpherePoint& b, double margin) {
  return (a.coords() - b.coords()).norm() >= margin;
}

bool clear_of_pole(const SpherePoint& x, double margin) { return last_coord(x) <= 1.0 - margin; }

// Zeros of the even tangent field are +-e1.
bool clear_of_field_zeros(const SpherePoint& x, double margin) {
  Vec e1 = Vec::Zero(x.coords().size());
  e1[0] = 1.0;
  return (x.coords() - e1).norm() >= margin && (x.coords() + e1).norm() >= margin;
}

// alpha(a, -a): a -> v(a) -> -a along normalized chords.
PathExpr alpha(const SpherePoint& a, const SpherePoint& b) {
  const Vec v = tangent_odd(a).coords();
  return PathExpr::concat(PathExpr::normalized_segment(a.coords(), v),
                          PathExpr::normalized_segment(v, b.coords()));
}

// beta(a, -a): as alpha with the even field, which is used unnormalized.
PathExpr beta(const SpherePoint& a, const SpherePoint& b) {
  const Vec nu = tangent_even(a).coords();
  return PathExpr::concat(PathExpr::normalized_segment(a.coords(), nu),
                          PathExpr::normalized_segment(nu, b.coords()));
}

}  // namespace

PathExpr s1(const SpherePoint& a, const SpherePoint& b, double margin) {
  check_pair(a, b);
  if (!clear_of_antipodal(a, b, margin)) {
    throw Error(ErrorCode::AntipodalPair, "s1 needs ||a + b|| >= margin");
  }
  return PathExpr::normalized_segment(a.coords(), b.coords());
}

PathExpr s2(const SpherePoint& a, const SpherePoint& b, double margin) {
  check_pair(a, b);
  if (a.coords().size() % 2 != 0) {
    throw Error(ErrorCode::OddAmbientDim, "s2 is defined on odd-dimensional spheres");
  }
  if (!clear_of_diagonal(a, b, margin)) {
    throw Error(ErrorCode::EqualPair, "s2 needs ||a - b|| >= margin");
  }
  const SpherePoint minus_b = b.antipode();
  return PathExpr::concat(s1(a, minus_b, margin), alpha(minus_b, b));
}

PathExpr kappa1(const SpherePoint& a, const SpherePoint& b, double margin) {
  check_pair(a, b);
  if (!clear_of_pole(a, margin) || !clear_of_pole(b, margin)) {
    throw Error(ErrorCode::AtPole, "kappa1 needs both points away from the north pole");
  }
  return PathExpr::stereo_segment(a, b);
}

PathExpr kappa2(const SpherePoint& a, const SpherePoint& b, double margin) { return s1(a, b, margin); }

PathExpr kappa3(const SpherePoint& a, const SpherePoint& b, double margin) {
  check_pair(a, b);
  if (a.coords().size() % 2 == 0) {
    throw Error(ErrorCode::EvenAmbientDim, "kappa3 is defined on even-dimensional spheres");
  }
  if (!clear_of_diagonal(a, b, margin)) {
    throw Error(ErrorCode::EqualPair, "kappa3 needs ||a - b|| >= margin");
  }
  if (!clear_of_field_zeros(b, margin)) {
    throw Error(ErrorCode::PoleOfField, "kappa3 needs the target away from +-e1");
  }
  const SpherePoint minus_b = b.antipode();
  return PathExpr::concat(kappa2(a, minus_b, margin), beta(minus_b, b));
}

SpherePlanner::SpherePlanner(int m, double margin) : m_(m), margin_(margin) {
  const double d = margin;
  if (m % 2 == 1) {
    regions_.push_back({1, "U1",
                        [d](const SpherePoint& a, const SpherePoint& b) { return clear_of_antipodal(a, b, d); },
                        [d](const SpherePoint& a, const SpherePoint& b) { return s1(a, b, d); }});
    regions_.push_back({2, "U2",
                        [d](const SpherePoint& a, const SpherePoint& b) { return clear_of_diagonal(a, b, d); },
                        [d](const SpherePoint& a, const SpherePoint& b) { return s2(a, b, d); }});
  } else {
    regions_.push_back({1, "V1",
                        [d](const SpherePoint& a, const SpherePoint& b) {
                          return clear_of_pole(a, d) && clear_of_pole(b, d);
                        },
                        [d](const SpherePoint& a, const SpherePoint& b) { return kappa1(a, b, d); }});
    regions_.push_back({2, "V2",
                        [d](const SpherePoint& a, const SpherePoint& b) { return clear_of_antipodal(a, b, d); },
                        [d](const SpherePoint& a, const SpherePoint& b) { return kappa2(a, b, d); }});
    regions_.push_back({3, "V3",
                        [d](const SpherePoint& a, const SpherePoint& b) {
                          return clear_of_diagonal(a, b, d) && clear_of_field_zeros(b, d);
                        },
                        [d](const SpherePoint& a, const SpherePoint& b) { return kappa3(a, b, d); }});
  }
}

SpherePlanner::SpherePlanner(int m, double margin, std::vector<Region> regions)
    : m_(m), margin_(margin), regions_(std::move(regions)) {
  if (regions_.size() < 2) {
    throw Error(ErrorCode::SingleRegion, "a planner over a sphere needs at least two regions");
  }
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].index != static_cast<int>(i + 1)) {
      throw Error(ErrorCode::DomainError, "region indices must run 1..k in order");
    }
  }
}

std::optional<int> SpherePlanner::dispatch(const SpherePoint& a, const SpherePoint& b) const {
  check_pair(a, b);
  if (a.sphere_dim() != m_) {
    throw Error(ErrorCode::DimensionMismatch, "query does not lie on S^" + std::to_string(m_));
  }
  for (const Region& r : regions_) {
    if (r.contains(a, b)) return r.index;
  }
  return std::nullopt;
}

PlanResult SpherePlanner::plan(const SpherePoint& a, const SpherePoint& b) const {
  const auto idx = dispatch(a, b);
  if (!idx) throw Error(ErrorCode::Uncovered, "no region contains the query pair");
  return {*idx, regions_[static_cast<std::size_t>(*idx - 1)].algorithm(a, b)};
}

SpherePlanner build_planner(int m, double margin) {
  if (m < 1) throw Error(ErrorCode::DomainError, "sphere dimension must be positive");
  if (!(margin > 0.0 && margin <= 0.1)) {
    throw Error(ErrorCode::BadMargin, "margin must lie in (0, 0.1]");
  }
  return SpherePlanner(m, margin);
}

}  // namespace tcplan
