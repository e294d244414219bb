#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tcplan/geometry.hpp"
#include "tcplan/path_expr.hpp"

namespace tcplan {

inline constexpr double kDefaultMargin = 0.05;

// Local algorithms on the unit sphere S^m. `margin` is the distance by which a pair must
// clear the excluded set of the algorithm's open domain.

/// Normalized chord; requires ||a + b|| >= margin.
PathExpr s1(const SpherePoint& a, const SpherePoint& b, double margin = kDefaultMargin);
/// Through -b and the tangent waypoint v(-b); m odd, requires ||a - b|| >= margin.
PathExpr s2(const SpherePoint& a, const SpherePoint& b, double margin = kDefaultMargin);
/// Straight line in the north-pole chart; both last coordinates <= 1 - margin.
PathExpr kappa1(const SpherePoint& a, const SpherePoint& b, double margin = kDefaultMargin);
PathExpr kappa2(const SpherePoint& a, const SpherePoint& b, double margin = kDefaultMargin);
/// Through -b and nu(-b); m even, requires ||a - b|| >= margin and ||b -+ e1|| >= margin.
PathExpr kappa3(const SpherePoint& a, const SpherePoint& b, double margin = kDefaultMargin);

struct Region {
  int index = 0;  // 1-based dispatch order
  std::string name;
  std::function<bool(const SpherePoint&, const SpherePoint&)> contains;
  std::function<PathExpr(const SpherePoint&, const SpherePoint&)> algorithm;
};

struct PlanResult {
  int region = 0;
  PathExpr path;
};

/// Optimal motion planner on S^m: two regions for odd m, three for even m.
class SpherePlanner {
 public:
  SpherePlanner(int m, double margin);
  /// Custom region list. A sphere is not contractible, so fewer than two regions is
  /// rejected with SingleRegion.
  SpherePlanner(int m, double margin, std::vector<Region> regions);

  int dim() const noexcept { return m_; }
  double margin() const noexcept { return margin_; }
  const std::vector<Region>& regions() const noexcept { return regions_; }
  std::size_t region_count() const noexcept { return regions_.size(); }

  /// Minimal 1-based index whose membership holds, if any.
  std::optional<int> dispatch(const SpherePoint& a, const SpherePoint& b) const;
  /// Throws Uncovered when no region contains the pair.
  PlanResult plan(const SpherePoint& a, const SpherePoint& b) const;

 private:
  int m_;
  double margin_;
  std::vector<Region> regions_;
};

/// Validates 1 <= m and 0 < margin <= 0.1.
SpherePlanner build_planner(int m, double margin = kDefaultMargin);

/// TC(S^m): 2 for odd m, 3 for even m.
constexpr int sphere_tc(int m) { return m % 2 == 1 ? 2 : 3; }

}  // namespace tcplan
