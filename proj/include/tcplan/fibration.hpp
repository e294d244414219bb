#pragma once

#include <optional>

#include "tcplan/path_expr.hpp"
#include "tcplan/sphere_planner.hpp"
#include "tcplan/work_map.hpp"

namespace tcplan {

/// Homotopy-lifting oracle: given e and a base path gamma with f(e) = gamma(0), produces
/// lambda with lambda(0) = e and f(lambda(t)) = gamma(t).
struct LiftingOracle {
  enum class Kind { ExactCircleAction, NumericContinuation };

  Kind kind = Kind::ExactCircleAction;
  // Continuation parameters; unused by the exact kind.
  int table_knots = 256;
  double newton_tol = 1e-12;
  int max_newton_iter = 8;
  int max_halvings = 30;
  // Floors on sigma_min(Df) / sigma_max(Df): at the start and goal configurations, and
  // along the rest of the path.
  double endpoint_conditioning = 1e-3;
  double transit_conditioning = 1e-8;

  static LiftingOracle exact() { return {}; }
  static LiftingOracle numeric() {
    LiftingOracle o;
    o.kind = Kind::NumericContinuation;
    return o;
  }

  /// 1e-12 for the exact kind, 1e-6 for continuation.
  double lift_tol() const { return kind == Kind::ExactCircleAction ? 1e-12 : 1e-6; }
};

std::string_view to_string(LiftingOracle::Kind kind);

/// Lifts gamma through f starting at e. Throws LiftFailure when continuation breaks down.
PathExpr lift(const LiftingOracle& oracle, const WorkMapPtr& f, const Vec& e, const PathExpr& gamma);

/// Torus-to-sphere work map of the planar RR arm, (alpha, beta) ->
/// (cos a cos b, cos a sin b, sin a), onto the unit sphere.
WorkMapPtr rr_arm_workmap();

struct TaskingPlan {
  int region = 0;
  PathExpr base_path;  // on S^{p-1}_eta
  PathExpr path;       // in the configuration space
};

/// Tasking planner pulled back from a sphere planner through f: region i holds (e, w)
/// when the base region i holds (f(e)/|f(e)|, w/eta).
class TaskingPlanner {
 public:
  TaskingPlanner(WorkMapPtr f, SpherePlanner base, LiftingOracle oracle);

  const WorkMap& work_map() const noexcept { return *f_; }
  const WorkMapPtr& work_map_ptr() const noexcept { return f_; }
  const SpherePlanner& base() const noexcept { return base_; }
  const LiftingOracle& oracle() const noexcept { return oracle_; }
  double eta() const noexcept { return *f_->eta; }
  std::size_t region_count() const noexcept { return base_.region_count(); }

  /// Base points (f(e)/|f(e)|, w/eta) on the unit sphere.
  std::pair<SpherePoint, SpherePoint> base_query(const Vec& e, const Vec& w) const;
  std::optional<int> dispatch(const Vec& e, const Vec& w) const;
  bool contains(int region, const Vec& e, const Vec& w) const;
  /// Local algorithm of a fixed region; the query must lie in that region.
  TaskingPlan algorithm(int region, const Vec& e, const Vec& w) const;
  /// Minimal-index dispatch followed by that region's algorithm.
  TaskingPlan plan(const Vec& e, const Vec& w) const;

 private:
  WorkMapPtr f_;
  SpherePlanner base_;
  LiftingOracle oracle_;
};

TaskingPlanner pullback_planner(WorkMapPtr f, SpherePlanner base, LiftingOracle oracle);

}  // namespace tcplan
