#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "tcplan/geometry.hpp"
#include "tcplan/work_map.hpp"

namespace tcplan {

struct PathNode;

/// Newton refinement used when a tabulated lift is evaluated between knots.
struct RefineOptions {
  double tol = 1e-13;
  int max_iter = 20;
};

/// Immutable expression tree describing a path [0,1] -> R^k.
///
/// Nodes are shared, so copying a PathExpr is cheap. Every factory validates the
/// node's invariants; a constructed PathExpr is always evaluable on [0,1].
class PathExpr {
 public:
  enum class Kind { Constant, NormalizedSegment, StereoSegment, Concat, Scaled, CircleActionLift, NumericLift };

  static PathExpr constant(const Vec& point);
  /// t -> ((1-t)a + t b) / ||(1-t)a + t b||. Neither endpoint needs unit norm, but the
  /// segment must stay away from the origin.
  static PathExpr normalized_segment(const Vec& a, const Vec& b);
  /// t -> q((1-t) p(a) + t p(b)) through the north-pole stereographic chart.
  static PathExpr stereo_segment(const SpherePoint& a, const SpherePoint& b);
  /// Runs `left` on [0,1/2] and `right` on [1/2,1].
  static PathExpr concat(PathExpr left, PathExpr right);
  static PathExpr scaled(double factor, PathExpr child);
  /// t -> rho_{theta(t)}(start) with rho_theta(z)_j = e^{i w_j theta} z_j. theta(t) is
  /// angle_delta * t / degree, or, when `base` is given, the unwrapped argument of the
  /// planar base path divided by the degree.
  static PathExpr circle_action_lift(std::vector<int> weights, int degree, const Vec& start,
                                     double angle_delta, std::optional<PathExpr> base = std::nullopt);
  /// Tabulated solution of f(x(t)) = base(t); off-knot evaluation interpolates and
  /// Newton-refines onto the level set.
  static PathExpr numeric_lift(WorkMapPtr map, PathExpr base, std::vector<double> knots_t,
                               std::vector<Vec> knots_x, RefineOptions refine = RefineOptions{});

  Kind kind() const;
  const PathNode& node() const { return *node_; }
  Eigen::Index dim() const;

  Vec eval(double t) const;
  Vec operator()(double t) const { return eval(t); }
  Vec start() const { return eval(0.0); }
  Vec end() const { return eval(1.0); }

  nlohmann::json to_json() const;
  using MapResolver = std::function<WorkMapPtr(const std::string&)>;
  static PathExpr from_json(const nlohmann::json& j, const MapResolver& resolver = {});

 private:
  explicit PathExpr(std::shared_ptr<const PathNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const PathNode> node_;
};

namespace node {
struct Constant {
  Vec point;
};
struct NormalizedSegment {
  Vec a;
  Vec b;
};
struct StereoSegment {
  Vec a;
  Vec b;
  Vec chart_a;
  Vec chart_b;
};
struct Concat {
  PathExpr left;
  PathExpr right;
};
struct Scaled {
  double factor;
  PathExpr child;
};
struct CircleActionLift {
  std::vector<int> weights;
  int degree;
  Vec start;
  double angle_delta;
  std::optional<PathExpr> base;
};
struct NumericLift {
  WorkMapPtr map;
  PathExpr base;
  std::vector<double> knots_t;
  std::vector<Vec> knots_x;
  RefineOptions refine;
};
}  // namespace node

struct PathNode {
  std::variant<node::Constant, node::NormalizedSegment, node::StereoSegment, node::Concat,
               node::Scaled, node::CircleActionLift, node::NumericLift>
      value;
};

std::string_view to_string(PathExpr::Kind kind);

/// Continuous argument of a planar path relative to its start point, at time t.
/// Defined for the geometric node kinds on R^2 minus the origin.
double planar_unwrapped_angle(const PathExpr& path, double t);

/// CSV with header `t,x1,...,xk` and `samples` rows at t = i/(samples-1).
void write_samples_csv(std::ostream& os, const PathExpr& path, int samples);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace tcplan
