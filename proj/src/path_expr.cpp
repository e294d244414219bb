#include "tcplan/path_expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace tcplan {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double check_time(double t) {
  if (!(t >= -tol::domain && t <= 1.0 + tol::domain)) {
    throw Error(ErrorCode::DomainError, "path parameter " + std::to_string(t) + " outside [0,1]");
  }
  return std::clamp(t, 0.0, 1.0);
}

// Closed-form minimum of ||(1-t)a + t b|| over t in [0,1].
double segment_min_norm(const Vec& a, const Vec& b) {
  const Vec d = b - a;
  const double dd = d.squaredNorm();
  if (dd == 0.0) return a.norm();
  const double t = std::clamp(-a.dot(d) / dd, 0.0, 1.0);
  return (a + t * d).norm();
}

Vec rotate_by_weights(const std::vector<int>& weights, const Vec& x, double theta) {
  Vec out(x.size());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double phase = static_cast<double>(weights[j]) * theta;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const auto re = static_cast<Eigen::Index>(2 * j);
    out[re] = c * x[re] - s * x[re + 1];
    out[re + 1] = s * x[re] + c * x[re + 1];
  }
  return out;
}

Vec to_vec(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

nlohmann::json from_vec(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

std::string_view to_string(PathExpr::Kind kind) {
  switch (kind) {
    case PathExpr::Kind::Constant: return "constant";
    case PathExpr::Kind::NormalizedSegment: return "normalized_segment";
    case PathExpr::Kind::StereoSegment: return "stereo_segment";
    case PathExpr::Kind::Concat: return "concat";
    case PathExpr::Kind::Scaled: return "scaled";
    case PathExpr::Kind::CircleActionLift: return "circle_action_lift";
    case PathExpr::Kind::NumericLift: return "numeric_lift";
  }
  return "unknown";
}

PathExpr PathExpr::constant(const Vec& point) {
  EuclidPoint checked(point);
  return PathExpr(std::make_shared<PathNode>(PathNode{node::Constant{checked.coords()}}));
}

PathExpr PathExpr::normalized_segment(const Vec& a, const Vec& b) {
  EuclidPoint ca(a);
  EuclidPoint cb(b);
  if (ca.dim() != cb.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "segment endpoints differ in dimension");
  }
  const double m = segment_min_norm(a, b);
  if (!(m > tol::zero)) {
    throw Error(ErrorCode::DegenerateSegment, "segment passes through the origin");
  }
  return PathExpr(std::make_shared<PathNode>(PathNode{node::NormalizedSegment{a, b}}));
}

PathExpr PathExpr::stereo_segment(const SpherePoint& a, const SpherePoint& b) {
  if (a.coords().size() != b.coords().size()) {
    throw Error(ErrorCode::DimensionMismatch, "segment endpoints differ in dimension");
  }
  if (a.radius() != 1.0 || b.radius() != 1.0) {
    throw Error(ErrorCode::DomainError, "stereographic segments live on the unit sphere");
  }
  Vec ya = stereo_proj(a).coords();
  Vec yb = stereo_proj(b).coords();
  return PathExpr(std::make_shared<PathNode>(
      PathNode{node::StereoSegment{a.coords(), b.coords(), std::move(ya), std::move(yb)}}));
}

PathExpr PathExpr::concat(PathExpr left, PathExpr right) {
  if (left.dim() != right.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "concatenated paths differ in dimension");
  }
  const double gap = (left.end() - right.start()).norm();
  if (gap > tol::junction) {
    throw Error(ErrorCode::JunctionMismatch, "junction gap " + std::to_string(gap));
  }
  return PathExpr(
      std::make_shared<PathNode>(PathNode{node::Concat{std::move(left), std::move(right)}}));
}

PathExpr PathExpr::scaled(double factor, PathExpr child) {
  if (!std::isfinite(factor)) throw Error(ErrorCode::NonFinite, "scale factor must be finite");
  return PathExpr(std::make_shared<PathNode>(PathNode{node::Scaled{factor, std::move(child)}}));
}

PathExpr PathExpr::circle_action_lift(std::vector<int> weights, int degree, const Vec& start,
                                      double angle_delta, std::optional<PathExpr> base) {
  EuclidPoint checked(start);
  if (degree <= 0) throw Error(ErrorCode::InvalidGerm, "degree must be positive");
  if (static_cast<Eigen::Index>(2 * weights.size()) != checked.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "start point must have 2 real coordinates per weight");
  }
  if (!std::isfinite(angle_delta)) throw Error(ErrorCode::NonFinite, "angle delta must be finite");
  if (base && base->dim() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "circle-action base path must be planar");
  }
  return PathExpr(std::make_shared<PathNode>(PathNode{
      node::CircleActionLift{std::move(weights), degree, start, angle_delta, std::move(base)}}));
}

PathExpr PathExpr::numeric_lift(WorkMapPtr map, PathExpr base, std::vector<double> knots_t,
                                std::vector<Vec> knots_x, RefineOptions refine) {
  if (!map) throw Error(ErrorCode::DomainError, "numeric lift needs a work map");
  if (knots_t.size() < 2 || knots_t.size() != knots_x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "numeric lift table is malformed");
  }
  if (knots_t.front() != 0.0 || knots_t.back() != 1.0 ||
      !std::is_sorted(knots_t.begin(), knots_t.end())) {
    throw Error(ErrorCode::DomainError, "numeric lift knots must increase from 0 to 1");
  }
  for (const Vec& x : knots_x) {
    if (x.size() != map->domain_dim || !x.allFinite()) {
      throw Error(ErrorCode::DimensionMismatch, "numeric lift knot has the wrong shape");
    }
  }
  return PathExpr(std::make_shared<PathNode>(PathNode{node::NumericLift{
      std::move(map), std::move(base), std::move(knots_t), std::move(knots_x), refine}}));
}

PathExpr::Kind PathExpr::kind() const { return static_cast<Kind>(node_->value.index()); }

Eigen::Index PathExpr::dim() const {
  return std::visit(overloaded{
                        [](const node::Constant& n) { return n.point.size(); },
                        [](const node::NormalizedSegment& n) { return n.a.size(); },
                        [](const node::StereoSegment& n) { return n.a.size(); },
                        [](const node::Concat& n) { return n.left.dim(); },
                        [](const node::Scaled& n) { return n.child.dim(); },
                        [](const node::CircleActionLift& n) { return n.start.size(); },
                        [](const node::NumericLift& n) { return n.map->domain_dim; },
                    },
                    node_->value);
}

Vec PathExpr::eval(double t_in) const {
  const double t = check_time(t_in);
  return std::visit(
      overloaded{
          [](const node::Constant& n) -> Vec { return n.point; },
          [t](const node::NormalizedSegment& n) -> Vec {
            const Vec p = (1.0 - t) * n.a + t * n.b;
            return p / p.norm();
          },
          [t](const node::StereoSegment& n) -> Vec {
            return stereo_inv(EuclidPoint((1.0 - t) * n.chart_a + t * n.chart_b)).coords();
          },
          [t](const node::Concat& n) -> Vec {
            return t <= 0.5 ? n.left.eval(2.0 * t) : n.right.eval(2.0 * t - 1.0);
          },
          [t](const node::Scaled& n) -> Vec { return n.factor * n.child.eval(t); },
          [t](const node::CircleActionLift& n) -> Vec {
            const double total = n.base ? planar_unwrapped_angle(*n.base, t) : n.angle_delta * t;
            return rotate_by_weights(n.weights, n.start, total / n.degree);
          },
          [t](const node::NumericLift& n) -> Vec {
            const auto it = std::lower_bound(n.knots_t.begin(), n.knots_t.end(), t);
            const auto k = static_cast<std::size_t>(it - n.knots_t.begin());
            if (it != n.knots_t.end() && *it == t) return n.knots_x[k];
            const double t0 = n.knots_t[k - 1];
            const double t1 = n.knots_t[k];
            const double s = (t - t0) / (t1 - t0);
            Vec guess = (1.0 - s) * n.knots_x[k - 1] + s * n.knots_x[k];
            const Vec target = n.base.eval(t);
            const double guess_res = (n.map->eval(guess) - target).norm();
            NewtonResult r = newton_project(*n.map, guess, target, {n.refine.tol, n.refine.max_iter});
            return r.x.allFinite() && r.residual <= guess_res ? r.x : guess;
          },
      },
      node_->value);
}

double planar_unwrapped_angle(const PathExpr& path, double t_in) {
  const double t = check_time(t_in);
  if (path.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "angle unwrapping needs a planar path");
  return std::visit(
      overloaded{
          [](const node::Constant&) { return 0.0; },
          [t](const node::NormalizedSegment& n) {
            // The chord never meets the origin, so the swept angle stays inside (-pi, pi).
            const Vec p = (1.0 - t) * n.a + t * n.b;
            return std::atan2(n.a[0] * p[1] - n.a[1] * p[0], n.a.dot(p));
          },
          [t](const node::StereoSegment& n) {
            // On S^1 the chart inverse sends y to the point at angle 2 atan(y) - pi/2.
            const double y = (1.0 - t) * n.chart_a[0] + t * n.chart_b[0];
            return 2.0 * (std::atan(y) - std::atan(n.chart_a[0]));
          },
          [t](const node::Concat& n) {
            if (t <= 0.5) return planar_unwrapped_angle(n.left, 2.0 * t);
            return planar_unwrapped_angle(n.left, 1.0) + planar_unwrapped_angle(n.right, 2.0 * t - 1.0);
          },
          [t](const node::Scaled& n) { return planar_unwrapped_angle(n.child, t); },
          [](const node::CircleActionLift&) -> double {
            throw Error(ErrorCode::DomainError, "lifted paths have no planar angle");
          },
          [](const node::NumericLift&) -> double {
            throw Error(ErrorCode::DomainError, "lifted paths have no planar angle");
          },
      },
      path.node().value);
}

nlohmann::json PathExpr::to_json() const {
  using nlohmann::json;
  json j;
  j["kind"] = std::string(to_string(kind()));
  std::visit(overloaded{
                 [&](const node::Constant& n) { j["point"] = from_vec(n.point); },
                 [&](const node::NormalizedSegment& n) {
                   j["a"] = from_vec(n.a);
                   j["b"] = from_vec(n.b);
                 },
                 [&](const node::StereoSegment& n) {
                   j["a"] = from_vec(n.a);
                   j["b"] = from_vec(n.b);
                 },
                 [&](const node::Concat& n) {
                   j["left"] = n.left.to_json();
                   j["right"] = n.right.to_json();
                 },
                 [&](const node::Scaled& n) {
                   j["factor"] = n.factor;
                   j["path"] = n.child.to_json();
                 },
                 [&](const node::CircleActionLift& n) {
                   j["weights"] = n.weights;
                   j["degree"] = n.degree;
                   j["start"] = from_vec(n.start);
                   j["angle_delta"] = n.base ? planar_unwrapped_angle(*n.base, 1.0) : n.angle_delta;
                   j["base"] = n.base ? n.base->to_json() : json(nullptr);
                 },
                 [&](const node::NumericLift& n) {
                   j["map"] = n.map->name;
                   j["base"] = n.base.to_json();
                   j["knots_t"] = n.knots_t;
                   json xs = json::array();
                   for (const Vec& x : n.knots_x) xs.push_back(from_vec(x));
                   j["knots_x"] = std::move(xs);
                   j["refine"] = {{"tol", n.refine.tol}, {"max_iter", n.refine.max_iter}};
                 },
             },
             node_->value);
  return j;
}

PathExpr PathExpr::from_json(const nlohmann::json& j, const MapResolver& resolver) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(to_vec(j.at("point")));
    if (kind == "normalized_segment") return normalized_segment(to_vec(j.at("a")), to_vec(j.at("b")));
    if (kind == "stereo_segment") {
      return stereo_segment(SpherePoint(to_vec(j.at("a"))), SpherePoint(to_vec(j.at("b"))));
    }
    if (kind == "concat") return concat(from_json(j.at("left"), resolver), from_json(j.at("right"), resolver));
    if (kind == "scaled") return scaled(j.at("factor").get<double>(), from_json(j.at("path"), resolver));
    if (kind == "circle_action_lift") {
      std::optional<PathExpr> base;
      if (j.contains("base") && !j.at("base").is_null()) base = from_json(j.at("base"), resolver);
      return circle_action_lift(j.at("weights").get<std::vector<int>>(), j.at("degree").get<int>(),
                                to_vec(j.at("start")), j.at("angle_delta").get<double>(),
                                std::move(base));
    }
    if (kind == "numeric_lift") {
      const std::string name = j.at("map").get<std::string>();
      WorkMapPtr map = resolver ? resolver(name) : nullptr;
      if (!map) throw Error(ErrorCode::Parse, "no work map named '" + name + "'");
      std::vector<Vec> xs;
      for (const auto& x : j.at("knots_x")) xs.push_back(to_vec(x));
      RefineOptions refine;
      if (j.contains("refine")) {
        refine.tol = j.at("refine").at("tol").get<double>();
        refine.max_iter = j.at("refine").at("max_iter").get<int>();
      }
      return numeric_lift(std::move(map), from_json(j.at("base"), resolver),
                          j.at("knots_t").get<std::vector<double>>(), std::move(xs), refine);
    }
    throw Error(ErrorCode::Parse, "unknown path kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

void write_samples_csv(std::ostream& os, const PathExpr& path, int samples) {
  if (samples < 2) throw Error(ErrorCode::DomainError, "need at least two samples");
  os << 't';
  for (Eigen::Index i = 0; i < path.dim(); ++i) os << ",x" << (i + 1);
  os << '\n';
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const Vec x = path.eval(t);
    os << format_double(t);
    for (Eigen::Index k = 0; k < x.size(); ++k) os << ',' << format_double(x[k]);
    os << '\n';
  }
}

}  // namespace tcplan
