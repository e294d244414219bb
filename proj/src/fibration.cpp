#include "tcplan/fibration.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "tcplan/germ.hpp"
#include "tcplan/milnor.hpp"

namespace tcplan {

namespace {

double conditioning(const Mat& jac) {
  Eigen::JacobiSVD<Mat> svd(jac);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

// Predictor-corrector continuation of f(x(t)) = gamma(t) with a dense table of
// `table_knots` uniform knots plus every accepted intermediate step.
PathExpr track(const LiftingOracle& o, const WorkMapPtr& f, const Vec& e, const PathExpr& gamma) {
  const int knots = o.table_knots;
  if (knots < 1) throw Error(ErrorCode::DomainError, "lift table needs at least one interval");
  const double h_max = 1.0 / knots;

  std::vector<double> ts{0.0};
  std::vector<Vec> xs{e};
  Vec x = e;
  double t = 0.0;
  double h = h_max;

  if (conditioning(f->jacobian(x)) < o.endpoint_conditioning) {
    throw LiftFailure(0.0, "start configuration is near singular");
  }

  // Returns the corrected point, or nullopt if the step should be halved.
  auto attempt = [&](double t_next) -> std::optional<Vec> {
    const Vec target = gamma.eval(t_next);
    // Minimum-norm tangent step towards the next base point.
    const Vec dx = min_norm_solve(f->jacobian(x), target - f->eval(x));
    const Vec predicted = x + dx;
    Vec y = predicted;
    double res = (f->eval(y) - target).norm();
    for (int it = 0; it < o.max_newton_iter && res > o.newton_tol; ++it) {
      y -= min_norm_solve(f->jacobian(y), f->eval(y) - target);
      const double next = (f->eval(y) - target).norm();
      if (!std::isfinite(next) || !(next < res)) return std::nullopt;
      res = next;
    }
    if (!(res <= o.newton_tol)) return std::nullopt;
    // A corrector much longer than the predictor has jumped to another sheet.
    if ((y - predicted).norm() > 0.5 * dx.norm() + 1e-10 * (1.0 + x.norm())) return std::nullopt;
    if (f->ball_radius && y.norm() > *f->ball_radius + kTubeTol) {
      throw LiftFailure(t_next, "lift leaves the Milnor ball");
    }
    if (conditioning(f->jacobian(y)) < o.transit_conditioning) {
      throw LiftFailure(t_next, "Jacobian is near singular");
    }
    return y;
  };

  for (int k = 1; k <= knots; ++k) {
    const double t_knot = static_cast<double>(k) / knots;
    int halvings = 0;
    while (t < t_knot) {
      double t_next = t + h;
      if (t_next >= t_knot - 1e-15) t_next = t_knot;
      if (auto y = attempt(t_next)) {
        x = std::move(*y);
        t = t_next;
        if (t < t_knot) {
          ts.push_back(t);
          xs.push_back(x);
        }
        h = std::min(2.0 * h, h_max);
      } else {
        if (++halvings > o.max_halvings) throw LiftFailure(t, "Newton corrector did not converge");
        h *= 0.5;
      }
    }
    ts.push_back(t_knot);
    xs.push_back(x);
  }
  if (conditioning(f->jacobian(x)) < o.endpoint_conditioning) {
    throw LiftFailure(1.0, "goal configuration is near singular");
  }
  return PathExpr::numeric_lift(f, gamma, std::move(ts), std::move(xs));
}

}  // namespace

std::string_view to_string(LiftingOracle::Kind kind) {
  return kind == LiftingOracle::Kind::ExactCircleAction ? "exact_circle_action" : "numeric_continuation";
}

PathExpr lift(const LiftingOracle& oracle, const WorkMapPtr& f, const Vec& e, const PathExpr& gamma) {
  if (!f) throw Error(ErrorCode::DomainError, "lift needs a work map");
  if (e.size() != f->domain_dim || gamma.dim() != f->codomain_dim) {
    throw Error(ErrorCode::DimensionMismatch, "lift arguments do not match the work map");
  }
  const double gap = (f->eval(e) - gamma.start()).norm();
  if (gap > 10.0 * oracle.lift_tol()) {
    throw Error(ErrorCode::DomainError, "f(e) misses the base path start by " + std::to_string(gap));
  }
  if (oracle.kind == LiftingOracle::Kind::ExactCircleAction) {
    if (!f->germ) throw Error(ErrorCode::DomainError, "exact lifting needs a weighted-homogeneous germ");
    return PathExpr::circle_action_lift(f->germ->weights(), f->germ->degree(), e, 0.0, gamma);
  }
  return track(oracle, f, e, gamma);
}

WorkMapPtr rr_arm_workmap() {
  auto f = std::make_shared<WorkMap>();
  f->name = "rr_arm";
  f->domain_dim = 2;
  f->codomain_dim = 3;
  f->eval = [](const Vec& q) {
    Vec out(3);
    out << std::cos(q[0]) * std::cos(q[1]), std::cos(q[0]) * std::sin(q[1]), std::sin(q[0]);
    return out;
  };
  f->jacobian = [](const Vec& q) {
    const double ca = std::cos(q[0]), sa = std::sin(q[0]);
    const double cb = std::cos(q[1]), sb = std::sin(q[1]);
    Mat j(3, 2);
    j << -sa * cb, -ca * sb,
        -sa * sb, ca * cb,
        ca, 0.0;
    return j;
  };
  f->eta = 1.0;
  return f;
}

TaskingPlanner::TaskingPlanner(WorkMapPtr f, SpherePlanner base, LiftingOracle oracle)
    : f_(std::move(f)), base_(std::move(base)), oracle_(oracle) {
  if (!f_) throw Error(ErrorCode::DomainError, "tasking planner needs a work map");
  if (!f_->eta) throw Error(ErrorCode::WrongCodomain, "work map has no base sphere");
  if (base_.dim() + 1 != f_->codomain_dim) {
    throw Error(ErrorCode::WrongCodomain, "base planner sphere does not match the codomain");
  }
  if (base_.region_count() < 2) {
    throw Error(ErrorCode::SingleRegion, "a planner over a sphere needs at least two regions");
  }
  if (oracle_.kind == LiftingOracle::Kind::ExactCircleAction && !f_->germ) {
    throw Error(ErrorCode::DomainError, "exact lifting needs a weighted-homogeneous germ");
  }
}

std::pair<SpherePoint, SpherePoint> TaskingPlanner::base_query(const Vec& e, const Vec& w) const {
  const TubePoint tp = make_tube_point(*f_, e);
  if (w.size() != f_->codomain_dim) throw Error(ErrorCode::DimensionMismatch, "goal has the wrong dimension");
  const double dev = std::abs(w.norm() - eta());
  if (dev > kTubeTol) throw Error(ErrorCode::NotOnSphere, "goal is off the base sphere by " + std::to_string(dev));
  return {normalize(tp.fx), normalize(w)};
}

std::optional<int> TaskingPlanner::dispatch(const Vec& e, const Vec& w) const {
  const auto [a, b] = base_query(e, w);
  return base_.dispatch(a, b);
}

bool TaskingPlanner::contains(int region, const Vec& e, const Vec& w) const {
  if (region < 1 || region > static_cast<int>(region_count())) return false;
  const auto [a, b] = base_query(e, w);
  return base_.regions()[static_cast<std::size_t>(region - 1)].contains(a, b);
}

TaskingPlan TaskingPlanner::algorithm(int region, const Vec& e, const Vec& w) const {
  if (!contains(region, e, w)) {
    throw Error(ErrorCode::Uncovered, "query is outside region " + std::to_string(region));
  }
  const auto [a, b] = base_query(e, w);
  PathExpr unit = base_.regions()[static_cast<std::size_t>(region - 1)].algorithm(a, b);
  PathExpr base_path = PathExpr::scaled(eta(), std::move(unit));
  PathExpr path = lift(oracle_, f_, e, base_path);
  return {region, std::move(base_path), std::move(path)};
}

TaskingPlan TaskingPlanner::plan(const Vec& e, const Vec& w) const {
  const auto idx = dispatch(e, w);
  if (!idx) throw Error(ErrorCode::Uncovered, "no region contains the query pair");
  return algorithm(*idx, e, w);
}

TaskingPlanner pullback_planner(WorkMapPtr f, SpherePlanner base, LiftingOracle oracle) {
  return TaskingPlanner(std::move(f), std::move(base), oracle);
}

}  // namespace tcplan
