#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "tcplan/geometry.hpp"

namespace tcplan {

class Germ;

/// A smooth map f: R^n -> R^p with an analytic Jacobian.
///
/// When `eta` is set the map is treated as a work map onto the sphere S^{p-1}_eta
/// (a tube fibration, or the RR arm with eta = 1). `ball_radius` bounds the admissible
/// configurations (the Milnor ball); it is unset for maps defined on all of R^n.
struct WorkMap {
  std::string name;
  Eigen::Index domain_dim = 0;
  Eigen::Index codomain_dim = 0;
  std::function<Vec(const Vec&)> eval;
  std::function<Mat(const Vec&)> jacobian;
  std::optional<double> eta;
  std::optional<double> ball_radius;
  // Set for tube fibrations of weighted-homogeneous germs; enables exact lifting.
  std::shared_ptr<const Germ> germ;

  Vec operator()(const Vec& x) const { return eval(x); }
};

using WorkMapPtr = std::shared_ptr<const WorkMap>;

/// Central finite-difference Jacobian, used as an independent check of `jacobian`.
Mat finite_difference_jacobian(const WorkMap& f, const Vec& x, double h = 1e-6);

/// Minimum-norm least-squares solution of J dx = r.
Vec min_norm_solve(const Mat& jac, const Vec& rhs);

struct NewtonOptions {
  double tol = 1e-13;
  int max_iter = 60;
};

struct NewtonResult {
  Vec x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Gauss-Newton with minimum-norm updates onto {x : F(x) = target}.
NewtonResult newton_project(const std::function<Vec(const Vec&)>& eval,
                            const std::function<Mat(const Vec&)>& jacobian, Vec x,
                            const Vec& target, const NewtonOptions& opts = {});

NewtonResult newton_project(const WorkMap& f, Vec x, const Vec& target,
                            const NewtonOptions& opts = {});

/// Projects x onto the tube f^{-1}(S_eta) by targeting eta * f(x)/|f(x)|.
NewtonResult polish_to_tube(const WorkMap& f, Vec x, const NewtonOptions& opts = {});

}  // namespace tcplan
