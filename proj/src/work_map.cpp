#include "tcplan/work_map.hpp"

#include <Eigen/QR>
#include <cmath>

namespace tcplan {

Mat finite_difference_jacobian(const WorkMap& f, const Vec& x, double h) {
  Mat jac(f.codomain_dim, f.domain_dim);
  Vec xp = x;
  Vec xm = x;
  for (Eigen::Index j = 0; j < f.domain_dim; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    jac.col(j) = (f.eval(xp) - f.eval(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return jac;
}

Vec min_norm_solve(const Mat& jac, const Vec& rhs) {
  return jac.completeOrthogonalDecomposition().solve(rhs);
}

NewtonResult newton_project(const std::function<Vec(const Vec&)>& eval,
                            const std::function<Mat(const Vec&)>& jacobian, Vec x,
                            const Vec& target, const NewtonOptions& opts) {
  NewtonResult out;
  Vec r = eval(x) - target;
  out.residual = r.norm();
  for (int it = 0; it < opts.max_iter; ++it) {
    if (out.residual <= opts.tol) {
      out.converged = true;
      break;
    }
    x -= min_norm_solve(jacobian(x), r);
    if (!x.allFinite()) break;
    r = eval(x) - target;
    out.residual = r.norm();
    out.iterations = it + 1;
  }
  if (!out.converged && out.residual <= opts.tol && x.allFinite()) out.converged = true;
  out.x = std::move(x);
  return out;
}

NewtonResult newton_project(const WorkMap& f, Vec x, const Vec& target, const NewtonOptions& opts) {
  return newton_project(f.eval, f.jacobian, std::move(x), target, opts);
}

NewtonResult polish_to_tube(const WorkMap& f, Vec x, const NewtonOptions& opts) {
  const double eta = f.eta.value_or(1.0);
  const Vec fx = f.eval(x);
  const double n = fx.norm();
  if (n <= tol::zero) {
    NewtonResult bad;
    bad.x = std::move(x);
    bad.residual = eta;
    return bad;
  }
  return newton_project(f, std::move(x), eta * fx / n, opts);
}

}  // namespace tcplan
