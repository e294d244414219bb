#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "tcplan/germ.hpp"
#include "tcplan/path_expr.hpp"
#include "tcplan/work_map.hpp"

namespace tcplan {

inline constexpr double kFiberTol = 1e-9;
inline constexpr double kTubeTol = 1e-9;

/// The Milnor tube fibration B_eps ∩ f^{-1}(S_eta) -> S_eta of a germ, as a work map.
WorkMapPtr tube_fibration(std::shared_ptr<const Germ> germ);

/// Hopf map C^2 -> R^3, (z,w) -> (2 Re(z conj w), 2 Im(z conj w), |z|^2 - |w|^2).
/// Its tube over S^2_eta is the 3-sphere of radius sqrt(eta).
WorkMapPtr hopf_germ(double eta = 0.01, double epsilon = 0.5);

/// A configuration on the tube of a work map with codomain sphere S_eta.
struct TubePoint {
  Vec x;
  Vec fx;
};

/// Checks | |f(x)| - eta | <= 1e-9 and |x| <= eps + 1e-9.
TubePoint make_tube_point(const WorkMap& f, const Vec& x);

/// Uniform point of the closed ball of the given radius in R^n.
Vec random_ball_point(std::mt19937_64& rng, Eigen::Index n, double radius);
/// Uniform point of the unit sphere in R^k.
Vec random_unit_vector(std::mt19937_64& rng, Eigen::Index k);

/// Random tube point: a uniform ball seed Newton-projected onto a random base point.
/// Returns nullopt if `attempts` seeds all fail.
std::optional<TubePoint> random_tube_point(const WorkMap& f, std::mt19937_64& rng, int attempts = 64);

/// t -> rho_{dphi t / d}(x0): covers the base loop eta e^{i(phi0 + dphi t)} exactly.
PathExpr circle_action_lift(const Germ& g, const Vec& x0, double dphi);

/// True when the chord from `a` to `b`, Newton-projected onto f^{-1}(base) at `steps`
/// points, moves continuously and stays inside the ball.
bool fiber_walk(const WorkMap& f, const Vec& base, const Vec& a, const Vec& b, int steps = 32);

struct FiberSample {
  Vec base;
  std::vector<TubePoint> points;
  std::vector<int> labels;
  int components = 0;
  double radius = 0.0;  // longest accepted edge
  int seeds = 0;
  int converged = 0;
};

/// Newton-projects `n_seeds` uniform ball seeds onto f^{-1}(base) and keeps converged points
/// inside the ball. Components come from a graph whose edges are fiber walks between
/// nearest neighbours, then between the closest pairs of distinct components.
FiberSample sample_fiber(const WorkMap& f, const Vec& base, int n_seeds, std::uint64_t seed);
/// Fiber over eta e^{i phi}.
FiberSample sample_fiber(const Germ& g, double phi, int n_seeds, std::uint64_t seed);

struct LinkSample {
  std::vector<Vec> points;
  int seeds = 0;
  TriState evidence = TriState::Unknown;
};

/// Newton projection onto {f = 0, |x| = eps}. Evidence is yes when any seed converges and
/// no when all diverge; the "no" verdict is heuristic.
LinkSample sample_link(const Germ& g, int n_seeds, std::uint64_t seed);

/// Component permutation induced by lifting the full base loop from one representative per
/// component: result[i] is the component reached from component i.
std::vector<int> monodromy_components(const Germ& g, const FiberSample& fs);

/// Number of cycles of each length, e.g. a single d-cycle gives {d: 1}.
std::vector<int> cycle_lengths(const std::vector<int>& permutation);

struct RegularityProbe {
  double min_sigma_df = 0.0;
  double min_sigma_dfr = 0.0;
  int samples = 0;
  bool probably_regular = false;
};

/// Sampled minima of sigma_min(Df) and sigma_min(D(f, |x|^2)) over N tube points.
/// Heuristic only; it never certifies Milnor's conditions.
RegularityProbe regularity_probe(const Germ& g, int n, std::uint64_t seed);
/// Same minima over caller-supplied points.
RegularityProbe probe_points(const Germ& g, const std::vector<Vec>& points);

}  // namespace tcplan
