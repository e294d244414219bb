#include "tcplan/milnor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <map>
#include <set>
#include <tuple>

namespace tcplan {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

double ball_of(const WorkMap& f) { return f.ball_radius.value_or(1.0); }

}  // namespace

WorkMapPtr tube_fibration(std::shared_ptr<const Germ> germ) {
  auto f = std::make_shared<WorkMap>();
  f->name = "germ:" + germ->name();
  f->domain_dim = germ->real_dim();
  f->codomain_dim = 2;
  f->eval = [g = germ](const Vec& x) { return g->eval(x); };
  f->jacobian = [g = germ](const Vec& x) { return g->jacobian(x); };
  f->eta = germ->eta();
  f->ball_radius = germ->epsilon();
  f->germ = std::move(germ);
  return f;
}

WorkMapPtr hopf_germ(double eta, double epsilon) {
  if (!(eta > 0.0) || !(epsilon > 0.0) || std::sqrt(eta) >= epsilon) {
    throw Error(ErrorCode::DomainError, "Hopf tube needs 0 < sqrt(eta) < epsilon");
  }
  auto f = std::make_shared<WorkMap>();
  f->name = "hopf";
  f->domain_dim = 4;
  f->codomain_dim = 3;
  f->eval = [](const Vec& x) {
    Vec out(3);
    out << 2.0 * (x[0] * x[2] + x[1] * x[3]), 2.0 * (x[1] * x[2] - x[0] * x[3]),
        x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
    return out;
  };
  f->jacobian = [](const Vec& x) {
    Mat j(3, 4);
    j << 2 * x[2], 2 * x[3], 2 * x[0], 2 * x[1],
        -2 * x[3], 2 * x[2], 2 * x[1], -2 * x[0],
        2 * x[0], 2 * x[1], -2 * x[2], -2 * x[3];
    return j;
  };
  f->eta = eta;
  f->ball_radius = epsilon;
  return f;
}

TubePoint make_tube_point(const WorkMap& f, const Vec& x) {
  if (!f.eta) throw Error(ErrorCode::WrongCodomain, "work map has no base sphere");
  if (x.size() != f.domain_dim || !x.allFinite()) {
    throw Error(ErrorCode::DimensionMismatch, "configuration has the wrong dimension");
  }
  Vec fx = f.eval(x);
  const double dev = std::abs(fx.norm() - *f.eta);
  if (dev > kTubeTol) throw Error(ErrorCode::NotOnSphere, "point is off the tube by " + std::to_string(dev));
  if (f.ball_radius && x.norm() > *f.ball_radius + kTubeTol) {
    throw Error(ErrorCode::DomainError, "point lies outside the Milnor ball");
  }
  return {x, std::move(fx)};
}

Vec random_unit_vector(std::mt19937_64& rng, Eigen::Index k) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(k);
  do {
    for (Eigen::Index i = 0; i < k; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

Vec random_ball_point(std::mt19937_64& rng, Eigen::Index n, double radius) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Vec dir = random_unit_vector(rng, n);
  return radius * std::pow(unif(rng), 1.0 / static_cast<double>(n)) * dir;
}

std::optional<TubePoint> random_tube_point(const WorkMap& f, std::mt19937_64& rng, int attempts) {
  if (!f.eta) throw Error(ErrorCode::WrongCodomain, "work map has no base sphere");
  for (int i = 0; i < attempts; ++i) {
    const Vec seed = random_ball_point(rng, f.domain_dim, ball_of(f));
    const Vec target = *f.eta * random_unit_vector(rng, f.codomain_dim);
    NewtonResult r = newton_project(f, seed, target);
    if (!r.converged) continue;
    if (f.ball_radius && r.x.norm() > *f.ball_radius) continue;
    return TubePoint{r.x, f.eval(r.x)};
  }
  return std::nullopt;
}

PathExpr circle_action_lift(const Germ& g, const Vec& x0, double dphi) {
  return PathExpr::circle_action_lift(g.weights(), g.degree(), x0, dphi);
}

bool fiber_walk(const WorkMap& f, const Vec& base, const Vec& a, const Vec& b, int steps) {
  const double len = (b - a).norm();
  if (len <= kFiberTol) return true;
  const double step = len / steps;
  const double ball = ball_of(f);
  Vec prev = a;
  for (int s = 1; s <= steps; ++s) {
    const Vec y = a + (b - a) * (static_cast<double>(s) / steps);
    const NewtonResult r = newton_project(f, y, base);
    if (!r.converged || r.residual > kFiberTol) return false;
    if (f.ball_radius && r.x.norm() > ball) return false;
    if ((r.x - prev).norm() > 3.0 * step + kFiberTol) return false;
    prev = r.x;
  }
  return (prev - b).norm() <= 3.0 * step + kFiberTol;
}

namespace {

constexpr int kNeighbours = 8;
constexpr int kBridgeAttempts = 8;

std::vector<std::size_t> nearest(const std::vector<Vec>& xs, std::size_t i, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (j != i) d.emplace_back((xs[i] - xs[j]).squaredNorm(), j);
  }
  k = std::min(k, d.size());
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out(k);
  for (std::size_t q = 0; q < k; ++q) out[q] = d[q].second;
  return out;
}

}  // namespace

FiberSample sample_fiber(const WorkMap& f, const Vec& base, int n_seeds, std::uint64_t seed) {
  if (n_seeds < 100) throw Error(ErrorCode::DomainError, "fiber sampling needs at least 100 seeds");
  if (base.size() != f.codomain_dim) throw Error(ErrorCode::DimensionMismatch, "base point has wrong dimension");
  std::mt19937_64 rng(seed);
  FiberSample fs;
  fs.base = base;
  fs.seeds = n_seeds;
  std::vector<Vec> xs;
  for (int i = 0; i < n_seeds; ++i) {
    const Vec x0 = random_ball_point(rng, f.domain_dim, ball_of(f));
    NewtonResult r = newton_project(f, x0, base);
    if (!r.converged || r.residual > kFiberTol) continue;
    if (f.ball_radius && r.x.norm() > *f.ball_radius) continue;
    fs.points.push_back({r.x, f.eval(r.x)});
    xs.push_back(std::move(r.x));
  }
  fs.converged = static_cast<int>(xs.size());
  if (fs.converged < 20) {
    throw Error(ErrorCode::TooFewPoints, "only " + std::to_string(fs.converged) + " seeds converged");
  }
  const std::size_t n = xs.size();
  UnionFind uf(n);
  auto try_edge = [&](std::size_t i, std::size_t j) {
    if (uf.find(i) == uf.find(j)) return false;
    if (!fiber_walk(f, base, xs[i], xs[j])) return false;
    uf.unite(i, j);
    fs.radius = std::max(fs.radius, (xs[i] - xs[j]).norm());
    return true;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : nearest(xs, i, kNeighbours)) try_edge(i, j);
  }
  // Bridge remaining components through their closest cross pairs.
  bool merged = true;
  while (merged) {
    merged = false;
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (uf.find(i) != uf.find(j)) pairs.emplace_back((xs[i] - xs[j]).squaredNorm(), i, j);
      }
    }
    std::sort(pairs.begin(), pairs.end());
    std::map<std::pair<std::size_t, std::size_t>, int> attempts;
    for (const auto& [d2, i, j] : pairs) {
      const std::size_t ri = uf.find(i);
      const std::size_t rj = uf.find(j);
      if (ri == rj) continue;
      int& tried = attempts[{std::min(ri, rj), std::max(ri, rj)}];
      if (tried >= kBridgeAttempts) continue;
      ++tried;
      if (try_edge(i, j)) {
        merged = true;
        break;
      }
    }
  }
  std::vector<int> root_label(n, -1);
  fs.labels.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = uf.find(i);
    if (root_label[r] < 0) root_label[r] = fs.components++;
    fs.labels[i] = root_label[r];
  }
  return fs;
}

FiberSample sample_fiber(const Germ& g, double phi, int n_seeds, std::uint64_t seed) {
  const WorkMapPtr f = tube_fibration(std::make_shared<Germ>(g));
  Vec base(2);
  base << g.eta() * std::cos(phi), g.eta() * std::sin(phi);
  return sample_fiber(*f, base, n_seeds, seed);
}

LinkSample sample_link(const Germ& g, int n_seeds, std::uint64_t seed) {
  if (n_seeds < 100) throw Error(ErrorCode::DomainError, "link sampling needs at least 100 seeds");
  const double eps = g.epsilon();
  const Eigen::Index n = g.real_dim();
  auto eval = [&g](const Vec& x) {
    Vec out(3);
    out.head(2) = g.eval(x);
    out[2] = x.squaredNorm();
    return out;
  };
  auto jac = [&g, n](const Vec& x) {
    Mat j(3, n);
    j.topRows(2) = g.jacobian(x);
    j.row(2) = 2.0 * x.transpose();
    return j;
  };
  Vec target(3);
  target << 0.0, 0.0, eps * eps;
  std::mt19937_64 rng(seed);
  LinkSample out;
  out.seeds = n_seeds;
  for (int i = 0; i < n_seeds; ++i) {
    const Vec x0 = random_ball_point(rng, n, eps);
    NewtonResult r = newton_project(eval, jac, x0, target, {1e-14, 80});
    if (!r.converged) continue;
    if (g.eval(r.x).norm() > kFiberTol || std::abs(r.x.norm() - eps) > kFiberTol) continue;
    out.points.push_back(std::move(r.x));
  }
  out.evidence = out.points.empty() ? TriState::No : TriState::Yes;
  return out;
}

std::vector<int> monodromy_components(const Germ& g, const FiberSample& fs) {
  if (fs.base.size() != 2 || std::abs(fs.base[1]) > kFiberTol || !(fs.base[0] > 0.0)) {
    throw Error(ErrorCode::DomainError, "monodromy needs a fiber sample over angle 0");
  }
  const WorkMapPtr f = tube_fibration(std::make_shared<Germ>(g));
  std::vector<int> perm(static_cast<std::size_t>(fs.components), -1);
  for (int c = 0; c < fs.components; ++c) {
    const auto rep = std::find(fs.labels.begin(), fs.labels.end(), c) - fs.labels.begin();
    const Vec end = circle_action_lift(g, fs.points[static_cast<std::size_t>(rep)].x, 2.0 * std::numbers::pi).end();
    std::size_t best = 0;
    for (std::size_t i = 1; i < fs.points.size(); ++i) {
      if ((fs.points[i].x - end).norm() < (fs.points[best].x - end).norm()) best = i;
    }
    if (!fiber_walk(*f, fs.base, end, fs.points[best].x)) {
      throw Error(ErrorCode::AmbiguousAssignment,
                  "loop endpoint from component " + std::to_string(c) + " does not reach its nearest sample");
    }
    perm[static_cast<std::size_t>(c)] = fs.labels[best];
  }
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int c = 0; c < fs.components; ++c) {
    if (sorted[static_cast<std::size_t>(c)] != c) {
      throw Error(ErrorCode::AmbiguousAssignment, "loop endpoints do not form a permutation");
    }
  }
  return perm;
}

std::vector<int> cycle_lengths(const std::vector<int>& permutation) {
  std::vector<int> counts(permutation.size() + 1, 0);
  std::vector<bool> seen(permutation.size(), false);
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(permutation[j])) {
      seen[j] = true;
      ++len;
    }
    ++counts[static_cast<std::size_t>(len)];
  }
  return counts;
}

RegularityProbe probe_points(const Germ& g, const std::vector<Vec>& points) {
  RegularityProbe out;
  out.min_sigma_df = std::numeric_limits<double>::infinity();
  out.min_sigma_dfr = std::numeric_limits<double>::infinity();
  for (const Vec& x : points) {
    const Mat jf = g.jacobian(x);
    Mat jfr(3, x.size());
    jfr.topRows(2) = jf;
    jfr.row(2) = 2.0 * x.transpose();
    out.min_sigma_df = std::min(out.min_sigma_df, sigma_min(jf));
    out.min_sigma_dfr = std::min(out.min_sigma_dfr, sigma_min(jfr));
  }
  out.samples = static_cast<int>(points.size());
  if (points.empty()) {
    out.min_sigma_df = 0.0;
    out.min_sigma_dfr = 0.0;
  }
  out.probably_regular = out.samples > 0 && out.min_sigma_df > 1e-6 && out.min_sigma_dfr > 1e-6;
  return out;
}

RegularityProbe regularity_probe(const Germ& g, int n, std::uint64_t seed) {
  if (n < 1000) throw Error(ErrorCode::DomainError, "regularity probe needs at least 1000 samples");
  const WorkMapPtr f = tube_fibration(std::make_shared<Germ>(g));
  std::mt19937_64 rng(seed);
  std::vector<Vec> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < 20 * n && static_cast<int>(points.size()) < n; ++attempt) {
    if (auto tp = random_tube_point(*f, rng, 1)) points.push_back(std::move(tp->x));
  }
  return probe_points(g, points);
}

}  // namespace tcplan
