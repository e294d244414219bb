#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "tcplan/germ.hpp"
#include "tcplan/milnor.hpp"
#include "tcplan/work_map.hpp"

using namespace tcplan;
using tcplan::test::error_code_of;
using tcplan::test::vec;

namespace {

const char* kDataDir = TCPLAN_DATA_DIR;

Germ load(const std::string& name) { return Germ::load(std::string(kDataDir) + "/germs/" + name + ".json"); }

double rel_jacobian_error(const WorkMap& f, const Vec& x) {
  const Mat a = f.jacobian(x);
  const Mat n = finite_difference_jacobian(f, x);
  return (a - n).norm() / std::max(a.norm(), 1e-300);
}

}  // namespace

TEST_CASE("germ evaluation") {
  const Germ z2 = power_germ(2);
  CHECK(std::abs(z2.eval_complex(vec({0.1, 0})) - std::complex<double>(0.01, 0)) < 1e-17);
  const Germ b = brieskorn_germ(2, 3);
  CHECK(std::abs(b.eval_complex(vec({0, 0, 0.1, 0})) - std::complex<double>(0.001, 0)) < 1e-18);
  CHECK(b.weights() == std::vector<int>{3, 2});
  CHECK(b.degree() == 6);
}

TEST_CASE("weighted homogeneity is validated exactly") {
  auto make = [](std::vector<int> weights, int degree) {
    return Germ("bad", 2, {{{1, 0}, {2, 0}}, {{1, 0}, {0, 3}}}, std::move(weights), degree, 0.5, 1e-3);
  };
  CHECK_NOTHROW(make({3, 2}, 6));
  CHECK(error_code_of([&] { make({2, 2}, 6); }) == ErrorCode::InvalidGerm);
  CHECK(error_code_of([&] { make({3, 2}, 5); }) == ErrorCode::InvalidGerm);
  CHECK(error_code_of([&] { make({3, 0}, 6); }) == ErrorCode::InvalidGerm);
}

TEST_CASE("eta above the tube bound needs an explicit override") {
  CHECK(error_code_of([] { power_germ(2, 0.5, 0.1); }) == ErrorCode::InvalidGerm);
  CHECK_NOTHROW(Germ("big", 1, {{{1, 0}, {2}}}, {1}, 2, 0.5, 0.1, {}, true));
  // Default is epsilon^(d / min w) / 10.
  CHECK(std::abs(Germ("dflt", 1, {{{1, 0}, {2}}}, {1}, 2, 0.5).eta() - 0.025) < 1e-17);
}

TEST_CASE("germ files load and round trip") {
  for (int d = 1; d <= 5; ++d) {
    const Germ g = load("zd" + std::to_string(d));
    CHECK(g.degree() == d);
    CHECK(g.eta() == 1e-3);
    CHECK(g.flags().link_nonempty == TriState::No);
  }
  const Germ b = load("brieskorn23");
  CHECK(b.flags().link_nonempty == TriState::Yes);
  const Germ again = Germ::from_json(b.to_json());
  CHECK(again.to_json() == b.to_json());
  CHECK(error_code_of([] { Germ::from_json(nlohmann::json{{"name", "x"}}); }) == ErrorCode::Parse);
  CHECK(error_code_of([] { Germ::load("/nonexistent/germ.json"); }) == ErrorCode::Parse);
}

TEST_CASE("equivariance under the circle action") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (const Germ& g : {load("brieskorn23"), load("zw"), power_germ(3), brieskorn_germ(3, 4)}) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec x = random_ball_point(rng, g.real_dim(), g.epsilon());
      const double th = angle(rng);
      const std::complex<double> lhs = g.eval_complex(g.act(x, th));
      const std::complex<double> rhs = std::polar(1.0, g.degree() * th) * g.eval_complex(x);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("analytic Jacobians agree with finite differences") {
  std::mt19937_64 rng(9);
  const WorkMapPtr b = tube_fibration(std::make_shared<Germ>(brieskorn_germ(2, 3)));
  const WorkMapPtr h = hopf_germ();
  for (int i = 0; i < 100; ++i) {
    CHECK(rel_jacobian_error(*b, random_ball_point(rng, 4, 0.5)) < 1e-5);
    CHECK(rel_jacobian_error(*h, random_ball_point(rng, 4, 0.5)) < 1e-5);
  }
}

TEST_CASE("tube of z^d is the circle of radius eta^(1/d)") {
  std::mt19937_64 rng(21);
  for (int d = 1; d <= 5; ++d) {
    const Germ g = power_germ(d);
    const WorkMapPtr f = tube_fibration(std::make_shared<Germ>(g));
    for (int i = 0; i < 20; ++i) {
      auto tp = random_tube_point(*f, rng);
      REQUIRE(tp);
      CHECK(std::abs(tp->x.norm() - std::pow(1e-3, 1.0 / d)) < 1e-9);
      CHECK(std::abs(f->eval(tp->x).norm() - 1e-3) < 1e-9);
    }
  }
}

TEST_CASE("circle action lift") {
  const Germ z2 = power_germ(2);
  const double s = std::sqrt(z2.eta());
  const PathExpr p = circle_action_lift(z2, vec({s, 0}), std::numbers::pi / 2);
  CHECK((p.end() - vec({s * std::sqrt(0.5), s * std::sqrt(0.5)})).norm() < 1e-12);
  CHECK((circle_action_lift(z2, vec({s, 0}), 0.0).eval(0.5) - vec({s, 0})).norm() == 0.0);

  const Germ b = brieskorn_germ(2, 3);
  const WorkMapPtr f = tube_fibration(std::make_shared<Germ>(b));
  std::mt19937_64 rng(4);
  const TubePoint x0 = *random_tube_point(*f, rng);
  const std::complex<double> f0(x0.fx[0], x0.fx[1]);
  const PathExpr loop = circle_action_lift(b, x0.x, 1.3);
  for (int i = 0; i < 256; ++i) {
    const double t = i / 255.0;
    CHECK(std::abs(b.eval_complex(loop.eval(t)) - std::polar(1.0, 1.3 * t) * f0) <= 1e-12);
    CHECK(std::abs(loop.eval(t).norm() - x0.x.norm()) <= 1e-12);
  }
}

TEST_CASE("fiber components of z^d") {
  for (int d = 1; d <= 5; ++d) {
    const FiberSample fs = sample_fiber(power_germ(d), 0.0, 600, 42);
    CHECK(fs.components == d);
    CHECK(fs.converged >= 500);
    for (const TubePoint& p : fs.points) {
      CHECK(std::abs(std::complex<double>(p.fx[0], p.fx[1]) - std::complex<double>(1e-3, 0)) < 1e-9);
    }
  }
  CHECK(error_code_of([] { sample_fiber(power_germ(2), 0.0, 50, 1); }) == ErrorCode::DomainError);
}

TEST_CASE("the Brieskorn fiber is connected") {
  for (std::uint64_t seed : {1, 2, 3}) CHECK(sample_fiber(brieskorn_germ(2, 3), 0.7, 1000, seed).components == 1);
}

TEST_CASE("fiber walks do not jump between roots") {
  const Germ g = power_germ(3);
  const WorkMapPtr f = tube_fibration(std::make_shared<Germ>(g));
  const double r = std::cbrt(1e-3);
  const Vec base = vec({1e-3, 0});
  const Vec a = vec({r, 0});
  const Vec b = vec({r * std::cos(2 * std::numbers::pi / 3), r * std::sin(2 * std::numbers::pi / 3)});
  CHECK_FALSE(fiber_walk(*f, base, a, b));
  CHECK(fiber_walk(*f, base, a, a));
}

TEST_CASE("link sampling") {
  const LinkSample trefoil = sample_link(brieskorn_germ(2, 3), 200, 42);
  CHECK(trefoil.points.size() >= 1);
  CHECK(trefoil.evidence == TriState::Yes);
  for (const Vec& x : trefoil.points) {
    CHECK(std::abs(brieskorn_germ(2, 3).eval_complex(x)) < 1e-9);
    CHECK(std::abs(x.norm() - 0.5) < 1e-9);
  }
  const LinkSample none = sample_link(power_germ(1), 200, 42);
  CHECK(none.points.empty());
  CHECK(none.evidence == TriState::No);
}

TEST_CASE("monodromy permutations") {
  const Germ z3 = power_germ(3);
  const std::vector<int> perm = monodromy_components(z3, sample_fiber(z3, 0.0, 300, 42));
  CHECK(cycle_lengths(perm)[3] == 1);
  const Germ z1 = power_germ(1);
  CHECK(monodromy_components(z1, sample_fiber(z1, 0.0, 300, 42)) == std::vector<int>{0});
  const Germ b = brieskorn_germ(2, 3);
  CHECK(monodromy_components(b, sample_fiber(b, 0.0, 1000, 42)) == std::vector<int>{0});
  CHECK(error_code_of([&] { monodromy_components(z3, sample_fiber(z3, 1.0, 300, 42)); }) == ErrorCode::DomainError);
}

TEST_CASE("cycle lengths") {
  const std::vector<int> c = cycle_lengths({1, 2, 0, 4, 3, 5});
  CHECK(c[1] == 1);
  CHECK(c[2] == 1);
  CHECK(c[3] == 1);
}

TEST_CASE("regularity probe") {
  const RegularityProbe ok = regularity_probe(brieskorn_germ(2, 3), 1000, 42);
  CHECK(ok.probably_regular);
  CHECK(ok.min_sigma_df >= 0.0);
  CHECK(ok.min_sigma_dfr >= 0.0);
  const Germ zw("zw", 2, {{{1, 0}, {1, 1}}}, {1, 1}, 2, 0.5, 1e-3);
  const RegularityProbe near0 = probe_points(zw, {vec({1e-8, 0, 1e-8, 0})});
  CHECK(near0.min_sigma_df < 1e-6);
  CHECK_FALSE(near0.probably_regular);
  CHECK(error_code_of([] { regularity_probe(power_germ(2), 10, 1); }) == ErrorCode::DomainError);
}

TEST_CASE("Hopf map") {
  const WorkMapPtr h = hopf_germ();
  CHECK((h->eval(vec({1, 0, 0, 0})) - vec({0, 0, 1})).norm() == 0.0);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Vec x = random_ball_point(rng, 4, 2.0);
    CHECK(std::abs(h->eval(x).squaredNorm() - std::pow(x.squaredNorm(), 2)) < 1e-10);
  }
  auto tp = random_tube_point(*h, rng);
  REQUIRE(tp);
  CHECK(std::abs(tp->x.norm() - 0.1) < 1e-9);
  const FiberSample fs = sample_fiber(*h, vec({0, 0, 0.01}), 300, 42);
  CHECK(fs.components == 1);
}
