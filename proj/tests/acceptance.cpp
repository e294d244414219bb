// Acceptance suite: one PASS/FAIL line per criterion, with measured values and runtimes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "tcplan/fibration.hpp"
#include "tcplan/germ.hpp"
#include "tcplan/milnor.hpp"
#include "tcplan/sphere_planner.hpp"
#include "tcplan/verify.hpp"

using namespace tcplan;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_seconds;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %d %s: %s; %.2fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
              limit_seconds, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome sphere_table() {
  const int expected[] = {2, 3, 2, 3};
  bool ok = true;
  std::ostringstream os;
  for (int m = 1; m <= 4; ++m) {
    const SpherePlanner p = build_planner(m);
    const VerificationReport r = run_contract_suite(p, {100000, 42, 256});
    const bool row = static_cast<int>(p.region_count()) == expected[m - 1] && r.coverage_failures == 0 &&
                     r.failures.empty() && r.max_endpoint_error < 1e-9;
    ok = ok && row;
    os << "m=" << m << " regions=" << p.region_count() << " uncovered=" << r.coverage_failures
       << " failures=" << r.failures.size() << " max_err=" << fmt("%.1e", r.max_endpoint_error) << (m < 4 ? ", " : "");
  }
  return {ok, os.str()};
}

Outcome brieskorn_pullback() {
  const auto g = std::make_shared<Germ>(brieskorn_germ(2, 3));
  const TaskingPlanner tp = pullback_planner(tube_fibration(g), build_planner(1), LiftingOracle::exact());
  const VerificationReport r = run_contract_suite(tp, tube_query_sampler(tp), {10000, 42, 256});
  const bool ok = tp.region_count() == 2 && r.failures.empty() && r.max_endpoint_error < 1e-10 &&
                  r.max_path_deviation < 1e-12;
  std::ostringstream os;
  os << "regions=" << tp.region_count() << " queries=" << r.queries << " failures=" << r.failures.size()
     << " max_endpoint=" << fmt("%.1e", r.max_endpoint_error) << " max_projection=" << fmt("%.1e", r.max_path_deviation);
  return {ok, os.str()};
}

Outcome power_fibers() {
  bool ok = true;
  std::ostringstream os;
  for (int d = 1; d <= 5; ++d) {
    const Germ g = power_germ(d);
    const FiberSample fs = sample_fiber(g, 0.0, 1000, 42);
    const Certificate sec = certify_sec(germ_facts(g), fs.components);
    const std::vector<int> cycles = cycle_lengths(monodromy_components(g, fs));
    const bool sec_ok = d >= 2 ? (sec.exact == 2 && sec.section_exists == TriState::No)
                               : (sec.exact == 1 && sec.section_exists == TriState::Yes);
    const bool cycle_ok = static_cast<int>(cycles.size()) > d && cycles[static_cast<std::size_t>(d)] == 1;
    ok = ok && fs.components == d && fs.converged >= 500 && sec_ok && cycle_ok;
    os << "d=" << d << " comps=" << fs.components << " samples=" << fs.converged << " sec=" << sec.exact.value_or(0)
       << (cycle_ok ? " cycle" : " no-cycle") << (d < 5 ? ", " : "");
  }
  return {ok, os.str()};
}

Outcome brieskorn_section() {
  const Germ g = brieskorn_germ(2, 3);
  const FiberSample fs = sample_fiber(g, 0.0, 1000, 42);
  const Certificate sec = certify_sec(germ_facts(g), fs.components);
  const LinkSample link = sample_link(g, 1000, 42);
  const bool ok = fs.components == 1 && sec.section_exists == TriState::Yes && sec.exact == 1 && !link.points.empty();
  std::ostringstream os;
  os << "comps=" << fs.components << " samples=" << fs.converged
     << " section=" << to_string(sec.section_exists.value_or(TriState::Unknown)) << " link_points=" << link.points.size();
  return {ok, os.str()};
}

Outcome hopf_bounds() {
  const Certificate tc = certify_tc(hopf_facts());
  const TaskingPlanner tp = pullback_planner(hopf_germ(), build_planner(2), LiftingOracle::numeric());
  const VerificationReport r = run_contract_suite(tp, tube_query_sampler(tp), {1000, 42, 256});
  const double residual = std::max(r.max_endpoint_error, r.max_path_deviation);
  const bool ok = tc.lower == 2 && tc.upper == 3 && !tc.exact && tp.region_count() == 3 && r.failures.empty() &&
                  residual < 1e-6;
  std::ostringstream os;
  os << "TC in [" << tc.lower << "," << tc.upper << "] exact=" << (tc.exact ? std::to_string(*tc.exact) : "none")
     << " regions=" << tp.region_count() << " failures=" << r.failures.size() << " max_residual=" << fmt("%.1e", residual);
  return {ok, os.str()};
}

Outcome arm_singularities() {
  const TaskingPlanner tp = pullback_planner(rr_arm_workmap(), build_planner(2), LiftingOracle::numeric());
  const VerificationReport far = run_contract_suite(tp, arm_query_sampler(0.1, 2.0), {1000, 42, 256});
  const VerificationReport near = run_contract_suite(tp, arm_query_sampler(0.0, 1e-3), {1000, 42, 256});
  const double residual = std::max(far.max_endpoint_error, far.max_path_deviation);
  const bool ok = far.failures.empty() && residual < 1e-6 && near.lift_failures == near.queries &&
                  near.contract_failures == 0 && near.coverage_failures == 0;
  std::ostringstream os;
  os << "far: failures=" << far.failures.size() << "/" << far.queries << " max_residual=" << fmt("%.1e", residual)
     << "; near: lift_failures=" << near.lift_failures << "/" << near.queries
     << " contract_failures=" << near.contract_failures;
  return {ok, os.str()};
}

struct PropertyMaxima {
  double chart_sphere = 0, chart_plane = 0, tangent_odd = 0, tangent_even = 0, field_zero = 0;
  double min_field_norm = INFINITY, equivariance = 0, parallelogram = 0, junction = 0;
  bool operator==(const PropertyMaxima&) const = default;
};

SpherePoint gaussian_sphere(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(m + 1);
  for (int i = 0; i <= m; ++i) v[i] = n(rng);
  return normalize(v);
}

PropertyMaxima run_properties(std::uint64_t seed, int cases) {
  PropertyMaxima p;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 2.0);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  std::uniform_int_distribution<int> dim(1, 4);
  const Germ germs[] = {brieskorn_germ(2, 3), brieskorn_germ(3, 4), power_germ(3),
                        Germ("zw", 2, {{{1, 0}, {1, 1}}}, {1, 1}, 2, 0.5, 1e-3)};
  for (int m = 2; m <= 4; m += 2) {
    const SpherePoint e1 = basis_point(m, 0);
    p.field_zero = std::max({p.field_zero, tangent_even(e1).coords().norm(), tangent_even(e1.antipode()).coords().norm()});
  }
  for (int i = 0; i < cases; ++i) {
    const int m = dim(rng);
    const SpherePoint x = gaussian_sphere(rng, m);
    if (x.coords()[m] < 1.0 - 1e-3) {
      p.chart_sphere = std::max(p.chart_sphere, (stereo_inv(stereo_proj(x)).coords() - x.coords()).norm());
    }
    Vec y(m);
    for (int j = 0; j < m; ++j) y[j] = n(rng);
    p.chart_plane = std::max(p.chart_plane, (stereo_proj(stereo_inv(EuclidPoint(y))).coords() - y).norm());

    const int odd = 2 * ((m + 1) / 2) - 1;
    const SpherePoint xo = gaussian_sphere(rng, odd);
    p.tangent_odd = std::max(p.tangent_odd, std::abs(tangent_odd(xo).coords().dot(xo.coords())));
    const SpherePoint xe = gaussian_sphere(rng, odd + 1);
    const Vec nu = tangent_even(xe).coords();
    p.tangent_even = std::max(p.tangent_even, std::abs(nu.dot(xe.coords())));
    const Vec e1 = basis_point(odd + 1, 0).coords();
    if ((xe.coords() - e1).norm() > 0.01 && (xe.coords() + e1).norm() > 0.01) {
      p.min_field_norm = std::min(p.min_field_norm, nu.norm());
    }

    const Germ& g = germs[static_cast<std::size_t>(i) % 4];
    const Vec z = random_ball_point(rng, g.real_dim(), g.epsilon());
    const double th = angle(rng);
    p.equivariance = std::max(p.equivariance, std::abs(g.eval_complex(g.act(z, th)) -
                                                       std::polar(1.0, g.degree() * th) * g.eval_complex(z)));

    const Vec a = gaussian_sphere(rng, m).coords();
    const Vec b = gaussian_sphere(rng, m).coords();
    p.parallelogram = std::max(p.parallelogram, std::abs((a + b).squaredNorm() + (a - b).squaredNorm() - 4.0));

    const SpherePlanner planner = build_planner(m);
    const PlanResult r = planner.plan(SpherePoint(a), SpherePoint(b));
    const PathExpr* node = &r.path;
    if (r.path.kind() == PathExpr::Kind::Concat) {
      const auto& c = std::get<node::Concat>(node->node().value);
      p.junction = std::max(p.junction, (c.left.end() - c.right.start()).norm());
      p.junction = std::max(p.junction, (r.path.eval(0.5 - 1e-13) - r.path.eval(0.5 + 1e-13)).norm());
    }
  }
  return p;
}

Outcome property_suite() {
  const int cases = 10000;
  const PropertyMaxima p = run_properties(42, cases);
  const PropertyMaxima again = run_properties(42, cases);
  const bool ok = p.chart_sphere <= 1e-10 && p.chart_plane <= 1e-10 && p.tangent_odd <= 1e-12 &&
                  p.tangent_even <= 1e-12 && p.field_zero == 0.0 && p.min_field_norm > 0.0 &&
                  p.equivariance <= 1e-10 && p.parallelogram <= 1e-12 && p.junction <= 1e-9 && p == again;
  std::ostringstream os;
  os << "cases=" << cases << " chart=" << fmt("%.1e", std::max(p.chart_sphere, p.chart_plane))
     << " tangency=" << fmt("%.1e", std::max(p.tangent_odd, p.tangent_even))
     << " field_zero=" << fmt("%.1e", p.field_zero) << " min|nu|=" << fmt("%.1e", p.min_field_norm)
     << " equivariance=" << fmt("%.1e", p.equivariance) << " parallelogram=" << fmt("%.1e", p.parallelogram)
     << " junction=" << fmt("%.1e", p.junction) << (p == again ? " deterministic" : " NOT deterministic");
  return {ok, os.str()};
}

}  // namespace

int main() {
  criterion(1, "sphere TC table and contract suite", 30, sphere_table);
  criterion(2, "Brieskorn z^2+w^3 pullback planner", 60, brieskorn_pullback);
  criterion(3, "z^d fiber components, sec, monodromy", 60, power_fibers);
  criterion(4, "z^2+w^3 connected fiber, section, link", 60, brieskorn_section);
  criterion(5, "Hopf bounds and 3-region numeric planner", 120, hopf_bounds);
  criterion(6, "RR arm away from and at the poles", 60, arm_singularities);
  criterion(7, "property suite", 30, property_suite);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
