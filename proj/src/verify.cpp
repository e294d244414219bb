#include "tcplan/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace tcplan {

namespace {

const char* kCellsAssumption = "link-cells-dimension-bound";

nlohmann::json tristate_json(TriState s) { return std::string(to_string(s)); }

std::string parity(int p) { return p % 2 == 0 ? "even" : "odd"; }

nlohmann::json facts_json(const FibrationFacts& f) {
  nlohmann::json j{{"name", f.name},
                   {"p", f.p},
                   {"parity", parity(f.p)},
                   {"link_nonempty", tristate_json(f.link_nonempty)},
                   {"link_source", std::string(to_string(f.link_source))},
                   {"pi_trivial", tristate_json(f.pi_trivial)},
                   {"pi_source", std::string(to_string(f.pi_source))}};
  j["fiber_components"] = f.fiber_components ? nlohmann::json(*f.fiber_components) : nlohmann::json(nullptr);
  return j;
}

void add_failure(VerificationReport& r, std::size_t index, std::uint64_t seed, std::string kind,
                 std::string detail, std::optional<int> region = std::nullopt,
                 std::optional<double> t_star = std::nullopt) {
  r.failures.push_back({index, seed, std::move(kind), std::move(detail), region, t_star});
}

Vec point_near_pole(std::mt19937_64& rng, double chord) {
  std::uniform_int_distribution<int> coin(0, 1);
  const double sign = coin(rng) == 0 ? 1.0 : -1.0;
  Vec pole = Vec::Zero(3);
  pole[2] = sign;
  Vec u = random_unit_vector(rng, 3);
  u -= u.dot(pole) * pole;
  u.normalize();
  const double angle = 2.0 * std::asin(chord / 2.0);
  return std::cos(angle) * pole + std::sin(angle) * u;
}

double pole_clearance(const Vec& x) {
  Vec pn = Vec::Zero(3);
  pn[2] = 1.0;
  return std::min((x - pn).norm(), (x + pn).norm());
}

Vec goal_with_clearance(std::mt19937_64& rng, double lo, double hi) {
  if (hi <= 0.5) {
    std::uniform_real_distribution<double> r(lo, hi);
    return point_near_pole(rng, r(rng));
  }
  for (;;) {
    Vec w = random_unit_vector(rng, 3);
    const double c = pole_clearance(w);
    if (c >= lo && c <= hi) return w;
  }
}

}  // namespace

std::string_view to_string(Quantity q) { return q == Quantity::TC ? "TC" : "sec"; }
std::string_view to_string(FlagSource s) { return s == FlagSource::Declared ? "declared" : "sampled"; }

FibrationFacts germ_facts(const Germ& g, const std::optional<LinkSample>& link) {
  FibrationFacts f;
  f.name = g.name();
  f.p = 2;
  f.link_nonempty = g.flags().link_nonempty;
  f.pi_trivial = g.flags().pi_trivial;
  if (link && f.link_nonempty == TriState::Unknown) {
    f.link_nonempty = link->evidence;
    f.link_source = FlagSource::Sampled;
  }
  return f;
}

FibrationFacts hopf_facts() {
  FibrationFacts f;
  f.name = "hopf";
  f.p = 3;
  f.link_nonempty = TriState::No;
  f.pi_trivial = TriState::No;
  return f;
}

bool Certificate::consistent() const {
  if (lower > upper) return false;
  if (exact && (*exact < lower || *exact > upper)) return false;
  return true;
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json j{{"quantity", std::string(to_string(quantity))},
                   {"lower", lower},
                   {"upper", upper},
                   {"tags", tags},
                   {"assumptions", assumptions},
                   {"inputs", inputs}};
  j["exact"] = exact ? nlohmann::json(*exact) : nlohmann::json(nullptr);
  if (section_exists) j["section_exists"] = tristate_json(*section_exists);
  return j;
}

Certificate certify_tc(const FibrationFacts& facts) {
  if (facts.p < 2) throw Error(ErrorCode::WrongCodomain, "certificates need p >= 2");
  Certificate c;
  c.quantity = Quantity::TC;
  c.inputs = facts_json(facts);
  // cat(S^{p-1}) = 2 bounds TC from below; the pullback of the sphere planner bounds it above.
  c.lower = 2;
  c.tags.push_back("sphere-category-lower-bound");
  c.upper = sphere_tc(facts.p - 1);
  c.tags.push_back("sphere-planner-pullback-upper-bound");
  if (facts.p % 2 == 0) {
    c.exact = 2;
    c.tags.push_back("even-codomain");
  } else if (facts.link_nonempty == TriState::Yes) {
    c.exact = 3;
    c.tags.push_back("odd-codomain-nonempty-link");
    c.assumptions.push_back("isolated-singularity");
  } else if (facts.pi_trivial == TriState::Yes) {
    c.exact = 3;
    c.tags.push_back("odd-codomain-trivial-fiber-homotopy");
    c.assumptions.push_back(kCellsAssumption);
  } else {
    c.tags.push_back("bounds-only");
  }
  c.assumptions.push_back("milnor-conditions-a-b");
  return c;
}

Certificate certify_sec(const FibrationFacts& facts, int fiber_components) {
  if (facts.p != 2) throw Error(ErrorCode::WrongCodomain, "sectional-number rule needs p = 2");
  if (fiber_components < 1) throw Error(ErrorCode::DomainError, "fiber component count must be positive");
  Certificate c;
  c.quantity = Quantity::Sec;
  FibrationFacts echoed = facts;
  echoed.fiber_components = fiber_components;
  c.inputs = facts_json(echoed);
  c.assumptions.push_back(kCellsAssumption);
  c.assumptions.push_back("milnor-conditions-a-b");
  c.tags.push_back("circle-category-upper-bound");
  if (fiber_components >= 2) {
    c.lower = c.upper = 2;
    c.exact = 2;
    c.section_exists = TriState::No;
    c.tags.push_back("fiber-disconnected-no-section");
  } else {
    c.lower = c.upper = 1;
    c.exact = 1;
    c.section_exists = TriState::Yes;
    c.tags.push_back("fiber-connected-global-section");
  }
  return c;
}

bool planner_bound_consistent(std::size_t region_count, const Certificate& tc) {
  return tc.quantity == Quantity::TC && static_cast<int>(region_count) == tc.upper;
}

std::uint64_t query_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

nlohmann::json VerificationReport::to_json(bool include_timing) const {
  nlohmann::json fails = nlohmann::json::array();
  for (const QueryFailure& f : failures) {
    nlohmann::json j{{"index", f.index}, {"seed", f.seed}, {"kind", f.kind}, {"detail", f.detail}};
    if (f.region) j["region"] = *f.region;
    if (f.t_star) j["t_star"] = *f.t_star;
    fails.push_back(std::move(j));
  }
  nlohmann::json j{{"planner", planner_id},
                   {"regions", regions},
                   {"queries", queries},
                   {"coverage_failures", coverage_failures},
                   {"dispatch_failures", dispatch_failures},
                   {"contract_failures", contract_failures},
                   {"lift_failures", lift_failures},
                   {"max_endpoint_error", max_endpoint_error},
                   {"mean_endpoint_error", mean_endpoint_error},
                   {"max_start_error", max_start_error},
                   {"max_path_deviation", max_path_deviation},
                   {"region_histogram", region_histogram},
                   {"failures", std::move(fails)}};
  if (include_timing) j["wall_seconds"] = wall_seconds;
  return j;
}

VerificationReport run_contract_suite(const SpherePlanner& planner, const SuiteOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport r;
  r.planner_id = "sphere:" + std::to_string(planner.dim());
  r.regions = planner.region_count();
  r.queries = opts.queries;
  r.region_histogram.assign(r.regions, 0);
  const Eigen::Index k = planner.dim() + 1;
  const int samples = std::max(opts.samples_per_path, 2);
  double sum_endpoint = 0.0;

  for (std::size_t i = 0; i < opts.queries; ++i) {
    const std::uint64_t seed = query_seed(opts.seed, i);
    std::mt19937_64 rng(seed);
    const SpherePoint a(random_unit_vector(rng, k));
    const SpherePoint b(random_unit_vector(rng, k));

    const auto idx = planner.dispatch(a, b);
    if (!idx) {
      ++r.coverage_failures;
      add_failure(r, i, seed, "coverage", "no region contains the pair");
      continue;
    }
    // Independent recheck of the minimal-index rule.
    const auto& regions = planner.regions();
    const auto first = std::find_if(regions.begin(), regions.end(), [&](const Region& reg) { return reg.contains(a, b); });
    if (first == regions.end() || first->index != *idx) {
      ++r.dispatch_failures;
      add_failure(r, i, seed, "dispatch", "dispatch did not pick the minimal index", *idx);
      continue;
    }
    ++r.region_histogram[static_cast<std::size_t>(*idx - 1)];

    std::optional<PathExpr> path;
    try {
      path = planner.plan(a, b).path;
    } catch (const Error& e) {
      ++r.contract_failures;
      add_failure(r, i, seed, "algorithm", e.what(), *idx);
      continue;
    }
    const double err = std::max((path->start() - a.coords()).norm(), (path->end() - b.coords()).norm());
    sum_endpoint += err;
    r.max_endpoint_error = std::max(r.max_endpoint_error, err);
    double dev = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double t = static_cast<double>(s) / (samples - 1);
      dev = std::max(dev, std::abs(path->eval(t).norm() - 1.0));
    }
    r.max_path_deviation = std::max(r.max_path_deviation, dev);
    if (err > tol::norm || dev > tol::norm) {
      ++r.contract_failures;
      add_failure(r, i, seed, err > tol::norm ? "endpoint" : "off_sphere",
                  "endpoint error " + format_double(err) + ", sphere deviation " + format_double(dev), *idx);
    }
  }
  if (opts.queries > 0) r.mean_endpoint_error = sum_endpoint / static_cast<double>(opts.queries);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

QuerySampler tube_query_sampler(const TaskingPlanner& planner) {
  const WorkMapPtr f = planner.work_map_ptr();
  return [f](std::mt19937_64& rng) {
    auto tp = random_tube_point(*f, rng, 256);
    if (!tp) throw Error(ErrorCode::TooFewPoints, "could not sample a tube point");
    // Polish onto |f| = eta so the start meets the exact-lift precondition.
    NewtonResult polished = polish_to_tube(*f, tp->x);
    Vec w = *f->eta * random_unit_vector(rng, f->codomain_dim);
    return std::make_pair(polished.converged ? polished.x : tp->x, w);
  };
}

QuerySampler arm_query_sampler(double min_clearance, double max_clearance) {
  return [min_clearance, max_clearance](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> alpha(-std::numbers::pi / 2, std::numbers::pi / 2);
    std::uniform_real_distribution<double> beta(-std::numbers::pi, std::numbers::pi);
    const WorkMapPtr f = rr_arm_workmap();
    Vec e(2);
    do {
      e << alpha(rng), beta(rng);
    } while (pole_clearance(f->eval(e)) < 0.1);
    return std::make_pair(e, goal_with_clearance(rng, min_clearance, max_clearance));
  };
}

VerificationReport run_contract_suite(const TaskingPlanner& planner, const QuerySampler& sampler,
                                      const SuiteOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const WorkMap& f = planner.work_map();
  const double lift_tol = planner.oracle().lift_tol();
  VerificationReport r;
  r.planner_id = "pullback:" + f.name + ":" + std::string(to_string(planner.oracle().kind));
  r.regions = planner.region_count();
  r.queries = opts.queries;
  r.region_histogram.assign(r.regions, 0);
  const int samples = std::max(opts.samples_per_path, 2);
  double sum_endpoint = 0.0;
  std::size_t completed = 0;

  for (std::size_t i = 0; i < opts.queries; ++i) {
    const std::uint64_t seed = query_seed(opts.seed, i);
    std::mt19937_64 rng(seed);
    const auto [e, w] = sampler(rng);

    std::optional<int> idx;
    try {
      idx = planner.dispatch(e, w);
    } catch (const Error& err) {
      ++r.contract_failures;
      add_failure(r, i, seed, "query", err.what());
      continue;
    }
    if (!idx) {
      ++r.coverage_failures;
      add_failure(r, i, seed, "coverage", "no lifted region contains the query");
      continue;
    }
    for (int j = 1; j < *idx; ++j) {
      if (planner.contains(j, e, w)) {
        ++r.dispatch_failures;
        add_failure(r, i, seed, "dispatch", "a lower-index region also contains the query", *idx);
      }
    }
    ++r.region_histogram[static_cast<std::size_t>(*idx - 1)];

    std::optional<TaskingPlan> plan;
    try {
      plan = planner.algorithm(*idx, e, w);
    } catch (const LiftFailure& lf) {
      ++r.lift_failures;
      add_failure(r, i, seed, "lift_failure", lf.reason(), *idx, lf.t_star());
      continue;
    } catch (const Error& err) {
      ++r.contract_failures;
      add_failure(r, i, seed, "algorithm", err.what(), *idx);
      continue;
    }

    const double start_err = (plan->path.start() - e).norm();
    const double end_err = (f.eval(plan->path.end()) - w).norm();
    double proj = 0.0;
    double ball_excess = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double t = static_cast<double>(s) / (samples - 1);
      const Vec x = plan->path.eval(t);
      proj = std::max(proj, (f.eval(x) - plan->base_path.eval(t)).norm());
      if (f.ball_radius) ball_excess = std::max(ball_excess, x.norm() - *f.ball_radius);
    }
    ++completed;
    sum_endpoint += end_err;
    r.max_start_error = std::max(r.max_start_error, start_err);
    r.max_endpoint_error = std::max(r.max_endpoint_error, end_err);
    r.max_path_deviation = std::max(r.max_path_deviation, proj);
    if (start_err != 0.0 || end_err > lift_tol || proj > lift_tol || ball_excess > kTubeTol) {
      ++r.contract_failures;
      add_failure(r, i, seed, "contract",
                  "start " + format_double(start_err) + ", endpoint " + format_double(end_err) +
                      ", projection " + format_double(proj) + ", ball excess " + format_double(ball_excess),
                  *idx);
    }
  }
  if (completed > 0) r.mean_endpoint_error = sum_endpoint / static_cast<double>(completed);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

nlohmann::json ContinuityTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const ContinuityRow& row : rows) {
    rows_json.push_back({{"scale", row.scale}, {"max_deviation", row.max_deviation}, {"max_ratio", row.max_ratio}});
  }
  return {{"region", region}, {"pairs", pairs}, {"rows", rows_json}, {"monotone", monotone}};
}

ContinuityTable continuity_probe(const SpherePlanner& planner, int region, const std::vector<double>& scales,
                                 int pairs, std::uint64_t seed) {
  if (region < 1 || region > static_cast<int>(planner.region_count())) {
    throw Error(ErrorCode::DomainError, "no region " + std::to_string(region));
  }
  const Region& reg = planner.regions()[static_cast<std::size_t>(region - 1)];
  // Same region family with a wider margin: membership there is margin/2 interior here.
  const SpherePlanner inner(planner.dim(), 1.5 * planner.margin());
  const Region& inner_reg = inner.regions()[static_cast<std::size_t>(region - 1)];
  const Eigen::Index k = planner.dim() + 1;
  const int samples = 256;

  ContinuityTable table;
  table.region = region;
  for (double s : scales) table.rows.push_back({s, 0.0, 0.0});

  std::mt19937_64 rng(seed);
  int found = 0;
  for (int attempt = 0; found < pairs && attempt < 1000 * pairs; ++attempt) {
    const SpherePoint a(random_unit_vector(rng, k));
    const SpherePoint b(random_unit_vector(rng, k));
    const Vec da = random_unit_vector(rng, k);
    const Vec db = random_unit_vector(rng, k);
    if (!inner_reg.contains(a, b)) continue;
    std::vector<SpherePoint> pa;
    std::vector<SpherePoint> pb;
    bool inside = true;
    for (double s : scales) {
      pa.push_back(normalize(Vec(a.coords() + s * da)));
      pb.push_back(normalize(Vec(b.coords() + s * db)));
      inside = inside && inner_reg.contains(pa.back(), pb.back());
    }
    if (!inside) continue;
    ++found;
    const PathExpr path = reg.algorithm(a, b);
    for (std::size_t r = 0; r < scales.size(); ++r) {
      const PathExpr moved = reg.algorithm(pa[r], pb[r]);
      double dev = 0.0;
      for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        dev = std::max(dev, (path.eval(t) - moved.eval(t)).norm());
      }
      table.rows[r].max_deviation = std::max(table.rows[r].max_deviation, dev);
      table.rows[r].max_ratio = std::max(table.rows[r].max_ratio, dev / scales[r]);
    }
  }
  table.pairs = found;
  table.monotone = found > 0;
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const double prev = table.rows[r - 1].max_deviation;
    const double cur = table.rows[r].max_deviation;
    if (!(cur < prev || (cur == 0.0 && prev == 0.0))) table.monotone = false;
  }
  return table;
}

}  // namespace tcplan
