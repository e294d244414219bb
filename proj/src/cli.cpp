#include "tcplan/cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "tcplan/fibration.hpp"
#include "tcplan/germ.hpp"
#include "tcplan/milnor.hpp"
#include "tcplan/sphere_planner.hpp"
#include "tcplan/verify.hpp"

namespace tcplan {

namespace {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string germ_path;
  std::string case_name;
  std::uint64_t seed = 42;
  std::size_t queries = 1000;
  int samples = 256;
  double margin = kDefaultMargin;
  std::string out_path;
  std::string format = "json";
};

Vec parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw ParseError("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad number '" + item + "' in '" + text + "'");
    }
  }
  if (values.empty()) throw ParseError("empty vector");
  Vec v = Eigen::Map<Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
  if (!v.allFinite()) throw ParseError("vector '" + text + "' is not finite");
  return v;
}

// Accepts points within 1e-6 of the unit sphere and renormalizes them.
SpherePoint parse_unit(const std::string& text, int m) {
  const Vec v = parse_vector(text);
  if (v.size() != m + 1) throw ParseError("point '" + text + "' needs " + std::to_string(m + 1) + " coordinates");
  if (std::abs(v.norm() - 1.0) > 1e-6) throw ParseError("point '" + text + "' is not a unit vector");
  return normalize(v);
}

void emit(const CommonOptions& opts, std::ostream& out, const std::string& text) {
  if (opts.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opts.out_path);
  if (!file) throw ParseError("cannot write " + opts.out_path);
  file << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

nlohmann::json samples_json(const PathExpr& path, int samples) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    rows.push_back({{"t", t}, {"x", vec_json(path.eval(t))}});
  }
  return rows;
}

std::string samples_csv(const PathExpr& path, int samples) {
  std::ostringstream os;
  write_samples_csv(os, path, samples);
  return os.str();
}

std::shared_ptr<const Germ> load_germ(const CommonOptions& opts) {
  if (!opts.germ_path.empty()) {
    try {
      return std::make_shared<Germ>(Germ::load(opts.germ_path));
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }
  const std::string& c = opts.case_name;
  if (c == "brieskorn") return std::make_shared<Germ>(brieskorn_germ(2, 3));
  if (c.rfind("zd:", 0) == 0) {
    try {
      return std::make_shared<Germ>(power_germ(std::stoi(c.substr(3))));
    } catch (const std::logic_error&) {
      throw ParseError("bad case '" + c + "'");
    }
  }
  return nullptr;
}

int sphere_dim_from_case(const std::string& c) {
  try {
    return std::stoi(c.substr(std::string("sphere:").size()));
  } catch (const std::logic_error&) {
    throw ParseError("bad case '" + c + "'");
  }
}

void check_samples(int samples) {
  if (samples < 2) throw ParseError("--samples must be at least 2");
}

int cmd_plan_sphere(const CommonOptions& opts, int m, const std::string& from, const std::string& to,
                    std::ostream& out) {
  check_samples(opts.samples);
  if (m < 1) throw ParseError("--dim must be positive");
  const SpherePoint a = parse_unit(from, m);
  const SpherePoint b = parse_unit(to, m);
  const SpherePlanner planner = build_planner(m, opts.margin);
  const PlanResult plan = planner.plan(a, b);
  if (opts.format == "csv") {
    emit(opts, out, samples_csv(plan.path, opts.samples));
  } else {
    nlohmann::json j{{"region", plan.region},
                     {"regions", planner.region_count()},
                     {"path", plan.path.to_json()},
                     {"samples", samples_json(plan.path, opts.samples)}};
    emit(opts, out, dump(j));
  }
  return kExitOk;
}

int write_tasking_plan(const CommonOptions& opts, const TaskingPlanner& planner, const Vec& e, const Vec& w,
                       std::ostream& out) {
  const TaskingPlan plan = planner.plan(e, w);
  const WorkMap& f = planner.work_map();
  const double endpoint = (f.eval(plan.path.end()) - w).norm();
  double projection = 0.0;
  for (int i = 0; i < opts.samples; ++i) {
    const double t = static_cast<double>(i) / (opts.samples - 1);
    projection = std::max(projection, (f.eval(plan.path.eval(t)) - plan.base_path.eval(t)).norm());
  }
  if (opts.format == "csv") {
    emit(opts, out, samples_csv(plan.path, opts.samples));
  } else {
    nlohmann::json j{{"region", plan.region},
                     {"regions", planner.region_count()},
                     {"oracle", std::string(to_string(planner.oracle().kind))},
                     {"start", vec_json(e)},
                     {"goal", vec_json(w)},
                     {"endpoint_residual", endpoint},
                     {"projection_residual", projection},
                     {"path", plan.path.to_json()},
                     {"samples", samples_json(plan.path, opts.samples)}};
    emit(opts, out, dump(j));
  }
  return endpoint <= planner.oracle().lift_tol() && projection <= planner.oracle().lift_tol() ? kExitOk
                                                                                             : kExitContractFailure;
}

int cmd_plan_tube(const CommonOptions& opts, const std::string& start, std::optional<double> angle,
                  const std::string& target, std::ostream& out) {
  check_samples(opts.samples);
  WorkMapPtr f;
  LiftingOracle oracle = LiftingOracle::exact();
  if (opts.case_name == "hopf") {
    f = hopf_germ();
    oracle = LiftingOracle::numeric();
  } else {
    auto g = load_germ(opts);
    if (!g) throw ParseError("plan-tube needs --germ FILE or --case hopf|brieskorn|zd:D");
    f = tube_fibration(g);
  }
  const double eta = *f->eta;
  Vec e;
  if (start.empty()) {
    std::mt19937_64 rng(opts.seed);
    auto tp = random_tube_point(*f, rng, 256);
    if (!tp) throw Error(ErrorCode::TooFewPoints, "could not sample a start configuration");
    e = tp->x;
  } else {
    e = parse_vector(start);
    if (e.size() != f->domain_dim) throw ParseError("--start needs " + std::to_string(f->domain_dim) + " coordinates");
    if (std::abs(f->eval(e).norm() - eta) > 1e-6) throw ParseError("--start is not on the tube within 1e-6");
  }
  const NewtonResult polished = polish_to_tube(*f, e);
  if (!polished.converged) throw ParseError("--start could not be polished onto the tube");
  e = polished.x;

  Vec w;
  if (!target.empty()) {
    const Vec dir = parse_vector(target);
    if (dir.size() != f->codomain_dim) throw ParseError("--target needs " + std::to_string(f->codomain_dim) + " coordinates");
    w = eta * normalize(dir).coords();
  } else if (angle && f->codomain_dim == 2) {
    w = Vec(2);
    w << eta * std::cos(*angle), eta * std::sin(*angle);
  } else {
    throw ParseError("plan-tube needs --target-angle (p = 2) or --target");
  }
  const TaskingPlanner planner = pullback_planner(f, build_planner(static_cast<int>(f->codomain_dim) - 1, opts.margin), oracle);
  return write_tasking_plan(opts, planner, e, w, out);
}

int cmd_plan_arm(const CommonOptions& opts, const std::string& start, const std::string& target, std::ostream& out) {
  check_samples(opts.samples);
  const WorkMapPtr f = rr_arm_workmap();
  const Vec e = parse_vector(start);
  if (e.size() != 2) throw ParseError("--start needs (alpha, beta)");
  const Vec dir = parse_vector(target);
  if (dir.size() != 3) throw ParseError("--target needs 3 coordinates");
  const Vec w = normalize(dir).coords();
  const TaskingPlanner planner = pullback_planner(f, build_planner(2, opts.margin), LiftingOracle::numeric());
  return write_tasking_plan(opts, planner, e, w, out);
}

int cmd_verify(const CommonOptions& opts, bool continuity, double clearance_min, double clearance_max,
               bool timing, std::ostream& out) {
  check_samples(opts.samples);
  SuiteOptions suite{opts.queries, opts.seed, opts.samples};
  nlohmann::json j;
  bool ok = false;
  const std::string& c = opts.case_name;
  if (c.rfind("sphere:", 0) == 0) {
    const SpherePlanner planner = build_planner(sphere_dim_from_case(c), opts.margin);
    const VerificationReport r = run_contract_suite(planner, suite);
    j = r.to_json(timing);
    ok = r.passed();
    if (continuity) {
      nlohmann::json tables = nlohmann::json::array();
      for (int reg = 1; reg <= static_cast<int>(planner.region_count()); ++reg) {
        const ContinuityTable table = continuity_probe(planner, reg, {1e-3, 1e-4, 1e-5}, 64, opts.seed);
        ok = ok && table.monotone;
        tables.push_back(table.to_json());
      }
      j["continuity"] = std::move(tables);
    }
  } else if (c == "hopf") {
    const TaskingPlanner planner = pullback_planner(hopf_germ(), build_planner(2, opts.margin), LiftingOracle::numeric());
    const VerificationReport r = run_contract_suite(planner, tube_query_sampler(planner), suite);
    j = r.to_json(timing);
    ok = r.passed();
  } else if (c == "arm") {
    const TaskingPlanner planner = pullback_planner(rr_arm_workmap(), build_planner(2, opts.margin), LiftingOracle::numeric());
    const VerificationReport r = run_contract_suite(planner, arm_query_sampler(clearance_min, clearance_max), suite);
    j = r.to_json(timing);
    ok = r.passed();
  } else {
    auto g = load_germ(opts);
    if (!g) throw ParseError("verify needs --case sphere:M|hopf|arm|brieskorn|zd:D or --germ FILE");
    const WorkMapPtr f = tube_fibration(g);
    const TaskingPlanner planner = pullback_planner(f, build_planner(1, opts.margin), LiftingOracle::exact());
    const VerificationReport r = run_contract_suite(planner, tube_query_sampler(planner), suite);
    j = r.to_json(timing);
    ok = r.passed();
  }
  emit(opts, out, dump(j));
  return ok ? kExitOk : kExitContractFailure;
}

nlohmann::json fiber_json(const FiberSample& fs) {
  return {{"base", vec_json(fs.base)},
          {"components", fs.components},
          {"converged", fs.converged},
          {"seeds", fs.seeds},
          {"radius", fs.radius}};
}

int cmd_fiber(const CommonOptions& opts, double angle, int seeds, std::ostream& out) {
  if (opts.case_name == "hopf") {
    const WorkMapPtr f = hopf_germ();
    Vec base = Vec::Zero(3);
    base[2] = *f->eta;
    emit(opts, out, dump(fiber_json(sample_fiber(*f, base, seeds, opts.seed))));
    return kExitOk;
  }
  auto g = load_germ(opts);
  if (!g) throw ParseError("fiber needs --germ FILE or --case hopf|brieskorn|zd:D");
  emit(opts, out, dump(fiber_json(sample_fiber(*g, angle, seeds, opts.seed))));
  return kExitOk;
}

int cmd_monodromy(const CommonOptions& opts, int seeds, std::ostream& out) {
  auto g = load_germ(opts);
  if (!g) throw ParseError("monodromy needs --germ FILE or --case brieskorn|zd:D");
  const FiberSample fs = sample_fiber(*g, 0.0, seeds, opts.seed);
  const std::vector<int> perm = monodromy_components(*g, fs);
  const std::vector<int> cycles = cycle_lengths(perm);
  nlohmann::json cyc = nlohmann::json::object();
  for (std::size_t len = 1; len < cycles.size(); ++len) {
    if (cycles[len] > 0) cyc[std::to_string(len)] = cycles[len];
  }
  emit(opts, out, dump({{"fiber", fiber_json(fs)}, {"permutation", perm}, {"cycle_lengths", cyc}}));
  return kExitOk;
}

int cmd_link(const CommonOptions& opts, int seeds, std::ostream& out) {
  auto g = load_germ(opts);
  if (!g) throw ParseError("link needs --germ FILE or --case brieskorn|zd:D");
  const LinkSample link = sample_link(*g, seeds, opts.seed);
  emit(opts, out, dump({{"points", link.points.size()}, {"seeds", link.seeds},
                        {"link_nonempty", std::string(to_string(link.evidence))}}));
  return kExitOk;
}

nlohmann::json probe_json(const RegularityProbe& p) {
  return {{"min_sigma_df", p.min_sigma_df},
          {"min_sigma_dfr", p.min_sigma_dfr},
          {"samples", p.samples},
          {"verdict", p.probably_regular ? "probably regular" : "possibly singular"},
          {"certifying", false}};
}

int cmd_probe(const CommonOptions& opts, int samples, std::ostream& out) {
  auto g = load_germ(opts);
  if (!g) throw ParseError("probe needs --germ FILE or --case brieskorn|zd:D");
  emit(opts, out, dump(probe_json(regularity_probe(*g, samples, opts.seed))));
  return kExitOk;
}

int cmd_certify(const CommonOptions& opts, int seeds, bool sample_link_flag, std::ostream& out) {
  nlohmann::json j;
  bool consistent = true;
  if (opts.case_name == "hopf") {
    const Certificate tc = certify_tc(hopf_facts());
    consistent = tc.consistent() && planner_bound_consistent(build_planner(2, opts.margin).region_count(), tc);
    j = {{"tc", tc.to_json()}, {"planner_regions", 3}, {"consistent", consistent}};
  } else {
    auto g = load_germ(opts);
    if (!g) throw ParseError("certify needs --germ FILE or --case hopf|brieskorn|zd:D");
    std::optional<LinkSample> link;
    if (sample_link_flag) link = sample_link(*g, seeds, opts.seed);
    const FibrationFacts facts = germ_facts(*g, link);
    const Certificate tc = certify_tc(facts);
    const FiberSample fs = sample_fiber(*g, 0.0, seeds, opts.seed);
    const Certificate sec = certify_sec(facts, fs.components);
    const std::size_t regions = build_planner(1, opts.margin).region_count();
    consistent = tc.consistent() && sec.consistent() && planner_bound_consistent(regions, tc);
    j = {{"tc", tc.to_json()},
         {"sec", sec.to_json()},
         {"fiber", fiber_json(fs)},
         {"planner_regions", regions},
         {"consistent", consistent}};
  }
  emit(opts, out, dump(j));
  return consistent ? kExitOk : kExitContractFailure;
}

void add_common(CLI::App* sub, CommonOptions& o, bool germ) {
  if (germ) {
    sub->add_option("--germ", o.germ_path, "Germ JSON file")->check(CLI::ExistingFile);
  }
  sub->add_option("--seed", o.seed, "Master random seed")->capture_default_str();
  sub->add_option("--out", o.out_path, "Write output here instead of stdout");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tasking planners on spheres and Milnor tube fibrations"};
  app.require_subcommand(1);
  CommonOptions o;

  auto* plan_sphere = app.add_subcommand("plan-sphere", "Plan a path between two points of S^m");
  int dim = 1;
  std::string from, to;
  plan_sphere->add_option("--dim,-m", dim, "Sphere dimension m")->required();
  plan_sphere->add_option("--from", from, "Start point, comma separated")->required();
  plan_sphere->add_option("--to", to, "Goal point, comma separated")->required();
  plan_sphere->add_option("--samples", o.samples, "Number of path samples")->capture_default_str();
  plan_sphere->add_option("--margin", o.margin, "Region margin")->capture_default_str();
  plan_sphere->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_common(plan_sphere, o, false);

  auto* plan_tube = app.add_subcommand("plan-tube", "Plan on a Milnor tube through the pullback planner");
  std::string start, target;
  std::optional<double> target_angle;
  plan_tube->add_option("--case", o.case_name, "hopf, brieskorn, or zd:D when no --germ is given");
  plan_tube->add_option("--start", start, "Start configuration (random tube point from --seed if omitted)");
  plan_tube->add_option("--target-angle", target_angle, "Goal angle on S^1_eta");
  plan_tube->add_option("--target", target, "Goal direction in R^p (scaled to radius eta)");
  plan_tube->add_option("--samples", o.samples, "Number of path samples")->capture_default_str();
  plan_tube->add_option("--margin", o.margin, "Base planner margin")->capture_default_str();
  plan_tube->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_common(plan_tube, o, true);

  auto* plan_arm = app.add_subcommand("plan-arm", "Plan an RR-arm motion to a pointing direction");
  plan_arm->add_option("--start", start, "Joint angles alpha,beta")->required();
  plan_arm->add_option("--target", target, "Goal direction in R^3")->required();
  plan_arm->add_option("--samples", o.samples, "Number of path samples")->capture_default_str();
  plan_arm->add_option("--margin", o.margin, "Base planner margin")->capture_default_str();
  plan_arm->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_common(plan_arm, o, false);

  auto* verify = app.add_subcommand("verify", "Run the randomized contract suite");
  bool continuity = false;
  bool timing = false;
  double clearance_min = 0.1;
  double clearance_max = 2.0;
  verify->add_option("--case", o.case_name, "sphere:M, hopf, arm, brieskorn, or zd:D");
  verify->add_option("--queries", o.queries, "Number of random queries")->capture_default_str();
  verify->add_option("--samples", o.samples, "Path samples per query")->capture_default_str();
  verify->add_option("--margin", o.margin, "Region margin")->capture_default_str();
  verify->add_flag("--continuity", continuity, "Add continuity tables (sphere cases)");
  verify->add_flag("--timing", timing, "Include wall time in the report");
  verify->add_option("--clearance-min", clearance_min, "Arm goals: minimum chordal distance from the poles")->capture_default_str();
  verify->add_option("--clearance-max", clearance_max, "Arm goals: maximum chordal distance from the poles")->capture_default_str();
  add_common(verify, o, true);

  auto* fiber = app.add_subcommand("fiber", "Sample a Milnor fiber and count its components");
  double angle = 0.0;
  int seeds = 1000;
  fiber->add_option("--case", o.case_name, "hopf, brieskorn, or zd:D when no --germ is given");
  fiber->add_option("--angle", angle, "Base angle phi")->capture_default_str();
  fiber->add_option("--seeds", seeds, "Newton seeds")->capture_default_str();
  add_common(fiber, o, true);

  auto* monodromy = app.add_subcommand("monodromy", "Component permutation of the full base loop");
  monodromy->add_option("--case", o.case_name, "brieskorn or zd:D when no --germ is given");
  monodromy->add_option("--seeds", seeds, "Newton seeds")->capture_default_str();
  add_common(monodromy, o, true);

  auto* link = app.add_subcommand("link", "Sample the link f^-1(0) on the sphere of radius epsilon");
  link->add_option("--case", o.case_name, "brieskorn or zd:D when no --germ is given");
  link->add_option("--seeds", seeds, "Newton seeds")->capture_default_str();
  add_common(link, o, true);

  auto* probe = app.add_subcommand("probe", "Sampled regularity probe on the tube (heuristic)");
  int probe_samples = 2000;
  probe->add_option("--case", o.case_name, "brieskorn or zd:D when no --germ is given");
  probe->add_option("--samples", probe_samples, "Tube samples")->capture_default_str();
  add_common(probe, o, true);

  auto* certify = app.add_subcommand("certify", "TC and sectional-number certificates");
  bool sample_link_flag = false;
  certify->add_option("--case", o.case_name, "hopf, brieskorn, or zd:D when no --germ is given");
  certify->add_option("--seeds", seeds, "Newton seeds for fiber sampling")->capture_default_str();
  certify->add_flag("--sample-link", sample_link_flag, "Replace an unknown link flag by sampled evidence");
  add_common(certify, o, true);

  std::vector<std::string> argv_store{"tcplan"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParseError;
  }

  try {
    if (*plan_sphere) return cmd_plan_sphere(o, dim, from, to, out);
    if (*plan_tube) return cmd_plan_tube(o, start, target_angle, target, out);
    if (*plan_arm) return cmd_plan_arm(o, start, target, out);
    if (*verify) return cmd_verify(o, continuity, clearance_min, clearance_max, timing, out);
    if (*fiber) return cmd_fiber(o, angle, seeds, out);
    if (*monodromy) return cmd_monodromy(o, seeds, out);
    if (*link) return cmd_link(o, seeds, out);
    if (*probe) return cmd_probe(o, probe_samples, out);
    if (*certify) return cmd_certify(o, seeds, sample_link_flag, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const LiftFailure& e) {
    err << "lift failure: " << e.reason() << " at t*=" << format_double(e.t_star()) << '\n';
    return kExitLiftFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Parse ? kExitParseError : kExitContractFailure;
  }
  return kExitParseError;
}

}  // namespace tcplan
