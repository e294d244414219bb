#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "tcplan/fibration.hpp"
#include "tcplan/germ.hpp"
#include "tcplan/milnor.hpp"
#include "tcplan/sphere_planner.hpp"

namespace tcplan {

// ---------------------------------------------------------------------------
// Certificates

enum class Quantity { TC, Sec };
enum class FlagSource { Declared, Sampled };

std::string_view to_string(Quantity q);
std::string_view to_string(FlagSource s);

/// What is known about a tube fibration f|: E -> S^{p-1}_eta when certifying.
struct FibrationFacts {
  std::string name;
  int p = 2;
  TriState link_nonempty = TriState::Unknown;
  FlagSource link_source = FlagSource::Declared;
  TriState pi_trivial = TriState::Unknown;
  FlagSource pi_source = FlagSource::Declared;
  std::optional<int> fiber_components;
};

/// Facts for a complex germ (p = 2) from its declared flags. A link sample, when given,
/// overrides an `unknown` link flag and is recorded as sampled evidence.
FibrationFacts germ_facts(const Germ& g, const std::optional<LinkSample>& link = std::nullopt);
/// Hopf tube: empty link, circle fibers (pi_1 = Z, so not trivial).
FibrationFacts hopf_facts();

struct Certificate {
  Quantity quantity = Quantity::TC;
  int lower = 0;
  int upper = 0;
  std::optional<int> exact;
  std::vector<std::string> tags;
  std::vector<std::string> assumptions;
  std::optional<TriState> section_exists;
  nlohmann::json inputs;

  /// lower <= upper and lower <= exact <= upper.
  bool consistent() const;
  nlohmann::json to_json() const;
};

/// TC of the tube fibration: 2 <= TC <= TC(S^{p-1}); exact when p is even, or when p is odd
/// and the link is nonempty or pi_{p-2}(F) is trivial.
Certificate certify_tc(const FibrationFacts& facts);
/// Sectional number of a p = 2 tube fibration from its fiber component count.
Certificate certify_sec(const FibrationFacts& facts, int fiber_components);

/// A planner with k regions proves TC <= k; on the coded examples this must equal the
/// upper bound from the case analysis.
bool planner_bound_consistent(std::size_t region_count, const Certificate& tc);

// ---------------------------------------------------------------------------
// Contract suites

/// Per-query seed derived from the master seed and the query index.
std::uint64_t query_seed(std::uint64_t master, std::uint64_t index);

struct SuiteOptions {
  std::size_t queries = 1000;
  std::uint64_t seed = 42;
  int samples_per_path = 256;
};

struct QueryFailure {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string kind;
  std::string detail;
  std::optional<int> region;
  std::optional<double> t_star;
};

struct VerificationReport {
  std::string planner_id;
  std::size_t regions = 0;
  std::size_t queries = 0;
  std::size_t coverage_failures = 0;
  std::size_t dispatch_failures = 0;
  std::size_t contract_failures = 0;
  std::size_t lift_failures = 0;
  double max_endpoint_error = 0.0;
  double mean_endpoint_error = 0.0;
  double max_start_error = 0.0;
  double max_path_deviation = 0.0;  // off-sphere for sphere planners, projection residual for lifts
  std::vector<std::size_t> region_histogram;
  std::vector<QueryFailure> failures;
  double wall_seconds = 0.0;

  bool passed() const { return failures.empty(); }
  /// Wall time is left out unless requested so reports stay byte-identical across runs.
  nlohmann::json to_json(bool include_timing = false) const;
};

VerificationReport run_contract_suite(const SpherePlanner& planner, const SuiteOptions& opts);

/// Draws a query (e, w) with e on the tube and w on S^{p-1}_eta.
using QuerySampler = std::function<std::pair<Vec, Vec>(std::mt19937_64&)>;

/// Tube start from a random ball seed, uniform goal on the base sphere.
QuerySampler tube_query_sampler(const TaskingPlanner& planner);
/// RR arm queries whose start image and goal lie at chordal distance in
/// [min_clearance, max_clearance] from both poles.
QuerySampler arm_query_sampler(double min_clearance, double max_clearance = 2.0);

VerificationReport run_contract_suite(const TaskingPlanner& planner, const QuerySampler& sampler,
                                      const SuiteOptions& opts);

// ---------------------------------------------------------------------------
// Continuity

struct ContinuityRow {
  double scale = 0.0;
  double max_deviation = 0.0;
  double max_ratio = 0.0;  // deviation / scale, a sampled Lipschitz estimate
};

struct ContinuityTable {
  int region = 0;
  int pairs = 0;
  std::vector<ContinuityRow> rows;
  bool monotone = false;

  nlohmann::json to_json() const;
};

/// Sup-over-t deviation between a region's paths for query pairs and their perturbations
/// at each scale. Both pairs sit margin/2 inside the region.
ContinuityTable continuity_probe(const SpherePlanner& planner, int region,
                                 const std::vector<double>& scales = {1e-3, 1e-4, 1e-5}, int pairs = 64,
                                 std::uint64_t seed = 42);

}  // namespace tcplan
