#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dlpp/environment.hpp"
#include "dlpp/numeric.hpp"
#include "dlpp/path.hpp"

namespace dlpp {

// perco: star -> max, shield -> min at 2-separated turns.
// lift:  every sub-max site of the path -> max.
// rgood: inside the l1 R-ball of each (2R+1)-separated R-good turn, the path
//        and the star -> max, everything else -> min.
enum class TransformKind { Perco, Lift, RGood };

std::string_view to_string(TransformKind kind) noexcept;
TransformKind parse_transform_kind(std::string_view text);

struct TransformPlan {
  TransformKind kind = TransformKind::Perco;
  DirectedPath path;
  std::vector<Site> S;
  int R = 0;
};

// Lift plans carry S = { y in path : w_y < max }, derived from the environment.
TransformPlan lift_plan(const Environment& env, const DirectedPath& path);

struct Rewrite {
  std::size_t index = 0;
  std::int64_t value = 0;
};

struct Surgery {
  std::vector<Rewrite> rewrites;  // sorted by site index, one entry per site
  std::size_t clipped = 0;        // rule sites outside the box (dropped)
};

// Throws ErrorKind::Plan when the plan violates its kind's invariants.
void validate_plan(const Environment& env, const TransformPlan& plan);
// Validated rewrite set of the plan (the support of the surgery).
Surgery plan_surgery(const Environment& env, const TransformPlan& plan);
// Ceiling on the support size: (2d-1)|S|, |S|, (2R+1)^d |S|.
std::size_t support_ceiling(const TransformPlan& plan, std::size_t dimension);

Environment apply_perco_transform(const Environment& env, const TransformPlan& plan);
Environment apply_lift_transform(const Environment& env, const DirectedPath& path);
Environment apply_rgood_transform(const Environment& env, const TransformPlan& plan);
Environment apply_transform(const Environment& env, const TransformPlan& plan);

std::vector<std::size_t> changed_sites(const Environment& a, const Environment& b);
// P(omega' restricted to support) / P(omega restricted to support).
Rational support_probability_ratio(const Environment& env, const Environment& env_prime,
                                   std::span<const std::size_t> support);

// Excursion of `other` away from `base`: z0, z1 on base, interior off base.
struct Excursion {
  Site z0;
  Site z1;
  std::vector<Site> interior;
};

std::vector<Excursion> excursions(const DirectedPath& base, const DirectedPath& other);

struct LocalityViolation {
  DirectedPath path;
  std::optional<Site> z0;
  std::optional<Site> z1;
  std::string reason;
};

struct LocalityReport {
  bool item1_holds = false;
  bool item2_holds = false;
  std::vector<Site> bifurcation_set;  // bifurcations of the path in omega'
  std::vector<LocalityViolation> violations;
  std::optional<BigInt> overflow;     // maximal-path count of omega' above cap
  std::size_t paths_checked = 0;

  bool passes() const noexcept { return !overflow && item1_holds && item2_holds; }
};

// Locality of omega' = T(omega, path, S): item 1 (path stays maximal, new
// bifurcations only at S) and item 2 (every excursion of every maximal path
// of omega' has equal omega-weight or is a single star of S).
LocalityReport check_locality(const Environment& env, const Environment& env_prime, const DirectedPath& path,
                              std::span<const Site> S, std::uint64_t cap);

// Lift surgery check: the path reaches the all-max weight in omega' and every
// maximal path of omega' is maximal in omega.
LocalityReport check_lift_containment(const Environment& env, const Environment& env_prime,
                                      const DirectedPath& path, std::uint64_t cap);

struct MapCandidate {
  Environment env;
  TransformPlan plan;
};

struct MapCountAudit {
  BigInt count;                      // distinct (path, S) reaching omega'
  std::vector<std::string> rejected;  // candidates with T(env, path, S) != omega'
};

MapCountAudit audit_map_count(const Environment& env_prime, std::span<const MapCandidate> candidates);

// Batch driver behind `transform-check` and the acceptance sweeps.
struct TransformCheckConfig {
  TransformKind kind = TransformKind::Perco;
  Box box{{4, 4}};
  WeightAlphabet alphabet = WeightAlphabet::bernoulli(Rational(1, 2));
  std::optional<Site> target;          // default: box corner
  bool exhaustive = false;             // every environment of the box
  std::optional<Environment> environment;  // check this one environment only
  std::uint64_t instances = 1000;      // seeded mode: valid instances wanted
  std::uint64_t max_environments = 0;  // seeded mode scan limit (0: 200 * instances)
  std::uint64_t base_seed = 1;
  int R = 2;
  bool all_plans = false;              // every maximal path and every separated subset
  std::size_t max_plan_size = 3;       // subset size cap when all_plans
  std::uint64_t path_cap = 4096;
  std::uint64_t exhaustion_limit = std::uint64_t{1} << 22;
};

struct TransformCheckSummary {
  std::uint64_t environments = 0;  // scanned
  std::uint64_t eligible = 0;      // event holds and a valid plan exists
  std::uint64_t instances = 0;     // (environment, plan) pairs checked
  std::uint64_t passes = 0;
  std::uint64_t violation_count = 0;
  std::vector<std::string> violations;  // first few, for reports
  std::uint64_t locality_failures = 0;
  std::uint64_t amplification_failures = 0;
  std::uint64_t support_failures = 0;
  std::uint64_t ratio_failures = 0;
  std::uint64_t bifurcation_failures = 0;
  std::uint64_t overflows = 0;
  std::uint64_t clipped = 0;
  std::size_t max_plan_size = 0;
  BigInt max_map_count = 0;

  bool clean() const noexcept { return instances > 0 && passes == instances; }
  nlohmann::json to_json() const;
};

TransformCheckSummary run_transform_check(const TransformCheckConfig& config);

}  // namespace dlpp
