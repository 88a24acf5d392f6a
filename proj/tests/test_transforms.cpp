#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "dlpp/environment.hpp"
#include "dlpp/error.hpp"
#include "dlpp/passage.hpp"
#include "dlpp/path_analysis.hpp"
#include "dlpp/transforms.hpp"

using namespace dlpp;

namespace {

const WeightAlphabet kBit = WeightAlphabet::bernoulli(Rational(1, 2));

DirectedPath path_of(std::string_view steps) { return DirectedPath::from_step_string(Site{0, 0}, steps); }

Environment with_ones(const Box& box, std::initializer_list<Site> ones) {
  std::vector<std::int64_t> w(box.size(), 0);
  for (const Site& s : ones) w[box.index_of(s)] = 1;
  return Environment(box, kBit, 0, w);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("perco surgery raises the star and clears the shield") {
  const Box box({4, 4});
  const Environment env = constant_environment(box, kBit, 1);
  const TransformPlan plan{TransformKind::Perco, path_of("111222"), {Site{3, 0}}, 0};
  const Surgery surgery = plan_surgery(env, plan);
  CHECK(surgery.rewrites.size() == 3);
  const Environment out = apply_perco_transform(env, plan);
  CHECK(out.weight(Site{2, 1}) == 1);
  CHECK(out.weight(Site{1, 1}) == 0);
  CHECK(out.weight(Site{2, 2}) == 0);
  CHECK(changed_sites(env, out).size() == 2);
  CHECK(bifurcations_of(plan.path, out).indices == std::vector<std::size_t>{4});
  CHECK(support_ceiling(plan, 2) == 3);
  const LocalityReport report = check_locality(env, out, plan.path, plan.S, 4096);
  CHECK(report.passes());
  CHECK(report.paths_checked == 4);
}

TEST_CASE("plans are validated before any rewrite") {
  const Box box({4, 4});
  const Environment env = constant_environment(box, kBit, 0);
  const DirectedPath p = path_of("121212");
  CHECK(kind_of([&] { validate_plan(env, {TransformKind::Perco, p, {Site{3, 0}}, 0}); }) == ErrorKind::Plan);
  CHECK(kind_of([&] { validate_plan(env, {TransformKind::Perco, p, {Site{1, 0}, Site{1, 1}}, 0}); }) ==
        ErrorKind::Plan);
  CHECK(kind_of([&] { validate_plan(env, {TransformKind::Perco, p, {Site{1, 0}, Site{1, 0}}, 0}); }) ==
        ErrorKind::Plan);
  validate_plan(env, {TransformKind::Perco, p, {Site{1, 0}, Site{2, 1}}, 0});
  // Turn at position 4 of a 7-site path: 2 < 4 < 4 fails, so not 2-good.
  CHECK(kind_of([&] { validate_plan(env, {TransformKind::RGood, p, {Site{2, 1}}, 2}); }) == ErrorKind::Plan);
  CHECK(kind_of([&] { validate_plan(env, {TransformKind::Lift, p, {Site{0, 0}}, 0}); }) == ErrorKind::Plan);
  validate_plan(env, lift_plan(env, p));
  CHECK(kind_of([&] { validate_plan(env, {TransformKind::Perco, path_of("11112"), {}, 0}); }) == ErrorKind::Plan);
}

TEST_CASE("lift surgery saturates the path") {
  const Box box({4, 4});
  const Environment env = with_ones(box, {Site{1, 0}, Site{3, 3}});
  const DirectedPath p = path_of("111222");
  const TransformPlan plan = lift_plan(env, p);
  CHECK(plan.S.size() == 5);
  const Environment out = apply_lift_transform(env, p);
  CHECK(p.weight(out) == 7);
  CHECK(changed_sites(env, out).size() == 5);
  std::vector<std::size_t> support;
  for (const Rewrite& r : plan_surgery(env, plan).rewrites) support.push_back(r.index);
  CHECK(support_probability_ratio(env, out, support) == 1);
  CHECK(check_lift_containment(env, out, p, 4096).passes());
}

TEST_CASE("rgood surgery writes the whole ball") {
  const Box box({6, 6});
  const Environment env = constant_environment(box, kBit, 0);
  const DirectedPath p = path_of("1111122222");
  const TransformPlan plan{TransformKind::RGood, p, {Site{5, 0}}, 2};
  const Surgery surgery = plan_surgery(env, plan);
  // Ball of radius 2 around the corner (5,0), clipped to the box: 6 sites.
  CHECK(surgery.rewrites.size() == 6);
  CHECK(surgery.clipped == 7);
  const Environment out = apply_rgood_transform(env, plan);
  CHECK(out.weight(Site{4, 1}) == 1);  // star
  CHECK(out.weight(Site{3, 0}) == 1);
  CHECK(out.weight(Site{5, 2}) == 1);
  CHECK(out.weight(Site{4, 0}) == 1);
  CHECK(out.weight(Site{3, 1}) == 0);
  CHECK(compute_passage_field(out, Site{0, 0}).path_count(Site{5, 5}) >= 2);
  CHECK(check_locality(env, out, p, plan.S, 4096).passes());
}

TEST_CASE("excursions split a path at its common sites") {
  const DirectedPath base = path_of("1122");
  const DirectedPath other = path_of("1212");
  const auto ex = excursions(base, other);
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].z0 == Site{1, 0});
  CHECK(ex[0].z1 == Site{2, 1});
  CHECK(ex[0].interior == std::vector<Site>{Site{1, 1}});
  CHECK(excursions(base, base).empty());
  CHECK(kind_of([&] { excursions(base, path_of("112")); }) == ErrorKind::Domain);
}

TEST_CASE("locality checker flags a non-local rewrite") {
  const Box box({3, 3});
  const Environment env = with_ones(box, {Site{1, 0}});
  const DirectedPath p = path_of("1122");
  const Environment env_prime =
      with_ones(box, {Site{0, 0}, Site{1, 0}, Site{2, 0}, Site{2, 1}, Site{2, 2}, Site{0, 1}, Site{0, 2}, Site{1, 2}});
  const LocalityReport report = check_locality(env, env_prime, p, {}, 4096);
  CHECK_FALSE(report.item2_holds);
  CHECK_FALSE(report.passes());
  CHECK_FALSE(report.violations.empty());
  CHECK(kind_of([&] { check_locality(env, env_prime, path_of("2211"), {}, 4096); }) == ErrorKind::Domain);
}

TEST_CASE("map-count audit counts distinct preimage labels") {
  const Box box({4, 4});
  const Environment a = constant_environment(box, kBit, 1);
  const TransformPlan plan{TransformKind::Perco, path_of("111222"), {Site{3, 0}}, 0};
  const Environment image = apply_transform(a, plan);
  std::vector<std::int64_t> w(a.weights().begin(), a.weights().end());
  w[box.index_of(Site{1, 1})] = 0;
  const Environment b(box, kBit, 0, w);
  const TransformPlan other{TransformKind::Perco, path_of("111222"), {Site{1, 0}}, 0};
  std::vector<MapCandidate> candidates{{a, plan}, {b, plan}, {a, other}};
  const MapCountAudit audit = audit_map_count(image, candidates);
  CHECK(audit.count == 1);
  CHECK(audit.rejected.size() == 1);
}

TEST_CASE("exhaustive perco sweep over 3x3 with every plan is clean") {
  TransformCheckConfig config;
  config.kind = TransformKind::Perco;
  config.box = Box({3, 3});
  config.exhaustive = true;
  config.all_plans = true;
  const TransformCheckSummary summary = run_transform_check(config);
  CHECK(summary.environments == 512);
  CHECK(summary.eligible > 0);
  CHECK(summary.clean());
  CHECK(summary.violation_count == 0);
  CHECK(summary.max_map_count <= pow2(static_cast<unsigned>(5 * summary.max_plan_size)));
}

TEST_CASE("seeded lift sweep is clean") {
  TransformCheckConfig config;
  config.kind = TransformKind::Lift;
  config.box = Box({5, 5});
  config.instances = 200;
  config.all_plans = true;
  const TransformCheckSummary summary = run_transform_check(config);
  CHECK(summary.eligible == 200);
  CHECK(summary.clean());
}

TEST_CASE("seeded binary rgood sweep is clean for R = 2 and 3") {
  for (int R : {2, 3}) {
    TransformCheckConfig config;
    config.kind = TransformKind::RGood;
    config.box = Box({7, 7});
    config.instances = 150;
    config.R = R;
    config.all_plans = true;
    const TransformCheckSummary summary = run_transform_check(config);
    CHECK(summary.eligible == 150);
    CHECK(summary.clean());
    CHECK(summary.amplification_failures == 0);
  }
}

// With an intermediate weight, an excursion may leave the R-ball and rejoin
// the path at distance exactly R, tying in omega' without being weight-neutral
// in omega. Binary alphabets make that case exactly neutral.
TEST_CASE("rgood locality fails off binary alphabets") {
  const auto alphabet = WeightAlphabet::parse("0:2/5,1/2:1/5,1:2/5");
  const Environment env = generate_environment(Box({7, 7}), alphabet, 2643627734347475409ULL);
  const PassageField field = compute_passage_field(env, Site{0, 0});
  const DirectedPath p = first_maximal_path(field, env, Site{6, 6});
  REQUIRE(p.step_string() == "222112211112");
  const TransformPlan plan{TransformKind::RGood, p, {Site{2, 5}}, 2};
  const Environment out = apply_rgood_transform(env, plan);
  CHECK(env.weight(Site{4, 4}) == 2);  // outside the ball, at max
  const LocalityReport report = check_locality(env, out, p, plan.S, 4096);
  CHECK(report.item1_holds);
  CHECK_FALSE(report.item2_holds);
  REQUIRE_FALSE(report.violations.empty());
  CHECK(*report.violations.front().z0 == Site{2, 4});
  CHECK(*report.violations.front().z1 == Site{4, 5});
  // Amplification still holds.
  CHECK(compute_passage_field(out, Site{0, 0}).path_count(Site{6, 6}) >= 2);
}

TEST_CASE("sweep refuses spaces above the exhaustion limit") {
  TransformCheckConfig config;
  config.box = Box({5, 5});
  config.exhaustive = true;
  CHECK(kind_of([&] { run_transform_check(config); }) == ErrorKind::ExhaustionLimit);
}
