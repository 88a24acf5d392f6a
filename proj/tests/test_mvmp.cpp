#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dlpp/error.hpp"
#include "dlpp/mvmp.hpp"

using namespace dlpp;

namespace {

const WeightAlphabet kBit = WeightAlphabet::bernoulli(Rational(1, 2));

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

TEST_CASE("finite space masses sum to one") {
  const FiniteSpace space(Box({2, 2}), WeightAlphabet::parse("0:1/3,1:2/3"));
  CHECK(space.total_states() == 16);
  Rational total = 0;
  for (std::uint64_t i = 0; i < 16; ++i) {
    const Environment env = space.environment_at(i);
    CHECK(space.index_of(env) == i);
    total += space.probability(env);
  }
  CHECK(total == 1);
}

TEST_CASE("identity instance holds with equality") {
  const FiniteSpace space(Box({2, 2}), kBit);
  const MvmpReport report = verify_mvmp(space, identity_instance(space));
  CHECK(report.p_e == 1);
  CHECK(report.p_e_prime == 1);
  CHECK(report.min_s == 1);
  CHECK(report.max_t == 1);
  CHECK(report.bound_rhs == 1);
  CHECK(report.holds_with_mass());
  CHECK(*report.slack == 1);
}

// Frozen values from tests/oracles/mvmp_lift.py (independent brute force).
TEST_CASE("lift instance matches the brute-force oracle") {
  struct Frozen {
    Box box;
    Rational pe, pe_prime, epsilon, bound;
    std::uint64_t max_t, checks;
  };
  const Frozen cases[] = {
      {Box({2, 2}), Rational(13, 16), Rational(3, 16), Rational(1, 8), Rational(21, 2), 7, 20},
      {Box({2, 3}), Rational(7, 8), Rational(1, 8), Rational(1, 16), Rational(30), 15, 104},
      {Box({3, 3}), Rational(461, 512), Rational(51, 512), Rational(1, 32), Rational(1581, 16), 31, 1184},
  };
  for (const Frozen& f : cases) {
    const FiniteSpace space(f.box, kBit);
    const MvmpReport report = verify_mvmp(space, build_surgery_instance(TransformKind::Lift, space, {}));
    CHECK(report.p_e == f.pe);
    CHECK(report.p_e_prime == f.pe_prime);
    CHECK(report.epsilon == f.epsilon);
    CHECK(report.min_s == 1);
    CHECK(report.max_t == f.max_t);
    CHECK(report.bound_rhs == f.bound);
    CHECK(report.hypothesis_checks == f.checks);
    CHECK(report.holds_with_mass());
  }
}

TEST_CASE("inflated epsilon is flagged") {
  const FiniteSpace space(Box({2, 3}), kBit);
  SurgeryParams params;
  params.epsilon = Rational(2);
  const MvmpReport report = verify_mvmp(space, build_surgery_instance(TransformKind::Lift, space, params));
  CHECK_FALSE(report.hypothesis_holds);
  CHECK_FALSE(report.holds());
  CHECK(report.violation_count > 0);
  REQUIRE_FALSE(report.violations.empty());
  CHECK(report.violations.front().lhs < report.violations.front().rhs);
}

TEST_CASE("epsilon follows the changed-site budget") {
  const FiniteSpace bit3(Box({3, 3}), kBit);
  const Rational p(1, 2);
  CHECK(build_surgery_instance(TransformKind::Perco, bit3, {}).epsilon == pow(p, 3));
  SurgeryParams r1;
  r1.R = 1;
  CHECK(build_surgery_instance(TransformKind::RGood, bit3, r1).epsilon == pow(p, 9));
  SurgeryParams lift;
  lift.lift_sites = 3;
  CHECK(build_surgery_instance(TransformKind::Lift, bit3, lift).epsilon == pow(p, 3));
  const FiniteSpace d3(Box({2, 2, 2}), WeightAlphabet::bernoulli(Rational(1, 4)));
  SurgeryParams two;
  two.s = 2;
  CHECK(build_surgery_instance(TransformKind::Perco, d3, two).epsilon == pow(Rational(1, 4), 10));
}

TEST_CASE("perco instance holds with positive mass") {
  const FiniteSpace space(Box({3, 3}), kBit);
  const MvmpReport report = verify_mvmp(space, build_surgery_instance(TransformKind::Perco, space, {}));
  CHECK(report.holds_with_mass());
  CHECK(report.landing_holds);
  CHECK(report.p_e_prime == 1);
  CHECK(*report.min_s >= 1);
}

TEST_CASE("lift with a count cap and fewer sub-max sites") {
  const FiniteSpace space(Box({3, 3}), kBit);
  SurgeryParams params;
  params.count_cap = BigInt(2);
  params.lift_sites = 2;
  const MvmpReport report = verify_mvmp(space, build_surgery_instance(TransformKind::Lift, space, params));
  CHECK(report.holds_with_mass());
  CHECK(report.epsilon == Rational(1, 4));
}

TEST_CASE("rgood instance on a small box is vacuous or holds") {
  const FiniteSpace space(Box({4, 4}), kBit);
  const MvmpReport report = verify_mvmp(space, build_surgery_instance(TransformKind::RGood, space, {}));
  CHECK(report.holds());
  if (!report.vacuous) CHECK(*report.min_s >= 1);
}

TEST_CASE("thread count does not change the report") {
  const FiniteSpace space(Box({3, 3}), kBit);
  const MvmpInstance instance = build_surgery_instance(TransformKind::Perco, space, {});
  MvmpOptions many;
  many.threads = 4;
  CHECK(verify_mvmp(space, instance).to_json() == verify_mvmp(space, instance, many).to_json());
}

TEST_CASE("errors") {
  const FiniteSpace big(Box({5, 5}), kBit);
  MvmpOptions tight;
  tight.exhaustion_limit = 1 << 20;
  CHECK(kind_of([&] { verify_mvmp(big, identity_instance(big), tight); }) == ErrorKind::ExhaustionLimit);

  const FiniteSpace space(Box({2, 2}), kBit);
  MvmpInstance empty = identity_instance(space);
  empty.smap = [](InstanceContext&) { return std::vector<TransformPlan>{}; };
  CHECK(kind_of([&] { verify_mvmp(space, empty); }) == ErrorKind::DegenerateInstance);

  const FiniteSpace no_top(Box({2, 2}), WeightAlphabet::parse("0:1/2,1/2:1/2,1:0"));
  CHECK(kind_of([&] { build_surgery_instance(TransformKind::Lift, no_top, {}); }) == ErrorKind::Instance);
}

TEST_CASE("report JSON uses num/den strings") {
  const FiniteSpace space(Box({2, 3}), kBit);
  const auto j = verify_mvmp(space, build_surgery_instance(TransformKind::Lift, space, {})).to_json();
  CHECK(j["PE"] == "7/8");
  CHECK(j["boundRHS"] == "30/1");
  CHECK(j["holds"] == true);
}
