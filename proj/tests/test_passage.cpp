#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dlpp/environment.hpp"
#include "dlpp/error.hpp"
#include "dlpp/passage.hpp"
#include "support/oracle.hpp"

using namespace dlpp;

namespace {

std::string steps_text(const std::vector<int>& steps) {
  std::string s;
  for (int a : steps) s += static_cast<char>('1' + a);
  return s;
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

TEST_CASE("all 512 binary environments of the 3x3 box agree with brute force") {
  const Box box({3, 3});
  const auto alphabet = WeightAlphabet::bernoulli(Rational(1, 2));
  const Site x{2, 2};
  for (std::uint64_t i = 0; i < 512; ++i) {
    const Environment env = environment_from_index(box, alphabet, i);
    const PassageField field = compute_passage_field(env, Site{0, 0});
    const auto ref = oracle::point_to_point(env, Site{0, 0}, x);
    CHECK(field.max_weight(x) == ref.max_weight);
    CHECK(field.path_count(x) == ref.count);
    CHECK(min_turns_over_maximal(env, x) == ref.min_turns);
  }
}

TEST_CASE("random d=3 environments agree with brute force at every site") {
  const auto alphabet = WeightAlphabet::parse("0:1/3,1:1/3,2:1/3");
  const Box box({3, 3, 3});
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Environment env = generate_environment(box, alphabet, seed);
    const PassageField field = compute_passage_field(env, Site::zero(3));
    for (std::size_t i = 0; i < box.size(); ++i) {
      const Site x = box.site_at(i);
      const auto ref = oracle::point_to_point(env, Site::zero(3), x);
      CHECK(field.max_weight(x) == ref.max_weight);
      CHECK(field.path_count(x) == ref.count);
    }
  }
}

TEST_CASE("constant environments count every path") {
  SUBCASE("6x6") {
    const Box box({6, 6});
    const Environment env = constant_environment(box, WeightAlphabet::parse("1:1"), 1);
    const PassageField field = compute_passage_field(env, Site{0, 0});
    for (std::size_t i = 0; i < box.size(); ++i) CHECK(field.path_count_at(i) == multinomial(box.site_at(i)));
    CHECK(field.path_count(Site{2, 2}) == 6);
  }
  SUBCASE("4x4x4") {
    const Box box({4, 4, 4});
    const Environment env = constant_environment(box, WeightAlphabet::parse("0:1"), 0);
    const PassageField field = compute_passage_field(env, Site::zero(3));
    for (std::size_t i = 0; i < box.size(); ++i) CHECK(field.path_count_at(i) == multinomial(box.site_at(i)));
  }
}

TEST_CASE("counts do not depend on an affine relabelling of weights") {
  const auto alphabet = WeightAlphabet::uniform({0, 1, 2});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Environment env = generate_environment(Box({6, 6}), alphabet, seed);
    const Environment image = affine_image(env, 3, 7);
    const PassageField a = compute_passage_field(env, Site{0, 0});
    const PassageField b = compute_passage_field(image, Site{0, 0});
    CHECK(std::equal(a.path_counts().begin(), a.path_counts().end(), b.path_counts().begin()));
  }
}

TEST_CASE("fields from an interior origin") {
  const Environment env = generate_environment(Box({5, 5}), WeightAlphabet::bernoulli(Rational(1, 2)), 3);
  const Site origin{1, 2};
  const PassageField field = compute_passage_field(env, origin);
  CHECK_FALSE(field.reachable(Site{0, 4}));
  CHECK(kind_of([&] { field.max_weight(Site{0, 4}); }) == ErrorKind::Reachability);
  CHECK(kind_of([&] { field.max_weight(Site{5, 4}); }) == ErrorKind::Bounds);
  const auto ref = oracle::point_to_point(env, origin, Site{4, 4});
  CHECK(field.max_weight(Site{4, 4}) == ref.max_weight);
  CHECK(field.path_count(Site{4, 4}) == ref.count);
  CHECK(min_turns_over_maximal(env, origin, Site{4, 4}) == ref.min_turns);
}

TEST_CASE("length-n summaries agree with brute force") {
  const auto alphabet = WeightAlphabet::bernoulli(Rational(1, 2));
  for (int n = 1; n <= 6; ++n) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      const Environment env = generate_environment(Box({n, n}), alphabet, seed * 31 + n);
      const LengthSummary summary = length_n_summary(env, n);
      const auto ref = oracle::length_n(env, n);
      CHECK(summary.max_weight == ref.max_weight);
      CHECK(summary.count == ref.count);
      CHECK(min_turns_over_maximal_length(env, n) == ref.min_turns);
    }
  }
  const Environment env3 = generate_environment(Box({4, 4, 4}), WeightAlphabet::uniform({0, 1, 2}), 9);
  const auto ref3 = oracle::length_n(env3, 4);
  CHECK(length_n_summary(env3, 4).count == ref3.count);
  CHECK(min_turns_over_maximal_length(env3, 4) == ref3.min_turns);
}

TEST_CASE("length-n corner cases") {
  const Environment ones = constant_environment(Box({3, 3}), WeightAlphabet::parse("1:1"), 1);
  const LengthSummary s = length_n_summary(ones, 3);
  CHECK(s.count == 4);
  CHECK(s.max_weight == 3);
  CHECK(s.endpoints.size() == 3);
  CHECK(length_n_summary(ones, 1).count == 1);
  CHECK(kind_of([&] { length_n_summary(ones, 4); }) == ErrorKind::Bounds);
  CHECK(kind_of([&] { length_n_summary(ones, 0); }) == ErrorKind::Domain);
}

TEST_CASE("enumeration lists the brute-force maximal set in lexicographic order") {
  const auto alphabet = WeightAlphabet::bernoulli(Rational(1, 2));
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Environment env = generate_environment(Box({4, 5}), alphabet, seed);
    const Site x{3, 4};
    const PassageField field = compute_passage_field(env, Site{0, 0});
    const MaximalPaths paths = enumerate_maximal_paths(field, env, x, 1000);
    const auto ref = oracle::point_to_point(env, Site{0, 0}, x);
    REQUIRE_FALSE(paths.overflowed());
    REQUIRE(paths.paths.size() == ref.maximal.size());
    for (std::size_t i = 0; i < ref.maximal.size(); ++i) {
      CHECK(paths.paths[i].step_string() == steps_text(ref.maximal[i]));
      CHECK(paths.paths[i].weight(env) == ref.max_weight);
    }
    CHECK(first_maximal_path(field, env, x) == paths.paths.front());
  }
}

TEST_CASE("enumeration overflow reports the exact count") {
  const Environment env = constant_environment(Box({6, 6}), WeightAlphabet::parse("0:1"), 0);
  const PassageField field = compute_passage_field(env, Site{0, 0});
  const MaximalPaths paths = enumerate_maximal_paths(field, env, Site{5, 5}, 100);
  REQUIRE(paths.overflowed());
  CHECK(*paths.overflow == 252);
  CHECK(paths.paths.empty());
  CHECK(first_maximal_path(field, env, Site{5, 5}).step_string() == "1111122222");
}

TEST_CASE("max_level truncates the field") {
  const Environment env = generate_environment(Box({5, 5}), WeightAlphabet::bernoulli(Rational(1, 2)), 8);
  const PassageField full = compute_passage_field(env, Site{0, 0});
  const PassageField cut = compute_passage_field(env, Site{0, 0}, 3);
  CHECK(cut.reachable(Site{1, 2}));
  CHECK_FALSE(cut.reachable(Site{2, 2}));
  CHECK(cut.path_count(Site{2, 1}) == full.path_count(Site{2, 1}));
}
