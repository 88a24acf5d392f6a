// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: acceptance [work-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dlpp/environment.hpp"
#include "dlpp/experiments.hpp"
#include "dlpp/mvmp.hpp"
#include "dlpp/passage.hpp"
#include "dlpp/transforms.hpp"
#include "support/oracle.hpp"

using namespace dlpp;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << std::endl;
  if (!pass) ++failures;
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string rows_text(const std::vector<FrequencyRow>& rows) {
  std::string out;
  for (const FrequencyRow& r : rows) {
    if (!out.empty()) out += " ";
    out += "n=" + std::to_string(r.n) + ":" + std::to_string(r.hits) + "/" + std::to_string(r.trials) + "=" +
           fmt(r.fraction, 3) + "[" + fmt(r.ci.low, 3) + "," + fmt(r.ci.high, 3) + "]";
  }
  return out;
}

// Decreasing trend: non-increasing with a strict drop from first to last, or
// identically zero.
bool decreasing_trend(const std::vector<FrequencyRow>& rows) {
  if (rows.empty()) return false;
  const bool all_zero = std::all_of(rows.begin(), rows.end(), [](const FrequencyRow& r) { return r.hits == 0; });
  return non_increasing(rows) && (rows.back().fraction < rows.front().fraction || all_zero);
}

template <class Fn>
void guarded(int id, const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("threw: ") + e.what());
  }
}

void oracle_equivalence() {
  const auto start = Clock::now();
  const Box box({3, 3});
  const auto alphabet = WeightAlphabet::bernoulli(Rational(1, 2));
  const Site x{2, 2};
  std::uint64_t mismatches = 0;
  for (std::uint64_t i = 0; i < 512; ++i) {
    const Environment env = environment_from_index(box, alphabet, i);
    const PassageField field = compute_passage_field(env, Site{0, 0});
    const auto ref = oracle::point_to_point(env, Site{0, 0}, x);
    if (field.max_weight(x) != ref.max_weight || field.path_count(x) != ref.count) ++mismatches;
  }
  const double secs = seconds_since(start);
  report(1, "oracle equivalence", mismatches == 0 && secs < 5.0,
         "512 environments, " + std::to_string(mismatches) + " mismatches, " + fmt(secs, 3) + " s");
}

void multinomial_identity() {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  for (const Box& box : {Box({6, 6}), Box({4, 4, 4})}) {
    const Environment env = constant_environment(box, WeightAlphabet::parse("1:1"), 1);
    const PassageField field = compute_passage_field(env, Site::zero(box.dimension()));
    for (std::size_t i = 0; i < box.size(); ++i, ++checked) {
      if (field.path_count_at(i) != multinomial(box.site_at(i))) ++mismatches;
    }
  }
  report(2, "multinomial identity", mismatches == 0 && checked == 100,
         std::to_string(checked) + " sites, " + std::to_string(mismatches) + " mismatches");
}

void mvmp_exact() {
  const auto start = Clock::now();
  const FiniteSpace space(Box({2, 3}), WeightAlphabet::bernoulli(Rational(1, 2)));
  const MvmpReport good = verify_mvmp(space, build_surgery_instance(TransformKind::Lift, space, {}));
  SurgeryParams inflated;
  inflated.epsilon = Rational(2);
  const MvmpReport bad = verify_mvmp(space, build_surgery_instance(TransformKind::Lift, space, inflated));
  const double secs = seconds_since(start);
  const bool pass = space.total_states() == 64 && good.hypothesis_holds && good.holds_with_mass() &&
                    !bad.hypothesis_holds && bad.violation_count > 0 && secs < 10.0;
  report(3, "MVMP exact verification", pass,
         "P(E)=" + to_string(good.p_e) + " P(E')=" + to_string(good.p_e_prime) + " bound=" +
             to_string(good.bound_rhs) + " checks=" + std::to_string(good.hypothesis_checks) +
             "; inflated epsilon flagged " + std::to_string(bad.violation_count) + " violations; " + fmt(secs, 3) +
             " s");
}

void locality() {
  const auto start = Clock::now();
  TransformCheckConfig perco;
  perco.kind = TransformKind::Perco;
  perco.box = Box({4, 4});
  perco.exhaustive = true;
  perco.all_plans = true;
  const TransformCheckSummary p = run_transform_check(perco);

  TransformCheckConfig rgood;
  rgood.kind = TransformKind::RGood;
  rgood.box = Box({6, 6});
  rgood.R = 2;
  rgood.instances = 1000;
  rgood.all_plans = true;  // a plan on any maximal path makes the instance eligible
  const TransformCheckSummary r = run_transform_check(rgood);

  const bool pass = p.clean() && r.clean() && r.eligible >= 1000 && p.locality_failures == 0 &&
                    r.locality_failures == 0;
  report(4, "locality certification", pass,
         "perco 4x4 exhaustive: " + std::to_string(p.eligible) + " eligible environments, " +
             std::to_string(p.instances) + " plans, " + std::to_string(p.violation_count) +
             " violations; rgood 6x6 R=2: " + std::to_string(r.eligible) + " seeded instances, " +
             std::to_string(r.violation_count) + " violations; " + fmt(seconds_since(start), 2) + " s");
}

void amplification() {
  const auto start = Clock::now();
  // Uniform bits on 6x6 only admit |S| = 1 at R = 2; sparser ones on 8x8
  // reach separated pairs.
  TransformCheckConfig small;
  small.kind = TransformKind::RGood;
  small.box = Box({6, 6});
  small.instances = 1000;
  small.all_plans = true;
  const TransformCheckSummary a = run_transform_check(small);

  TransformCheckConfig large = small;
  large.box = Box({8, 8});
  large.alphabet = WeightAlphabet::bernoulli(Rational(1, 4));
  large.base_seed = 2;
  const TransformCheckSummary b = run_transform_check(large);

  const bool pass = a.eligible >= 1000 && b.eligible >= 1000 && a.amplification_failures == 0 &&
                    b.amplification_failures == 0 && b.max_plan_size >= 2;
  report(5, "bifurcation amplification", pass,
         "6x6: " + std::to_string(a.instances) + " plans over " + std::to_string(a.eligible) +
             " instances, max k=" + std::to_string(a.max_plan_size) + ", " +
             std::to_string(a.amplification_failures) + " failures; 8x8 Bernoulli(1/4): " + std::to_string(b.instances) +
             " plans over " + std::to_string(b.eligible) + " instances, max k=" + std::to_string(b.max_plan_size) + ", " + std::to_string(b.amplification_failures) +
             " failures; " + fmt(seconds_since(start), 2) + " s");
}

ExperimentConfig campaign_config(const fs::path& output) {
  ExperimentConfig c;
  c.dimension = 2;
  c.alphabet = WeightAlphabet::bernoulli(Rational(1, 2));
  c.lengths = {20, 40, 60, 80};
  c.trials = 200;
  c.base_seed = 20240601;
  c.threads = 1;
  c.output = output;
  return c;
}

struct CampaignOutcome {
  std::vector<RunRecord> records;
  std::optional<GrowthFit> fit;
};

CampaignOutcome growth(const fs::path& work) {
  CampaignOutcome out;
  const auto start = Clock::now();
  out.records = run_campaign(campaign_config(work / "campaign_a.jsonl")).records;
  const double secs = seconds_since(start);
  out.fit = fit_growth_rate(out.records);
  std::string means;
  for (const PointStats& p : out.fit->points) means += " n=" + std::to_string(p.n) + ":" + fmt(p.mean_log2_count, 3);
  report(6, "growth-rate positivity", out.fit->ci.low > 0 && secs < 300.0,
         "delta_hat=" + fmt(out.fit->delta_hat, 5) + " CI95=[" + fmt(out.fit->ci.low, 5) + "," +
             fmt(out.fit->ci.high, 5) + "], mean log2Count" + means + "; campaign " + fmt(secs, 1) + " s");
  return out;
}

void tail_decay(const CampaignOutcome& c) {
  if (!c.fit) throw std::runtime_error("criterion 6 produced no fit");
  // delta_hat / 2 rounded to a rational with denominator 10^6.
  const auto micro = static_cast<std::int64_t>(std::llround(c.fit->delta_hat / 2 * 1e6));
  const Rational delta(micro, 1000000);
  const auto rows = estimate_tail(c.records, delta);
  const bool pass = non_increasing(rows) &&
                    (rows.back().fraction < rows.front().fraction || (rows.back().hits == 0 && rows.front().hits == 0));
  report(7, "tail decay", pass, "delta=" + to_string(delta) + " " + rows_text(rows));
}

void turn_density(const CampaignOutcome& c) {
  const std::vector<Rational> kappas{Rational(1, 20), Rational(1, 10), Rational(3, 20), Rational(1, 5),
                                     Rational(1, 4)};
  const auto report_rows = turn_density_report(c.records, kappas);
  for (std::size_t i = 1; i < report_rows.size(); ++i) {
    std::cout << "     kappa=" << to_string(report_rows[i].kappa) << " " << rows_text(report_rows[i].rows) << "\n";
  }
  const auto& rows = report_rows.front().rows;
  report(8, "turn density", decreasing_trend(rows), "kappa=1/20 " + rows_text(rows));
}

void affine_invariance() {
  const auto alphabet = WeightAlphabet::parse("0:1/3,1:1/3,2:1/3");
  const Box box({8, 8});
  std::uint64_t mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Environment env = generate_environment(box, alphabet, seed);
    const PassageField a = compute_passage_field(env, Site{0, 0});
    const PassageField b = compute_passage_field(affine_image(env, 3, 7), Site{0, 0});
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (a.path_count_at(i) != b.path_count_at(i)) {
        ++mismatches;
        break;
      }
    }
  }
  report(9, "affine invariance", mismatches == 0,
         "100 environments under 3w+7, " + std::to_string(mismatches) + " mismatching fields");
}

void determinism(const fs::path& work) {
  const fs::path first = work / "campaign_a.jsonl";
  const fs::path second = work / "campaign_b.jsonl";
  if (!fs::exists(first)) run_campaign(campaign_config(first));
  run_campaign(campaign_config(second));
  const std::string a = slurp(first);
  const std::string b = slurp(second);
  report(10, "determinism", !a.empty() && a == b,
         "fnv1a64 " + hex(fnv1a(a)) + " vs " + hex(fnv1a(b)) + ", " + std::to_string(a.size()) + " bytes");
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "dlpp_acceptance";
  fs::create_directories(work);
  fs::remove(work / "campaign_a.jsonl");
  fs::remove(work / "campaign_b.jsonl");

  guarded(1, "oracle equivalence", oracle_equivalence);
  guarded(2, "multinomial identity", multinomial_identity);
  guarded(3, "MVMP exact verification", mvmp_exact);
  guarded(4, "locality certification", locality);
  guarded(5, "bifurcation amplification", amplification);
  CampaignOutcome campaign;
  guarded(6, "growth-rate positivity", [&] { campaign = growth(work); });
  guarded(7, "tail decay", [&] { tail_decay(campaign); });
  guarded(8, "turn density", [&] { turn_density(campaign); });
  guarded(9, "affine invariance", affine_invariance);
  guarded(10, "determinism", [&] { determinism(work); });

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
