// dlpp: command-line front end for the DLPP laboratory.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlpp/environment.hpp"
#include "dlpp/error.hpp"
#include "dlpp/experiments.hpp"
#include "dlpp/mvmp.hpp"
#include "dlpp/passage.hpp"
#include "dlpp/path_analysis.hpp"
#include "dlpp/transforms.hpp"

using namespace dlpp;
using nlohmann::json;

namespace {

struct EnvOptions {
  std::string env;  // header file, or "seed=N"
  std::string box;
  std::string alphabet = "0:1/2,1:1/2";

  void attach(CLI::App* cmd) {
    cmd->add_option("--env", env, "environment header file, or seed=N")->required();
    cmd->add_option("--box", box, "box extents for seed=N, e.g. 6x6 (default: spans the query)");
    cmd->add_option("--alphabet", alphabet, "alphabet for seed=N, JSON or 0:1/2,1:1/2");
  }

  // `fallback` is used when --box is absent.
  Environment load(const std::optional<Box>& fallback) const {
    if (env.rfind("seed=", 0) == 0) {
      const std::uint64_t seed = std::stoull(env.substr(5));
      std::optional<Box> b = box.empty() ? fallback : std::optional<Box>(Box::parse(box));
      if (!b) throw Error(ErrorKind::Config, "--box is required with seed=N here");
      return generate_environment(*b, WeightAlphabet::parse(alphabet), seed);
    }
    return load_environment(env);
  }
};

json site_list(const std::vector<Site>& sites) {
  json list = json::array();
  for (const Site& s : sites) list.push_back(s.to_string());
  return list;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<Rational> parse_all(const std::vector<std::string>& texts) {
  std::vector<Rational> out;
  for (const auto& t : texts) out.push_back(parse_rational(t));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed last-passage percolation laboratory"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "sample an environment and write its header");
  std::string gen_box;
  std::string gen_alphabet = "0:1/2,1:1/2";
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  bool gen_dump = false;
  generate->add_option("--box", gen_box, "extents, e.g. 6x6")->required();
  generate->add_option("--alphabet", gen_alphabet, "alphabet, JSON or 0:1/2,1:1/2");
  generate->add_option("--seed", gen_seed, "64-bit seed");
  generate->add_option("--out", gen_out, "header path")->required();
  generate->add_flag("--dump", gen_dump, "also write the raw weight dump");

  // count
  auto* count = app.add_subcommand("count", "maximal weight and exact number of maximal paths");
  EnvOptions count_env;
  count_env.attach(count);
  std::string count_to;
  int count_length = 0;
  auto* to_opt = count->add_option("--to", count_to, "endpoint x, e.g. 5,5");
  count->add_option("--length", count_length, "path length n (sites), free endpoint")->excludes(to_opt);

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "list maximal paths as step strings");
  EnvOptions enum_env;
  enum_env.attach(enumerate);
  std::string enum_to;
  std::uint64_t enum_cap = 1000;
  enumerate->add_option("--to", enum_to, "endpoint x")->required();
  enumerate->add_option("--cap", enum_cap, "refuse above this many paths");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "turns, bifurcations and R-good turns of maximal paths");
  EnvOptions an_env;
  an_env.attach(analyze);
  std::string an_to;
  int an_R = 2;
  std::uint64_t an_cap = 64;
  analyze->add_option("--to", an_to, "endpoint x")->required();
  analyze->add_option("--R", an_R, "R-good radius");
  analyze->add_option("--cap", an_cap, "analyze at most this many maximal paths");

  // transform-check
  auto* tcheck = app.add_subcommand("transform-check", "locality and amplification sweep of a surgery");
  std::string tc_kind = "perco";
  std::string tc_box = "4x4";
  std::string tc_alphabet = "0:1/2,1:1/2";
  std::string tc_env;
  std::uint64_t tc_sweep = 1000;
  std::uint64_t tc_base = 1;
  int tc_R = 2;
  bool tc_exhaustive = false;
  bool tc_all = false;
  tcheck->add_option("--kind", tc_kind, "perco, lift or rgood");
  tcheck->add_option("--box", tc_box, "box extents");
  tcheck->add_option("--alphabet", tc_alphabet, "alphabet");
  tcheck->add_option("--env", tc_env, "check only this environment (header file or seed=N)");
  tcheck->add_option("--seed-sweep", tc_sweep, "number of valid seeded instances");
  tcheck->add_option("--base-seed", tc_base, "base seed of the sweep");
  tcheck->add_option("--R", tc_R, "R for rgood");
  tcheck->add_flag("--exhaustive", tc_exhaustive, "every environment of the box");
  tcheck->add_flag("--all-plans", tc_all, "every maximal path and separated subset");

  // mvmp-check
  auto* mcheck = app.add_subcommand("mvmp-check", "exact multi-valued map principle check");
  std::string mv_kind = "lift";
  std::string mv_box = "2x3";
  std::string mv_alphabet = "0:1/2,1:1/2";
  std::size_t mv_s = 1;
  int mv_R = 2;
  std::string mv_epsilon;
  std::string mv_count_cap;
  std::size_t mv_lift_sites = 0;
  unsigned mv_threads = 1;
  bool mv_identity = false;
  mcheck->add_option("--kind", mv_kind, "perco, lift or rgood");
  mcheck->add_option("--box", mv_box, "box extents");
  mcheck->add_option("--alphabet", mv_alphabet, "alphabet");
  mcheck->add_option("--S-size", mv_s, "|S| for perco and rgood");
  mcheck->add_option("--R", mv_R, "R for rgood");
  mcheck->add_option("--epsilon", mv_epsilon, "override epsilon, e.g. 2");
  mcheck->add_option("--count-cap", mv_count_cap, "add the clause |Pi_max| <= cap");
  mcheck->add_option("--lift-sites", mv_lift_sites, "lift: at most this many sub-max sites");
  mcheck->add_option("--threads", mv_threads, "worker threads");
  mcheck->add_flag("--identity", mv_identity, "identity instance instead of a surgery");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo campaign");
  std::string sw_config;
  std::string sw_output;
  unsigned sw_threads = 0;
  bool sw_resume = false;
  sweep->add_option("--config", sw_config, "experiment JSON")->required();
  sweep->add_option("--output", sw_output, "override the output path");
  sweep->add_option("--threads", sw_threads, "override the thread count");
  sweep->add_flag("--resume", sw_resume, "continue a partial output file");

  // fit
  auto* fit = app.add_subcommand("fit", "growth rate of log2 counts");
  std::string fit_records;
  std::string fit_csv;
  std::uint64_t fit_resamples = 1000;
  fit->add_option("--records", fit_records, "JSONL records")->required();
  fit->add_option("--csv", fit_csv, "write per-n summary CSV here");
  fit->add_option("--resamples", fit_resamples, "bootstrap resamples");

  // tail
  auto* tail = app.add_subcommand("tail", "fraction of trials with count <= 2^(delta n)");
  std::string tail_records;
  std::vector<std::string> tail_delta;
  tail->add_option("--records", tail_records, "JSONL records")->required();
  tail->add_option("--delta", tail_delta, "delta, e.g. 1/20 (repeatable)")->required();

  // turns
  auto* turns = app.add_subcommand("turns", "frequency of minTurns < kappa n");
  std::string turns_records;
  std::vector<std::string> turns_kappa;
  turns->add_option("--records", turns_records, "JSONL records")->required();
  turns->add_option("--kappa", turns_kappa, "kappa, e.g. 1/20 (repeatable)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      const Environment env = generate_environment(Box::parse(gen_box), WeightAlphabet::parse(gen_alphabet), gen_seed);
      save_environment(env, gen_out, gen_dump);
      print(environment_header(env));
    } else if (*count) {
      if (count_to.empty() && count_length == 0) throw Error(ErrorKind::Config, "give --to or --length");
      json out;
      if (!count_to.empty()) {
        const Site x = Site::parse(count_to);
        const Environment env = count_env.load(Box::spanning(x));
        const PassageField field = compute_passage_field(env, Site::zero(env.dimension()));
        const BigInt& c = field.path_count(x);
        out = {{"maxWeight", field.max_weight(x)}, {"count", c.str()}, {"log2Count", log2(c)}};
      } else {
        const Environment env = count_env.load(std::nullopt);
        const LengthSummary summary = length_n_summary(env, count_length);
        out = {{"maxWeight", summary.max_weight},
               {"count", summary.count.str()},
               {"log2Count", log2(summary.count)},
               {"endpoints", site_list(summary.endpoints)}};
      }
      print(out);
    } else if (*enumerate) {
      const Site x = Site::parse(enum_to);
      const Environment env = enum_env.load(Box::spanning(x));
      const PassageField field = compute_passage_field(env, Site::zero(env.dimension()));
      const MaximalPaths paths = enumerate_maximal_paths(field, env, x, enum_cap);
      json out = {{"maxWeight", field.max_weight(x)}, {"count", field.path_count(x).str()}};
      if (paths.overflowed()) {
        out["overflow"] = true;
      } else {
        json list = json::array();
        for (const auto& p : paths.paths) list.push_back(p.step_string());
        out["paths"] = list;
      }
      print(out);
    } else if (*analyze) {
      const Site x = Site::parse(an_to);
      const Environment env = an_env.load(Box::spanning(x));
      const PassageField field = compute_passage_field(env, Site::zero(env.dimension()));
      const MaximalPaths paths = enumerate_maximal_paths(field, env, x, an_cap);
      std::vector<DirectedPath> chosen = paths.paths;
      if (paths.overflowed()) chosen = {first_maximal_path(field, env, x)};
      json list = json::array();
      for (const auto& p : chosen) {
        const auto bif = bifurcations_of(p, env);
        list.push_back({{"path", p.step_string()},
                        {"turns", site_list(sites_at(p, turns_of(p)))},
                        {"bifurcations", site_list(sites_at(p, bif.indices))},
                        {"rGoodTurns", site_list(sites_at(p, r_good_turns(p, env, an_R)))}});
      }
      print({{"count", field.path_count(x).str()},
             {"truncated", paths.overflowed()},
             {"minTurnsOverMaximal", min_turns_over_maximal(env, x)},
             {"paths", list}});
    } else if (*tcheck) {
      TransformCheckConfig config;
      config.kind = parse_transform_kind(tc_kind);
      config.box = Box::parse(tc_box);
      config.alphabet = WeightAlphabet::parse(tc_alphabet);
      config.instances = tc_sweep;
      config.base_seed = tc_base;
      config.R = tc_R;
      config.exhaustive = tc_exhaustive;
      config.all_plans = tc_all;
      if (!tc_env.empty()) {
        EnvOptions opts{tc_env, tc_box, tc_alphabet};
        config.environment = opts.load(config.box);
        config.box = config.environment->box();
        config.alphabet = config.environment->alphabet();
      }
      const TransformCheckSummary summary = run_transform_check(config);
      json out = summary.to_json();
      out["kind"] = tc_kind;
      out["clean"] = summary.clean();
      print(out);
      return summary.violation_count == 0 ? 0 : 3;
    } else if (*mcheck) {
      const FiniteSpace space(Box::parse(mv_box), WeightAlphabet::parse(mv_alphabet));
      MvmpInstance instance;
      if (mv_identity) {
        instance = identity_instance(space, mv_epsilon.empty() ? Rational(1) : parse_rational(mv_epsilon));
      } else {
        SurgeryParams params;
        params.s = mv_s;
        params.R = mv_R;
        if (!mv_epsilon.empty()) params.epsilon = parse_rational(mv_epsilon);
        if (!mv_count_cap.empty()) params.count_cap = parse_bigint(mv_count_cap);
        if (mv_lift_sites > 0) params.lift_sites = mv_lift_sites;
        instance = build_surgery_instance(parse_transform_kind(mv_kind), space, params);
      }
      MvmpOptions options;
      options.threads = mv_threads;
      const MvmpReport report = verify_mvmp(space, instance, options);
      print(report.to_json());
      return report.holds() ? 0 : 3;
    } else if (*sweep) {
      ExperimentConfig config = ExperimentConfig::load(sw_config);
      if (!sw_output.empty()) config.output = sw_output;
      if (sw_threads > 0) config.threads = sw_threads;
      if (sw_resume) config.resume = true;
      const CampaignResult result = run_campaign(config);
      json out = result.summary;
      out["resumed"] = result.resumed;
      print(out);
    } else if (*fit) {
      const auto records = read_records(fit_records);
      const GrowthFit g = fit_growth_rate(records, fit_resamples);
      if (!fit_csv.empty()) {
        std::ofstream csv(fit_csv);
        if (!csv) throw Error(ErrorKind::Io, "cannot write " + fit_csv);
        write_summary_csv(csv, g.points);
      }
      print(g.to_json());
    } else if (*tail) {
      const auto records = read_records(tail_records);
      json out = json::array();
      for (const Rational& delta : parse_all(tail_delta)) {
        const auto rows = estimate_tail(records, delta);
        out.push_back({{"delta", to_string(delta)}, {"rows", to_json(rows)}, {"nonIncreasing", non_increasing(rows)}});
      }
      print(out);
    } else if (*turns) {
      const auto records = read_records(turns_records);
      const auto kappas = parse_all(turns_kappa);
      json out = json::array();
      for (const TurnDensity& t : turn_density_report(records, kappas)) {
        out.push_back(
            {{"kappa", to_string(t.kappa)}, {"rows", to_json(t.rows)}, {"nonIncreasing", non_increasing(t.rows)}});
      }
      print(out);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
