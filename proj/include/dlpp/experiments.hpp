#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "dlpp/alphabet.hpp"
#include "dlpp/lattice.hpp"
#include "dlpp/numeric.hpp"

namespace dlpp {

// A campaign runs `trials` seeded environments at each point. A point is
// either a path length n (paths with n sites from 0, free endpoint) or a
// target x (paths from 0 to x, with n = ||x||).
struct ExperimentConfig {
  std::size_t dimension = 2;
  WeightAlphabet alphabet = WeightAlphabet::bernoulli(Rational(1, 2));
  std::vector<int> lengths;
  std::vector<Site> targets;
  std::optional<Rational> beta;  // every target must lie in the cone C_beta
  std::uint64_t trials = 1;
  std::uint64_t base_seed = 1;
  std::vector<Rational> delta_grid;
  std::vector<Rational> kappa_grid;
  int R = 2;
  std::filesystem::path output;  // JSONL; empty keeps records in memory only
  unsigned threads = 1;
  std::uint64_t memory_budget_mb = 1024;
  bool timing = false;  // adds wallTimeMs (makes output machine-dependent)
  bool resume = false;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  void validate() const;

  std::size_t point_count() const noexcept { return lengths.empty() ? targets.size() : lengths.size(); }
  int point_n(std::size_t point) const;
  // Box used for one trial at the point.
  Box point_box(std::size_t point) const;
  std::uint64_t trial_seed(std::size_t point, std::uint64_t trial) const;
  // Peak bytes for one trial at the point (environment, DP fields, turn table).
  std::uint64_t memory_estimate(std::size_t point) const;
};

struct RunRecord {
  std::uint64_t point = 0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  int n = 0;
  std::optional<Site> x;
  std::int64_t max_weight = 0;  // scaled integer
  BigInt count;
  double log2_count = 0;
  std::size_t min_turns = 0;
  std::size_t r_good_turns = 0;  // on the first maximal path
  std::optional<double> wall_time_ms;

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
};

RunRecord run_trial(const ExperimentConfig& config, std::size_t point, std::uint64_t trial);

struct CampaignResult {
  std::vector<RunRecord> records;
  std::uint64_t resumed = 0;  // records kept from an earlier partial run
  nlohmann::json summary;
};

// Records are written to config.output in (point, trial) order as they
// complete, followed by one summary line ({"type": "summary", ...}).
CampaignResult run_campaign(const ExperimentConfig& config);

// Records of a JSONL file; summary lines are skipped.
std::vector<RunRecord> read_records(const std::filesystem::path& path);

struct PointStats {
  int n = 0;
  std::uint64_t trials = 0;
  double mean_log2_count = 0;
  double var_log2_count = 0;  // sample variance
};

std::vector<PointStats> per_n_stats(std::span<const RunRecord> records);
void write_summary_csv(std::ostream& out, std::span<const PointStats> points);

struct Interval {
  double low = 0;
  double high = 0;
};

struct GrowthFit {
  double delta_hat = 0;
  Interval ci;
  std::uint64_t resamples = 0;
  std::vector<PointStats> points;

  nlohmann::json to_json() const;
};

// OLS slope of per-n mean log2Count against n with a percentile bootstrap
// over trials. Needs >= 3 distinct n and >= 30 trials at each.
GrowthFit fit_growth_rate(std::span<const RunRecord> records, std::uint64_t resamples = 1000,
                          std::uint64_t seed = 0x5eed);

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct FrequencyRow {
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double fraction = 0;
  Interval ci;
};

// count <= 2^(delta n), decided exactly.
bool count_within(const BigInt& count, const Rational& delta, int n);
// Per-n fraction of trials with count <= 2^(delta n).
std::vector<FrequencyRow> estimate_tail(std::span<const RunRecord> records, const Rational& delta);

struct TurnDensity {
  Rational kappa;
  std::vector<FrequencyRow> rows;  // frequency of minTurns < kappa n
};

std::vector<TurnDensity> turn_density_report(std::span<const RunRecord> records, std::span<const Rational> kappas);

nlohmann::json to_json(std::span<const FrequencyRow> rows);

// Non-increasing fractions along increasing n.
bool non_increasing(std::span<const FrequencyRow> rows);

}  // namespace dlpp
