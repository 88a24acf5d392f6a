#include "dlpp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "dlpp/environment.hpp"
#include "dlpp/error.hpp"
#include "dlpp/passage.hpp"
#include "dlpp/path_analysis.hpp"

namespace dlpp {
namespace {

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw Error(ErrorKind::Config, "expected a rational, got " + j.dump());
}

Site site_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Site::parse(j.get<std::string>());
  if (j.is_array()) return Site(j.get<std::vector<int>>());
  throw Error(ErrorKind::Config, "expected a site, got " + j.dump());
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::Config, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "experiment config must be a JSON object");
  static const std::set<std::string> known = {"dimension", "alphabet", "lengths",  "targets", "beta",
                                              "trials",    "baseSeed", "deltaGrid", "kappaGrid", "R",
                                              "output",    "threads",  "memoryBudgetMb", "timing", "resume"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error(ErrorKind::Config, "unknown config field '" + key + "'");
  }
  ExperimentConfig c;
  c.dimension = get_or<std::size_t>(j, "dimension", 2);
  if (j.contains("alphabet")) {
    const auto& a = j.at("alphabet");
    c.alphabet = a.is_string() ? WeightAlphabet::parse(a.get<std::string>()) : WeightAlphabet::from_json(a);
  }
  c.lengths = get_or<std::vector<int>>(j, "lengths", {});
  if (j.contains("targets")) {
    for (const auto& t : j.at("targets")) c.targets.push_back(site_from_json(t));
  }
  if (j.contains("beta")) c.beta = rational_from_json(j.at("beta"));
  c.trials = get_or<std::uint64_t>(j, "trials", 1);
  c.base_seed = get_or<std::uint64_t>(j, "baseSeed", 1);
  if (j.contains("deltaGrid")) {
    for (const auto& d : j.at("deltaGrid")) c.delta_grid.push_back(rational_from_json(d));
  }
  if (j.contains("kappaGrid")) {
    for (const auto& k : j.at("kappaGrid")) c.kappa_grid.push_back(rational_from_json(k));
  }
  c.R = get_or<int>(j, "R", 2);
  c.output = get_or<std::string>(j, "output", "");
  c.threads = get_or<unsigned>(j, "threads", 1);
  c.memory_budget_mb = get_or<std::uint64_t>(j, "memoryBudgetMb", 1024);
  c.timing = get_or<bool>(j, "timing", false);
  c.resume = get_or<bool>(j, "resume", false);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Config, "config " + path.string() + " is not valid JSON: " + e.what());
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = {{"dimension", dimension},
                      {"alphabet", alphabet.to_json()},
                      {"trials", trials},
                      {"baseSeed", base_seed},
                      {"R", R},
                      {"threads", threads},
                      {"memoryBudgetMb", memory_budget_mb},
                      {"timing", timing}};
  if (!lengths.empty()) j["lengths"] = lengths;
  if (!targets.empty()) {
    auto list = nlohmann::json::array();
    for (const Site& t : targets) list.push_back(t.coords());
    j["targets"] = list;
  }
  if (beta) j["beta"] = to_string(*beta);
  auto grid = [](const std::vector<Rational>& values) {
    auto list = nlohmann::json::array();
    for (const Rational& v : values) list.push_back(to_string(v));
    return list;
  };
  j["deltaGrid"] = grid(delta_grid);
  j["kappaGrid"] = grid(kappa_grid);
  if (!output.empty()) j["output"] = output.string();
  return j;
}

void ExperimentConfig::validate() const {
  if (dimension < 2) throw Error(ErrorKind::Dimension, "dimension must be at least 2");
  if (lengths.empty() == targets.empty()) throw Error(ErrorKind::Config, "give exactly one of lengths or targets");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 1) throw Error(ErrorKind::Config, "lengths must be positive");
    if (i > 0 && lengths[i] <= lengths[i - 1]) throw Error(ErrorKind::Config, "lengths must be strictly increasing");
  }
  std::optional<ConeSpec> cone;
  if (beta) cone.emplace(*beta);
  for (const Site& t : targets) {
    if (t.dimension() != dimension) throw Error(ErrorKind::Dimension, "target " + t.to_string() + " has wrong dimension");
    if (!t.non_negative()) throw Error(ErrorKind::Config, "target " + t.to_string() + " is not directed");
    if (cone && !cone_contains(*cone, t)) throw Error(ErrorKind::Config, "target " + t.to_string() + " is outside the cone");
  }
  if (trials < 1) throw Error(ErrorKind::Config, "trials must be at least 1");
  if (threads < 1) throw Error(ErrorKind::Config, "threads must be at least 1");
  if (R < 1) throw Error(ErrorKind::Config, "R must be at least 1");
  for (const Rational& d : delta_grid) {
    if (d < 0) throw Error(ErrorKind::Config, "delta values must be non-negative");
  }
  for (const Rational& k : kappa_grid) {
    if (k < 0) throw Error(ErrorKind::Config, "kappa values must be non-negative");
  }
}

int ExperimentConfig::point_n(std::size_t point) const {
  return lengths.empty() ? static_cast<int>(targets.at(point).norm()) : lengths.at(point);
}

Box ExperimentConfig::point_box(std::size_t point) const {
  if (lengths.empty()) return Box::spanning(targets.at(point));
  return Box(std::vector<int>(dimension, lengths.at(point)));
}

std::uint64_t ExperimentConfig::trial_seed(std::size_t point, std::uint64_t trial) const {
  return derive_seed(base_seed, point, trial);
}

std::uint64_t ExperimentConfig::memory_estimate(std::size_t point) const {
  // weight + max weight + big-integer count, and d turn-table states per site
  // each holding a weight and a turn count.
  const std::uint64_t per_site = 8 + 8 + 48 + 16 * dimension;
  return static_cast<std::uint64_t>(point_box(point).size()) * per_site;
}

nlohmann::json RunRecord::to_json() const {
  nlohmann::json j = {{"point", point},         {"trial", trial},         {"seed", seed},
                      {"n", n},                 {"maxWeight", max_weight}, {"count", count.str()},
                      {"log2Count", log2_count}, {"minTurns", min_turns},  {"rGoodTurnCount", r_good_turns}};
  if (x) j["x"] = x->coords();
  if (wall_time_ms) j["wallTimeMs"] = *wall_time_ms;
  return j;
}

RunRecord RunRecord::from_json(const nlohmann::json& j) {
  try {
    RunRecord r;
    r.point = j.at("point").get<std::uint64_t>();
    r.trial = j.at("trial").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n = j.at("n").get<int>();
    if (j.contains("x")) r.x = Site(j.at("x").get<std::vector<int>>());
    r.max_weight = j.at("maxWeight").get<std::int64_t>();
    r.count = parse_bigint(j.at("count").get<std::string>());
    r.log2_count = j.at("log2Count").get<double>();
    r.min_turns = j.at("minTurns").get<std::size_t>();
    r.r_good_turns = j.at("rGoodTurnCount").get<std::size_t>();
    if (j.contains("wallTimeMs")) r.wall_time_ms = j.at("wallTimeMs").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed run record: ") + e.what());
  }
}

RunRecord run_trial(const ExperimentConfig& config, std::size_t point, std::uint64_t trial) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord r;
  r.point = point;
  r.trial = trial;
  r.seed = config.trial_seed(point, trial);
  r.n = config.point_n(point);
  const Environment env = generate_environment(config.point_box(point), config.alphabet, r.seed);
  const Site origin = Site::zero(config.dimension);

  DirectedPath first;
  if (config.lengths.empty()) {
    const Site& x = config.targets[point];
    r.x = x;
    const PassageField field = compute_passage_field(env, origin);
    r.max_weight = field.max_weight(x);
    r.count = field.path_count(x);
    r.min_turns = min_turns_over_maximal(env, x);
    first = first_maximal_path(field, env, x);
  } else {
    const PassageField field = compute_passage_field(env, origin, r.n - 1);
    const LengthSummary summary = length_n_summary(field, r.n);
    r.max_weight = summary.max_weight;
    r.count = summary.count;
    r.min_turns = min_turns_over_maximal_length(env, r.n);
    first = first_maximal_path(field, env, summary.endpoints.front());
  }
  r.log2_count = log2(r.count);
  r.r_good_turns = r_good_turns(first, env, config.R).size();
  if (config.timing) {
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

namespace {

struct Job {
  std::size_t point;
  std::uint64_t trial;
};

// Keeps the longest prefix of well-formed records in the expected order and
// rewrites the file to exactly that prefix. Returns the kept records.
std::vector<RunRecord> recover_prefix(const std::filesystem::path& path, const std::vector<Job>& jobs) {
  std::vector<RunRecord> kept;
  std::ifstream in(path);
  if (!in) return kept;
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line) && kept.size() < jobs.size()) {
    if (in.eof()) break;  // unterminated final line: partial write
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || j.contains("type")) break;
    RunRecord r;
    try {
      r = RunRecord::from_json(j);
    } catch (const Error&) {
      break;
    }
    const Job& expected = jobs[kept.size()];
    if (r.point != expected.point || r.trial != expected.trial) break;
    kept.push_back(std::move(r));
    lines.push_back(line);
  }
  in.close();
  std::ofstream out(path, std::ios::trunc);
  for (const std::string& l : lines) out << l << '\n';
  return kept;
}

nlohmann::json campaign_summary(const ExperimentConfig& config, std::span<const RunRecord> records) {
  auto points = nlohmann::json::array();
  for (const PointStats& p : per_n_stats(records)) {
    points.push_back({{"n", p.n},
                      {"trials", p.trials},
                      {"meanLog2Count", p.mean_log2_count},
                      {"varLog2Count", p.var_log2_count}});
  }
  nlohmann::json config_json = config.to_json();
  config_json.erase("threads");  // output must not depend on the thread count
  config_json.erase("output");
  return {{"type", "summary"},
          {"records", records.size()},
          {"alphabet", config.alphabet.label()},
          {"points", points},
          {"config", config_json}};
}

}  // namespace

CampaignResult run_campaign(const ExperimentConfig& config) {
  config.validate();
  const std::uint64_t budget = config.memory_budget_mb * 1024 * 1024;
  for (std::size_t point = 0; point < config.point_count(); ++point) {
    const std::uint64_t need = config.memory_estimate(point) * config.threads;
    if (need > budget) {
      throw Error(ErrorKind::Budget,
                  "point n=" + std::to_string(config.point_n(point)) + " needs about " +
                      std::to_string(need / (1024 * 1024) + 1) + " MB with " + std::to_string(config.threads) +
                      " threads, above memoryBudgetMb=" + std::to_string(config.memory_budget_mb) +
                      "; lower the threads or the largest point, or raise memoryBudgetMb");
    }
  }

  std::vector<Job> jobs;
  for (std::size_t point = 0; point < config.point_count(); ++point) {
    for (std::uint64_t trial = 0; trial < config.trials; ++trial) jobs.push_back({point, trial});
  }

  CampaignResult result;
  std::ofstream out;
  if (!config.output.empty()) {
    if (config.resume && std::filesystem::exists(config.output)) {
      result.records = recover_prefix(config.output, jobs);
      result.resumed = result.records.size();
      out.open(config.output, std::ios::app | std::ios::binary);
    } else {
      if (config.output.has_parent_path()) std::filesystem::create_directories(config.output.parent_path());
      out.open(config.output, std::ios::trunc | std::ios::binary);
    }
    if (!out) throw Error(ErrorKind::Io, "cannot write " + config.output.string());
  }

  const std::size_t start = result.records.size();
  std::vector<std::optional<RunRecord>> slots(jobs.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{start};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;

  auto worker = [&] {
    while (!stop) {
      const std::size_t j = next++;
      if (j >= jobs.size()) return;
      try {
        RunRecord r = run_trial(config, jobs[j].point, jobs[j].trial);
        std::lock_guard lock(mutex);
        slots[j] = std::move(r);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
      ready.notify_all();
    }
  };

  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < config.threads; ++t) pool.emplace_back(worker);
    for (std::size_t j = start; j < jobs.size(); ++j) {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return slots[j].has_value() || failure; });
      if (failure) break;
      RunRecord r = std::move(*slots[j]);
      slots[j].reset();
      lock.unlock();
      if (out.is_open()) {
        out << r.to_json().dump() << '\n';
        out.flush();
      }
      result.records.push_back(std::move(r));
    }
    stop = true;
  }
  if (failure) std::rethrow_exception(failure);

  result.summary = campaign_summary(config, result.records);
  if (out.is_open()) {
    out << result.summary.dump() << '\n';
    if (!out) throw Error(ErrorKind::Io, "write to " + config.output.string() + " failed");
  }
  return result;
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open records " + path.string());
  std::vector<RunRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(number) + ": invalid JSON");
    if (j.contains("type")) continue;
    records.push_back(RunRecord::from_json(j));
  }
  return records;
}

std::vector<PointStats> per_n_stats(std::span<const RunRecord> records) {
  std::map<int, std::vector<double>> groups;
  for (const RunRecord& r : records) groups[r.n].push_back(r.log2_count);
  std::vector<PointStats> stats;
  for (const auto& [n, values] : groups) {
    PointStats p;
    p.n = n;
    p.trials = values.size();
    double sum = 0;
    for (double v : values) sum += v;
    p.mean_log2_count = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0;
      for (double v : values) ss += (v - p.mean_log2_count) * (v - p.mean_log2_count);
      p.var_log2_count = ss / static_cast<double>(values.size() - 1);
    }
    stats.push_back(p);
  }
  return stats;
}

void write_summary_csv(std::ostream& out, std::span<const PointStats> points) {
  out << "n,meanLog2Count,varLog2Count,trials\n";
  out.precision(17);
  for (const PointStats& p : points) {
    out << p.n << ',' << p.mean_log2_count << ',' << p.var_log2_count << ',' << p.trials << '\n';
  }
}

namespace {

double ols_slope(std::span<const double> xs, std::span<const double> ys) {
  const auto k = static_cast<double>(xs.size());
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

// Linear-interpolation quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return sorted[lo] + t * (sorted[hi] - sorted[lo]);
}

}  // namespace

GrowthFit fit_growth_rate(std::span<const RunRecord> records, std::uint64_t resamples, std::uint64_t seed) {
  std::map<int, std::vector<double>> groups;
  for (const RunRecord& r : records) groups[r.n].push_back(r.log2_count);
  if (groups.size() < 3) {
    throw Error(ErrorKind::Statistics, "growth fit needs at least 3 distinct n, got " + std::to_string(groups.size()));
  }
  for (const auto& [n, values] : groups) {
    if (values.size() < 30) {
      throw Error(ErrorKind::Statistics, "growth fit needs at least 30 trials per n; n=" + std::to_string(n) +
                                             " has " + std::to_string(values.size()));
    }
  }
  if (resamples < 1) throw Error(ErrorKind::Statistics, "bootstrap needs at least one resample");

  GrowthFit fit;
  fit.points = per_n_stats(records);
  fit.resamples = resamples;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const PointStats& p : fit.points) {
    xs.push_back(p.n);
    ys.push_back(p.mean_log2_count);
  }
  fit.delta_hat = ols_slope(xs, ys);

  SplitMix64 rng(seed);
  std::vector<double> slopes;
  slopes.reserve(resamples);
  std::vector<double> boot(ys.size());
  for (std::uint64_t b = 0; b < resamples; ++b) {
    std::size_t i = 0;
    for (const auto& [n, values] : groups) {
      double sum = 0;
      for (std::size_t k = 0; k < values.size(); ++k) sum += values[rng.below(values.size())];
      boot[i++] = sum / static_cast<double>(values.size());
    }
    slopes.push_back(ols_slope(xs, boot));
  }
  std::sort(slopes.begin(), slopes.end());
  fit.ci = {quantile(slopes, 0.025), quantile(slopes, 0.975)};
  return fit;
}

nlohmann::json GrowthFit::to_json() const {
  auto list = nlohmann::json::array();
  for (const PointStats& p : points) {
    list.push_back(
        {{"n", p.n}, {"trials", p.trials}, {"meanLog2Count", p.mean_log2_count}, {"varLog2Count", p.var_log2_count}});
  }
  return {{"deltaHat", delta_hat}, {"ci", {ci.low, ci.high}}, {"resamples", resamples}, {"points", list}};
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0, 1};
  const auto n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = (phat + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
  // The bounds are exact at the ends; the formula only reaches them up to rounding.
  return {successes == 0 ? 0.0 : std::max(0.0, center - half),
          successes == trials ? 1.0 : std::min(1.0, center + half)};
}

bool count_within(const BigInt& count, const Rational& delta, int n) {
  if (delta < 0) throw Error(ErrorKind::Statistics, "delta must be non-negative");
  if (count < 1) throw Error(ErrorKind::Statistics, "path counts are at least 1");
  const Rational exponent = delta * n;
  const BigInt whole = numerator(exponent) / denominator(exponent);  // floor, exponent >= 0
  const Rational fraction = exponent - Rational(whole);
  const auto k = whole.convert_to<unsigned long long>();
  const unsigned bits = msb(count);  // count in [2^bits, 2^(bits+1))
  if (bits < k) return true;
  if (bits > k) return false;
  // count = 2^k * m with m in [1, 2): compare log2(m) with the fraction.
  if (fraction == 0) return count == pow2(static_cast<unsigned>(k));
  return log2(count) - static_cast<double>(k) <= fraction.convert_to<double>();
}

namespace {

template <typename Predicate>
std::vector<FrequencyRow> frequency_by_n(std::span<const RunRecord> records, Predicate hit) {
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> tallies;
  for (const RunRecord& r : records) {
    auto& [trials, hits] = tallies[r.n];
    ++trials;
    if (hit(r)) ++hits;
  }
  std::vector<FrequencyRow> rows;
  for (const auto& [n, tally] : tallies) {
    FrequencyRow row;
    row.n = n;
    row.trials = tally.first;
    row.hits = tally.second;
    row.fraction = static_cast<double>(row.hits) / static_cast<double>(row.trials);
    row.ci = wilson_interval(row.hits, row.trials);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<FrequencyRow> estimate_tail(std::span<const RunRecord> records, const Rational& delta) {
  if (delta < 0) throw Error(ErrorKind::Statistics, "delta must be non-negative");
  return frequency_by_n(records, [&](const RunRecord& r) { return count_within(r.count, delta, r.n); });
}

std::vector<TurnDensity> turn_density_report(std::span<const RunRecord> records, std::span<const Rational> kappas) {
  std::vector<TurnDensity> report;
  for (const Rational& kappa : kappas) {
    const BigInt num = numerator(kappa);
    const BigInt den = denominator(kappa);
    report.push_back({kappa, frequency_by_n(records, [&](const RunRecord& r) {
                        return BigInt(r.min_turns) * den < num * r.n;
                      })});
  }
  return report;
}

nlohmann::json to_json(std::span<const FrequencyRow> rows) {
  auto list = nlohmann::json::array();
  for (const FrequencyRow& row : rows) {
    list.push_back({{"n", row.n},
                    {"trials", row.trials},
                    {"hits", row.hits},
                    {"fraction", row.fraction},
                    {"wilson95", {row.ci.low, row.ci.high}}});
  }
  return list;
}

bool non_increasing(std::span<const FrequencyRow> rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].fraction > rows[i - 1].fraction) return false;
  }
  return true;
}

}  // namespace dlpp
