#include "dlpp/transforms.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "dlpp/error.hpp"
#include "dlpp/passage.hpp"
#include "dlpp/path_analysis.hpp"

namespace dlpp {
namespace {

// 1-based position of `z` on the path, if the path visits it.
std::optional<std::size_t> position_on(const DirectedPath& path, const std::vector<Site>& sites, const Site& z) {
  if (z.dimension() != path.dimension()) return std::nullopt;
  std::int64_t level = 0;
  for (std::size_t a = 0; a < z.dimension(); ++a) {
    if (z[a] < path.origin()[a]) return std::nullopt;
    level += z[a] - path.origin()[a];
  }
  if (level >= static_cast<std::int64_t>(sites.size())) return std::nullopt;
  const auto i = static_cast<std::size_t>(level);
  if (sites[i] != z) return std::nullopt;
  return i + 1;
}

std::size_t turn_position(const DirectedPath& path, const std::vector<Site>& sites, const Site& y) {
  auto pos = position_on(path, sites, y);
  if (!pos) throw Error(ErrorKind::Plan, "S site " + y.to_string() + " is not on the path");
  if (!is_turn(path, *pos)) throw Error(ErrorKind::Plan, "S site " + y.to_string() + " is not a turn");
  return *pos;
}

void require_separated(std::span<const Site> S, std::int64_t min_distance) {
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      if (l1_distance(S[i], S[j]) < min_distance) {
        throw Error(ErrorKind::Plan, "S sites " + S[i].to_string() + " and " + S[j].to_string() +
                                         " are closer than " + std::to_string(min_distance));
      }
    }
  }
}

// All sites within l1 distance R of `center` (including those outside any box).
std::vector<Site> l1_ball(const Site& center, int R) {
  std::vector<Site> ball;
  Site z = center;
  std::function<void(std::size_t, int)> fill = [&](std::size_t axis, int budget) {
    if (axis == center.dimension()) {
      ball.push_back(z);
      return;
    }
    for (int delta = -budget; delta <= budget; ++delta) {
      z[axis] = center[axis] + delta;
      fill(axis + 1, budget - std::abs(delta));
    }
    z[axis] = center[axis];
  };
  fill(0, R);
  return ball;
}

class RewriteSet {
 public:
  void assign(std::size_t index, std::int64_t value) {
    auto [it, inserted] = values_.emplace(index, value);
    if (!inserted && it->second != value) {
      throw Error(ErrorKind::Consistency, "conflicting rewrites at site index " + std::to_string(index));
    }
  }
  bool contains(std::size_t index) const { return values_.count(index) > 0; }

  Surgery finish(std::size_t clipped) const {
    Surgery surgery;
    surgery.clipped = clipped;
    for (const auto& [index, value] : values_) surgery.rewrites.push_back({index, value});
    return surgery;
  }

 private:
  std::map<std::size_t, std::int64_t> values_;
};

Environment materialize(const Environment& env, const Surgery& surgery) {
  std::vector<std::int64_t> weights(env.weights().begin(), env.weights().end());
  for (const Rewrite& r : surgery.rewrites) weights[r.index] = r.value;
  return env.with_weights(std::move(weights));
}

std::string describe(std::span<const Site> S) {
  std::string out = "[";
  for (std::size_t i = 0; i < S.size(); ++i) out += (i ? " " : "") + S[i].to_string();
  return out + "]";
}

}  // namespace

std::string_view to_string(TransformKind kind) noexcept {
  switch (kind) {
    case TransformKind::Perco: return "perco";
    case TransformKind::Lift: return "lift";
    case TransformKind::RGood: return "rgood";
  }
  return "unknown";
}

TransformKind parse_transform_kind(std::string_view text) {
  if (text == "perco") return TransformKind::Perco;
  if (text == "lift") return TransformKind::Lift;
  if (text == "rgood") return TransformKind::RGood;
  throw Error(ErrorKind::Config, "unknown transform kind '" + std::string(text) + "'");
}

TransformPlan lift_plan(const Environment& env, const DirectedPath& path) {
  TransformPlan plan;
  plan.kind = TransformKind::Lift;
  plan.path = path;
  const std::int64_t top = env.alphabet().max_value();
  for (const Site& y : path.sites()) {
    if (env.weight(y) < top) plan.S.push_back(y);
  }
  return plan;
}

void validate_plan(const Environment& env, const TransformPlan& plan) {
  const DirectedPath& path = plan.path;
  if (path.dimension() != env.dimension()) throw Error(ErrorKind::Plan, "path dimension differs from environment");
  if (!path.within(env.box())) throw Error(ErrorKind::Plan, "path leaves the box");
  const auto sites = path.sites();
  std::set<Site> distinct(plan.S.begin(), plan.S.end());
  if (distinct.size() != plan.S.size()) throw Error(ErrorKind::Plan, "S contains duplicates");

  switch (plan.kind) {
    case TransformKind::Lift: {
      if (!plan.S.empty()) {
        const auto derived = lift_plan(env, path).S;
        if (std::set<Site>(derived.begin(), derived.end()) != distinct) {
          throw Error(ErrorKind::Plan, "lift S must be the sub-max sites of the path");
        }
      }
      return;
    }
    case TransformKind::Perco: {
      for (const Site& y : plan.S) turn_position(path, sites, y);
      require_separated(plan.S, 2);
      return;
    }
    case TransformKind::RGood: {
      if (plan.R < 1) throw Error(ErrorKind::Plan, "R must be at least 1");
      for (const Site& y : plan.S) {
        if (!is_r_good(path, turn_position(path, sites, y), env, plan.R)) {
          throw Error(ErrorKind::Plan, "S site " + y.to_string() + " is not an R-good turn");
        }
      }
      require_separated(plan.S, 2 * static_cast<std::int64_t>(plan.R) + 1);
      return;
    }
  }
}

Surgery plan_surgery(const Environment& env, const TransformPlan& plan) {
  validate_plan(env, plan);
  const Box& box = env.box();
  const std::int64_t top = env.alphabet().max_value();
  const std::int64_t bottom = env.alphabet().min_value();
  const auto sites = plan.path.sites();
  RewriteSet rewrites;
  std::size_t clipped = 0;

  switch (plan.kind) {
    case TransformKind::Lift: {
      for (const Site& y : sites) {
        if (env.weight(y) < top) rewrites.assign(box.index_of(y), top);
      }
      break;
    }
    case TransformKind::Perco: {
      for (const Site& y : plan.S) {
        const std::size_t pos = turn_position(plan.path, sites, y);
        const Site star = star_of(plan.path, pos);
        if (box.contains(star)) {
          rewrites.assign(box.index_of(star), top);
        } else {
          ++clipped;
        }
        for (const Site& z : shield_of(plan.path, pos, box, &clipped)) rewrites.assign(box.index_of(z), bottom);
      }
      break;
    }
    case TransformKind::RGood: {
      std::set<std::size_t> claimed;
      for (const Site& y : plan.S) {
        const Site star = star_of(plan.path, turn_position(plan.path, sites, y));
        for (const Site& z : l1_ball(y, plan.R)) {
          if (!box.contains(z)) {
            ++clipped;
            continue;
          }
          const std::size_t index = box.index_of(z);
          if (!claimed.insert(index).second) throw Error(ErrorKind::Plan, "R-balls of S overlap");
          const bool keep = z == star || position_on(plan.path, sites, z).has_value();
          rewrites.assign(index, keep ? top : bottom);
        }
      }
      break;
    }
  }
  return rewrites.finish(clipped);
}

std::size_t support_ceiling(const TransformPlan& plan, std::size_t dimension) {
  const std::size_t s = plan.S.size();
  switch (plan.kind) {
    case TransformKind::Perco: return (2 * dimension - 1) * s;
    case TransformKind::Lift: return s;
    case TransformKind::RGood: {
      std::size_t side = 1;
      for (std::size_t a = 0; a < dimension; ++a) side *= 2 * static_cast<std::size_t>(plan.R) + 1;
      return side * s;
    }
  }
  return 0;
}

Environment apply_perco_transform(const Environment& env, const TransformPlan& plan) {
  if (plan.kind != TransformKind::Perco) throw Error(ErrorKind::Plan, "expected a perco plan");
  return materialize(env, plan_surgery(env, plan));
}

Environment apply_lift_transform(const Environment& env, const DirectedPath& path) {
  return materialize(env, plan_surgery(env, lift_plan(env, path)));
}

Environment apply_rgood_transform(const Environment& env, const TransformPlan& plan) {
  if (plan.kind != TransformKind::RGood) throw Error(ErrorKind::Plan, "expected an rgood plan");
  return materialize(env, plan_surgery(env, plan));
}

Environment apply_transform(const Environment& env, const TransformPlan& plan) {
  switch (plan.kind) {
    case TransformKind::Perco: return apply_perco_transform(env, plan);
    case TransformKind::Lift: return apply_lift_transform(env, plan.path);
    case TransformKind::RGood: return apply_rgood_transform(env, plan);
  }
  throw Error(ErrorKind::Plan, "unknown transform kind");
}

std::vector<std::size_t> changed_sites(const Environment& a, const Environment& b) {
  if (!(a.box() == b.box())) throw Error(ErrorKind::Domain, "environments live on different boxes");
  std::vector<std::size_t> changed;
  for (std::size_t i = 0; i < a.box().size(); ++i) {
    if (a.at(i) != b.at(i)) changed.push_back(i);
  }
  return changed;
}

Rational support_probability_ratio(const Environment& env, const Environment& env_prime,
                                   std::span<const std::size_t> support) {
  Rational before = 1;
  Rational after = 1;
  for (std::size_t i : support) {
    before *= env.alphabet().probability_of(env.at(i));
    after *= env_prime.alphabet().probability_of(env_prime.at(i));
  }
  if (before == 0) throw Error(ErrorKind::Domain, "original assignment has probability zero");
  return after / before;
}

std::vector<Excursion> excursions(const DirectedPath& base, const DirectedPath& other) {
  if (base.origin() != other.origin() || base.endpoint() != other.endpoint()) {
    throw Error(ErrorKind::Domain, "paths do not share both endpoints");
  }
  const auto base_sites = base.sites();
  std::vector<Excursion> out;
  std::optional<Site> last_common;
  std::vector<Site> interior;
  for (const Site& z : other.sites()) {
    if (position_on(base, base_sites, z)) {
      if (!interior.empty()) out.push_back({*last_common, z, std::move(interior)});
      interior.clear();
      last_common = z;
    } else {
      interior.push_back(z);
    }
  }
  return out;
}

namespace {

std::int64_t interior_weight(const Environment& env, std::span<const Site> sites) {
  std::int64_t total = 0;
  for (const Site& z : sites) total += env.weight(z);
  return total;
}

// Sum of omega over base(z0, z1), the base sites strictly between z0 and z1.
std::int64_t base_segment_weight(const Environment& env, const std::vector<Site>& base_sites, const Site& origin,
                                 const Site& z0, const Site& z1) {
  const auto from = static_cast<std::size_t>((z0 - origin).norm());
  const auto to = static_cast<std::size_t>((z1 - origin).norm());
  std::int64_t total = 0;
  for (std::size_t i = from + 1; i < to; ++i) total += env.weight(base_sites[i]);
  return total;
}

void require_maximal(const Environment& env, const DirectedPath& path, const PassageField& field) {
  if (path.weight(env) != field.max_weight(path.endpoint())) {
    throw Error(ErrorKind::Domain, "path " + path.step_string() + " is not maximal in the source environment");
  }
}

}  // namespace

LocalityReport check_locality(const Environment& env, const Environment& env_prime, const DirectedPath& path,
                              std::span<const Site> S, std::uint64_t cap) {
  const Site& origin = path.origin();
  const Site x = path.endpoint();
  const PassageField field = compute_passage_field(env, origin);
  require_maximal(env, path, field);
  const PassageField field_prime = compute_passage_field(env_prime, origin);
  const auto sites = path.sites();

  LocalityReport report;
  std::vector<Site> stars;
  for (const Site& y : S) stars.push_back(star_of(path, turn_position(path, sites, y)));

  // Item 1.
  report.item1_holds = true;
  if (path.weight(env_prime) != field_prime.max_weight(x)) {
    report.item1_holds = false;
    report.violations.push_back({path, std::nullopt, std::nullopt, "path is not maximal in omega'"});
  }
  const auto bif_prime = bifurcations_of(path, env_prime);
  const auto bif = bifurcations_of(path, env);
  report.bifurcation_set = sites_at(path, bif_prime.indices);
  const std::set<Site> old_set = [&] {
    auto v = sites_at(path, bif.indices);
    return std::set<Site>(v.begin(), v.end());
  }();
  const std::set<Site> new_set(report.bifurcation_set.begin(), report.bifurcation_set.end());
  const std::set<Site> s_set(S.begin(), S.end());
  for (const Site& y : S) {
    if (!new_set.count(y)) {
      report.item1_holds = false;
      report.violations.push_back({path, y, y, "S site is not a bifurcation in omega'"});
    }
  }
  for (const Site& b : report.bifurcation_set) {
    if (!s_set.count(b) && !old_set.count(b)) {
      report.item1_holds = false;
      report.violations.push_back({path, b, b, "new bifurcation outside S"});
    }
  }

  // Item 2.
  const MaximalPaths maximal = enumerate_maximal_paths(field_prime, env_prime, x, cap);
  if (maximal.overflowed()) {
    report.overflow = maximal.overflow;
    report.item2_holds = false;
    return report;
  }
  report.item2_holds = true;
  for (const DirectedPath& other : maximal.paths) {
    ++report.paths_checked;
    for (const Excursion& e : excursions(path, other)) {
      if (interior_weight(env, e.interior) == base_segment_weight(env, sites, origin, e.z0, e.z1)) continue;
      if (e.interior.size() == 1 && std::find(stars.begin(), stars.end(), e.interior.front()) != stars.end()) {
        continue;
      }
      report.item2_holds = false;
      report.violations.push_back({other, e.z0, e.z1, "excursion is neither weight-neutral nor a single star of S"});
    }
  }
  return report;
}

LocalityReport check_lift_containment(const Environment& env, const Environment& env_prime,
                                      const DirectedPath& path, std::uint64_t cap) {
  const Site x = path.endpoint();
  const PassageField field = compute_passage_field(env, path.origin());
  require_maximal(env, path, field);
  const PassageField field_prime = compute_passage_field(env_prime, path.origin());

  LocalityReport report;
  report.bifurcation_set = sites_at(path, bifurcations_of(path, env_prime).indices);
  const std::int64_t ceiling = static_cast<std::int64_t>(path.length()) * env.alphabet().max_value();
  report.item1_holds = path.weight(env_prime) == ceiling && field_prime.max_weight(x) == ceiling;
  if (!report.item1_holds) {
    report.violations.push_back({path, std::nullopt, std::nullopt, "lifted path does not reach the all-max weight"});
  }
  const MaximalPaths maximal = enumerate_maximal_paths(field_prime, env_prime, x, cap);
  if (maximal.overflowed()) {
    report.overflow = maximal.overflow;
    return report;
  }
  report.item2_holds = true;
  const std::int64_t best = field.max_weight(x);
  for (const DirectedPath& other : maximal.paths) {
    ++report.paths_checked;
    if (other.weight(env) != best) {
      report.item2_holds = false;
      report.violations.push_back({other, std::nullopt, std::nullopt, "maximal path of omega' is not maximal in omega"});
    }
  }
  return report;
}

MapCountAudit audit_map_count(const Environment& env_prime, std::span<const MapCandidate> candidates) {
  MapCountAudit audit;
  std::set<std::pair<DirectedPath, std::set<Site>>> distinct;
  for (const MapCandidate& c : candidates) {
    try {
      if (!(apply_transform(c.env, c.plan) == env_prime)) {
        audit.rejected.push_back("candidate " + c.plan.path.step_string() + " S=" + describe(c.plan.S) +
                                 " does not map onto omega'");
        continue;
      }
    } catch (const Error& e) {
      audit.rejected.push_back("candidate " + c.plan.path.step_string() + " rejected: " + e.what());
      continue;
    }
    distinct.emplace(c.plan.path, std::set<Site>(c.plan.S.begin(), c.plan.S.end()));
  }
  audit.count = distinct.size();
  return audit;
}

nlohmann::json TransformCheckSummary::to_json() const {
  return {
      {"environments", environments},
      {"eligible", eligible},
      {"instances", instances},
      {"passes", passes},
      {"violationCount", violation_count},
      {"violations", violations},
      {"localityFailures", locality_failures},
      {"amplificationFailures", amplification_failures},
      {"supportFailures", support_failures},
      {"ratioFailures", ratio_failures},
      {"bifurcationFailures", bifurcation_failures},
      {"overflows", overflows},
      {"clipped", clipped},
      {"maxPlanSize", max_plan_size},
      {"maxMapCount", max_map_count.str()},
      {"mapCountBound", pow2(static_cast<unsigned>(5 * max_plan_size)).str()},
  };
}

namespace {

class TransformSweep {
 public:
  explicit TransformSweep(const TransformCheckConfig& config)
      : config_(config),
        target_(config.target.value_or(config.box.corner())),
        origin_(Site::zero(config.box.dimension())) {}

  void process(const Environment& env, const std::string& label) {
    ++summary_.environments;
    const PassageField field = compute_passage_field(env, origin_);
    if (config_.kind == TransformKind::Perco) {
      const auto sites = static_cast<std::int64_t>((target_ - origin_).norm()) + 1;
      if (field.max_weight(target_) != sites * env.alphabet().max_value()) return;
    }
    const auto plans = candidate_plans(env, field);
    if (plans.empty()) return;
    ++summary_.eligible;
    for (const TransformPlan& plan : plans) check(env, plan, label);
  }

  TransformCheckSummary finish() {
    for (const auto& [weights, preimages] : images_) {
      summary_.max_map_count = std::max(summary_.max_map_count, BigInt(preimages.size()));
    }
    return summary_;
  }

  bool wants_more() const { return summary_.eligible < config_.instances; }

 private:
  std::vector<DirectedPath> maximal_paths(const Environment& env, const PassageField& field) const {
    if (!config_.all_plans) return {first_maximal_path(field, env, target_)};
    auto enumerated = enumerate_maximal_paths(field, env, target_, config_.path_cap);
    if (enumerated.overflowed()) return {first_maximal_path(field, env, target_)};
    return std::move(enumerated.paths);
  }

  std::vector<TransformPlan> candidate_plans(const Environment& env, const PassageField& field) const {
    std::vector<TransformPlan> plans;
    for (const DirectedPath& path : maximal_paths(env, field)) {
      if (config_.kind == TransformKind::Lift) {
        plans.push_back(lift_plan(env, path));
        continue;
      }
      const bool rgood = config_.kind == TransformKind::RGood;
      const auto positions = rgood ? r_good_turns(path, env, config_.R) : turns_of(path);
      const auto turn_sites = sites_at(path, positions);
      const std::int64_t separation = rgood ? 2 * static_cast<std::int64_t>(config_.R) + 1 : 2;
      auto make = [&](std::vector<Site> S) {
        TransformPlan plan;
        plan.kind = config_.kind;
        plan.path = path;
        plan.S = std::move(S);
        plan.R = rgood ? config_.R : 0;
        return plan;
      };
      if (!config_.all_plans) {
        auto selection = select_separated_turns(turn_sites, separation);
        if (!selection.sites.empty()) plans.push_back(make(std::move(selection.sites)));
      } else {
        std::vector<Site> chosen;
        std::function<void(std::size_t)> extend = [&](std::size_t from) {
          if (!chosen.empty()) plans.push_back(make(chosen));
          if (chosen.size() >= config_.max_plan_size) return;
          for (std::size_t i = from; i < turn_sites.size(); ++i) {
            bool far = std::all_of(chosen.begin(), chosen.end(),
                                   [&](const Site& s) { return l1_distance(s, turn_sites[i]) >= separation; });
            if (!far) continue;
            chosen.push_back(turn_sites[i]);
            extend(i + 1);
            chosen.pop_back();
          }
        };
        extend(0);
      }
      if (!config_.all_plans && !plans.empty()) break;
    }
    return plans;
  }

  void fail(std::uint64_t& counter, const std::string& label, const TransformPlan& plan, const std::string& why,
            bool& ok) {
    ++counter;
    ++summary_.violation_count;
    ok = false;
    if (summary_.violations.size() < 32) {
      summary_.violations.push_back(label + " path=" + plan.path.step_string() + " S=" + describe(plan.S) + ": " +
                                    why);
    }
  }

  void check(const Environment& env, const TransformPlan& plan, const std::string& label) {
    ++summary_.instances;
    summary_.max_plan_size = std::max(summary_.max_plan_size, plan.S.size());
    bool ok = true;

    const Surgery surgery = plan_surgery(env, plan);
    summary_.clipped += surgery.clipped;
    const Environment env_prime = apply_transform(env, plan);

    std::vector<std::size_t> support;
    for (const Rewrite& r : surgery.rewrites) support.push_back(r.index);
    for (std::size_t changed : changed_sites(env, env_prime)) {
      if (!std::binary_search(support.begin(), support.end(), changed)) {
        fail(summary_.support_failures, label, plan, "site changed outside the surgery support", ok);
        break;
      }
    }
    if (support.size() > support_ceiling(plan, env.dimension())) {
      fail(summary_.support_failures, label, plan, "support exceeds its ceiling", ok);
    }
    const Rational p = env.alphabet().extreme_mass();
    if (p > 0 && support_probability_ratio(env, env_prime, support) < pow(p, static_cast<unsigned>(support.size()))) {
      fail(summary_.ratio_failures, label, plan, "probability ratio below p^|support|", ok);
    }

    LocalityReport report;
    if (plan.kind == TransformKind::Lift) {
      report = check_lift_containment(env, env_prime, plan.path, config_.path_cap);
    } else {
      const auto bif = bifurcations_of(plan.path, env_prime);
      const auto bif_sites = sites_at(plan.path, bif.indices);
      for (const Site& y : plan.S) {
        if (std::find(bif_sites.begin(), bif_sites.end(), y) == bif_sites.end()) {
          fail(summary_.bifurcation_failures, label, plan, "S site " + y.to_string() + " not a bifurcation", ok);
        }
      }
      report = check_locality(env, env_prime, plan.path, plan.S, config_.path_cap);
      const PassageField field_prime = compute_passage_field(env_prime, origin_);
      if (field_prime.path_count(target_) < pow2(static_cast<unsigned>(plan.S.size()))) {
        fail(summary_.amplification_failures, label, plan, "maximal-path count below 2^|S|", ok);
      }
    }
    if (report.overflow) {
      ++summary_.overflows;
      fail(summary_.locality_failures, label, plan, "enumeration overflow, locality not checked", ok);
    } else if (!report.passes()) {
      const std::string why = report.violations.empty() ? "locality failed" : report.violations.front().reason;
      fail(summary_.locality_failures, label, plan, why, ok);
    }

    std::vector<std::int64_t> key(env_prime.weights().begin(), env_prime.weights().end());
    images_[std::move(key)].emplace(plan.path, std::set<Site>(plan.S.begin(), plan.S.end()));
    if (ok) ++summary_.passes;
  }

  TransformCheckConfig config_;
  Site target_;
  Site origin_;
  TransformCheckSummary summary_;
  std::map<std::vector<std::int64_t>, std::set<std::pair<DirectedPath, std::set<Site>>>> images_;
};

}  // namespace

TransformCheckSummary run_transform_check(const TransformCheckConfig& config) {
  if (!config.box.contains(config.target.value_or(config.box.corner()))) {
    throw Error(ErrorKind::Bounds, "target outside the box");
  }
  TransformSweep sweep(config);
  if (config.environment) {
    if (!(config.environment->box() == config.box)) {
      throw Error(ErrorKind::Bounds, "environment box differs from the check box");
    }
    sweep.process(*config.environment, "env seed=" + std::to_string(config.environment->seed()));
  } else if (config.exhaustive) {
    const BigInt total = environment_space_size(config.box, config.alphabet);
    if (total > config.exhaustion_limit) {
      throw Error(ErrorKind::ExhaustionLimit, "box " + config.box.to_string() + " has " + total.str() +
                                                  " environments, above the limit");
    }
    const auto count = total.convert_to<std::uint64_t>();
    for (std::uint64_t index = 0; index < count; ++index) {
      sweep.process(environment_from_index(config.box, config.alphabet, index), "env#" + std::to_string(index));
    }
  } else {
    const std::uint64_t limit = config.max_environments ? config.max_environments : 200 * config.instances;
    for (std::uint64_t k = 0; k < limit && sweep.wants_more(); ++k) {
      const std::uint64_t seed = derive_seed(config.base_seed, k, 0);
      sweep.process(generate_environment(config.box, config.alphabet, seed), "seed=" + std::to_string(seed));
    }
  }
  return sweep.finish();
}

}  // namespace dlpp
