#include "dlpp/mvmp.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <set>
#include <thread>
#include <utility>

#include "dlpp/error.hpp"
#include "dlpp/path_analysis.hpp"

namespace dlpp {

FiniteSpace::FiniteSpace(Box box, WeightAlphabet alphabet)
    : box_(std::move(box)), alphabet_(std::move(alphabet)), total_(environment_space_size(box_, alphabet_)) {}

Environment FiniteSpace::environment_at(std::uint64_t index) const {
  if (index >= total_) throw Error(ErrorKind::Bounds, "state index outside the space");
  return environment_from_index(box_, alphabet_, index);
}

std::uint64_t FiniteSpace::index_of(const Environment& env) const { return index_of_environment(env); }

Rational FiniteSpace::probability(const Environment& env) const { return environment_probability(env); }

InstanceContext::InstanceContext(const Environment& env, Site target, std::uint64_t path_cap)
    : env_(env), target_(std::move(target)), path_cap_(path_cap) {}

const PassageField& InstanceContext::field() {
  if (!field_) field_ = compute_passage_field(env_, Site::zero(env_.dimension()));
  return *field_;
}

std::int64_t InstanceContext::max_weight() { return field().max_weight(target_); }

const BigInt& InstanceContext::count() { return field().path_count(target_); }

const std::vector<DirectedPath>& InstanceContext::maximal_paths() {
  if (!paths_) {
    auto enumerated = enumerate_maximal_paths(field(), env_, target_, path_cap_);
    if (enumerated.overflowed()) {
      throw Error(ErrorKind::Budget, enumerated.overflow->str() + " maximal paths exceed the enumeration cap");
    }
    paths_ = std::move(enumerated.paths);
  }
  return *paths_;
}

std::size_t InstanceContext::min_turns() {
  if (!min_turns_) min_turns_ = min_turns_over_maximal(env_, target_);
  return *min_turns_;
}

EventPredicate event_full() {
  return [](InstanceContext&) { return true; };
}

EventPredicate max_weight_equals(std::int64_t value) {
  return [value](InstanceContext& ctx) { return ctx.max_weight() == value; };
}

EventPredicate max_weight_below(std::int64_t value) {
  return [value](InstanceContext& ctx) { return ctx.max_weight() < value; };
}

EventPredicate max_weight_at_least(std::int64_t value) {
  return [value](InstanceContext& ctx) { return ctx.max_weight() >= value; };
}

EventPredicate count_at_most(BigInt bound) {
  return [bound = std::move(bound)](InstanceContext& ctx) { return ctx.count() <= bound; };
}

EventPredicate min_turns_at_least(std::size_t k) {
  return [k](InstanceContext& ctx) { return ctx.min_turns() >= k; };
}

EventPredicate good_turns_at_least(int R, std::size_t k) {
  return [R, k](InstanceContext& ctx) {
    for (const DirectedPath& path : ctx.maximal_paths()) {
      if (r_good_turns(path, ctx.env(), R).size() < k) return false;
    }
    return true;
  };
}

EventPredicate all_of(std::vector<EventPredicate> parts) {
  return [parts = std::move(parts)](InstanceContext& ctx) {
    return std::all_of(parts.begin(), parts.end(), [&](const EventPredicate& part) { return part(ctx); });
  };
}

namespace {

// Every subset of `candidates` of size exactly s with pairwise l1 distance >= separation.
std::vector<std::vector<Site>> separated_subsets(const std::vector<Site>& candidates, std::size_t s,
                                                 std::int64_t separation) {
  std::vector<std::vector<Site>> out;
  std::vector<Site> chosen;
  auto extend = [&](auto&& self, std::size_t from) -> void {
    if (chosen.size() == s) {
      out.push_back(chosen);
      return;
    }
    for (std::size_t i = from; i < candidates.size(); ++i) {
      const bool far = std::all_of(chosen.begin(), chosen.end(),
                                   [&](const Site& c) { return l1_distance(c, candidates[i]) >= separation; });
      if (!far) continue;
      chosen.push_back(candidates[i]);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  extend(extend, 0);
  return out;
}

PlanFamily turn_family(TransformKind kind, int R, std::size_t s) {
  return [kind, R, s](InstanceContext& ctx) {
    std::vector<TransformPlan> plans;
    const bool rgood = kind == TransformKind::RGood;
    const std::int64_t separation = rgood ? 2 * static_cast<std::int64_t>(R) + 1 : 2;
    for (const DirectedPath& path : ctx.maximal_paths()) {
      const auto positions = rgood ? r_good_turns(path, ctx.env(), R) : turns_of(path);
      for (auto& S : separated_subsets(sites_at(path, positions), s, separation)) {
        plans.push_back({kind, path, std::move(S), rgood ? R : 0});
      }
    }
    return plans;
  };
}

std::string family_key(const TransformPlan& plan) {
  std::string key = plan.path.origin().to_string() + plan.path.step_string() + "|";
  std::vector<Site> S = plan.S;
  std::sort(S.begin(), S.end());
  for (const Site& y : S) key += y.to_string();
  return key;
}

struct Preimage {
  Rational mass;
  std::string path;
  std::vector<Site> S;
};

struct Partial {
  Rational p_e = 0;
  Rational p_e_prime = 0;
  std::optional<std::uint64_t> min_s;
  std::map<std::pair<std::uint64_t, std::string>, Preimage> preimages;
  std::exception_ptr failure;
};

void sweep_range(const FiniteSpace& space, const MvmpInstance& instance, const MvmpOptions& options,
                 std::uint64_t begin, std::uint64_t end, Partial& out) {
  try {
    for (std::uint64_t index = begin; index < end; ++index) {
      const Environment env = space.environment_at(index);
      InstanceContext ctx(env, instance.target, options.path_cap);
      const Rational mass = space.probability(env);
      if (instance.event_e_prime(ctx)) out.p_e_prime += mass;
      if (!instance.event_e(ctx)) continue;
      out.p_e += mass;
      const auto plans = instance.smap(ctx);
      if (plans.empty()) {
        throw Error(ErrorKind::DegenerateInstance,
                    "S(omega) is empty for state " + std::to_string(index) + " in E; the bound is ill-posed");
      }
      std::set<std::string> distinct;
      for (const TransformPlan& plan : plans) {
        std::string key = family_key(plan);
        if (!distinct.insert(key).second) continue;
        const std::uint64_t image = space.index_of(instance.tmap(env, plan));
        auto [it, inserted] = out.preimages.try_emplace({image, std::move(key)});
        if (inserted) {
          it->second.path = plan.path.step_string();
          it->second.S = plan.S;
        }
        it->second.mass += mass;
      }
      out.min_s = std::min<std::uint64_t>(out.min_s.value_or(distinct.size()), distinct.size());
    }
  } catch (...) {
    out.failure = std::current_exception();
  }
}

void merge(Partial& into, Partial& from) {
  into.p_e += from.p_e;
  into.p_e_prime += from.p_e_prime;
  if (from.min_s) into.min_s = std::min(into.min_s.value_or(*from.min_s), *from.min_s);
  for (auto& [key, pre] : from.preimages) {
    auto [it, inserted] = into.preimages.try_emplace(key, pre);
    if (!inserted) it->second.mass += pre.mass;
  }
}

}  // namespace

PlanFamily perco_family(std::size_t s) { return turn_family(TransformKind::Perco, 0, s); }

PlanFamily rgood_family(int R, std::size_t s) { return turn_family(TransformKind::RGood, R, s); }

PlanFamily lift_family() {
  return [](InstanceContext& ctx) {
    std::vector<TransformPlan> plans;
    for (const DirectedPath& path : ctx.maximal_paths()) plans.push_back(lift_plan(ctx.env(), path));
    return plans;
  };
}

MvmpInstance identity_instance(const FiniteSpace& space, Rational epsilon) {
  MvmpInstance instance;
  instance.label = "identity";
  instance.target = space.box().corner();
  instance.event_e = event_full();
  instance.event_e_prime = event_full();
  instance.smap = [](InstanceContext& ctx) {
    TransformPlan plan;
    plan.kind = TransformKind::Lift;
    plan.path = first_maximal_path(ctx.field(), ctx.env(), ctx.target());
    return std::vector<TransformPlan>{plan};
  };
  instance.tmap = [](const Environment& env, const TransformPlan&) { return env; };
  instance.epsilon = std::move(epsilon);
  return instance;
}

MvmpReport verify_mvmp(const FiniteSpace& space, const MvmpInstance& instance, const MvmpOptions& options) {
  if (space.total_states() > options.exhaustion_limit) {
    throw Error(ErrorKind::ExhaustionLimit, "space has " + space.total_states().str() +
                                                " states, above the limit " + std::to_string(options.exhaustion_limit));
  }
  if (instance.epsilon <= 0) throw Error(ErrorKind::Instance, "epsilon must be positive");
  if (!space.box().contains(instance.target)) throw Error(ErrorKind::Bounds, "target outside the box");

  const auto total = space.total_states().convert_to<std::uint64_t>();
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(total)));
  std::vector<Partial> partials(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = total * w / workers;
      const std::uint64_t end = total * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] { sweep_range(space, instance, options, begin, end, partials[w]); });
    }
  }
  for (Partial& part : partials) {
    if (part.failure) std::rethrow_exception(part.failure);
  }
  Partial all;
  for (Partial& part : partials) merge(all, part);

  MvmpReport report;
  report.label = instance.label;
  report.states = space.total_states();
  report.p_e = all.p_e;
  report.p_e_prime = all.p_e_prime;
  report.min_s = all.min_s;
  report.epsilon = instance.epsilon;

  auto record = [&](MvmpViolation violation) {
    ++report.violation_count;
    if (report.violations.size() < options.max_reported_violations) report.violations.push_back(std::move(violation));
  };

  std::map<std::uint64_t, std::uint64_t> t_sizes;
  std::map<std::uint64_t, std::pair<bool, Rational>> images;  // in E', P(omega')
  for (const auto& [key, pre] : all.preimages) {
    const std::uint64_t image = key.first;
    ++t_sizes[image];
    auto it = images.find(image);
    if (it == images.end()) {
      const Environment env_prime = space.environment_at(image);
      InstanceContext ctx(env_prime, instance.target, options.path_cap);
      it = images.emplace(image, std::make_pair(instance.event_e_prime(ctx), space.probability(env_prime))).first;
      if (!it->second.first) {
        report.landing_holds = false;
        record({image, pre.path, pre.S, it->second.second, 0, "T(omega, F) lies outside E'"});
      }
    }
    ++report.hypothesis_checks;
    const Rational rhs = instance.epsilon * pre.mass;
    if (it->second.second < rhs) {
      report.hypothesis_holds = false;
      record({image, pre.path, pre.S, it->second.second, rhs, "P(omega') < epsilon * P(preimages)"});
    }
  }
  for (const auto& [image, size] : t_sizes) report.max_t = std::max(report.max_t, size);

  report.vacuous = report.p_e == 0;
  if (report.min_s) {
    report.bound_rhs = Rational(report.max_t) / (instance.epsilon * Rational(*report.min_s)) * report.p_e_prime;
    report.conclusion_holds = report.p_e <= report.bound_rhs;
  } else {
    report.bound_rhs = 0;
    report.conclusion_holds = true;
  }
  if (!report.vacuous) report.slack = report.bound_rhs / report.p_e;
  return report;
}

nlohmann::json MvmpReport::to_json() const {
  nlohmann::json j = {
      {"label", label},
      {"states", states.str()},
      {"PE", to_string(p_e)},
      {"PEprime", to_string(p_e_prime)},
      {"minS", min_s ? nlohmann::json(*min_s) : nlohmann::json(nullptr)},
      {"maxT", max_t},
      {"epsilon", to_string(epsilon)},
      {"boundRHS", to_string(bound_rhs)},
      {"hypothesisHolds", hypothesis_holds},
      {"landingHolds", landing_holds},
      {"conclusionHolds", conclusion_holds},
      {"holds", holds()},
      {"vacuous", vacuous},
      {"slack", slack ? nlohmann::json(to_string(*slack)) : nlohmann::json(nullptr)},
      {"hypothesisChecks", hypothesis_checks},
      {"violationCount", violation_count},
  };
  nlohmann::json list = nlohmann::json::array();
  for (const MvmpViolation& v : violations) {
    nlohmann::json S = nlohmann::json::array();
    for (const Site& y : v.S) S.push_back(y.to_string());
    list.push_back({{"omegaPrime", v.omega_prime},
                    {"path", v.path},
                    {"S", S},
                    {"lhs", to_string(v.lhs)},
                    {"rhs", to_string(v.rhs)},
                    {"reason", v.reason}});
  }
  j["violations"] = list;
  return j;
}

MvmpInstance build_surgery_instance(TransformKind kind, const FiniteSpace& space, const SurgeryParams& params) {
  const WeightAlphabet& alphabet = space.alphabet();
  const Rational p = alphabet.extreme_mass();
  if (p == 0) throw Error(ErrorKind::Instance, "an extreme weight has zero probability; p is undefined");
  const std::size_t d = space.box().dimension();

  MvmpInstance instance;
  instance.target = params.target.value_or(space.box().corner());
  if (!space.box().contains(instance.target)) throw Error(ErrorKind::Bounds, "target outside the box");
  instance.tmap = [](const Environment& env, const TransformPlan& plan) { return apply_transform(env, plan); };
  const std::int64_t length = instance.target.norm() + 1;
  const std::int64_t top = length * alphabet.max_value();
  std::vector<EventPredicate> count_clause;
  if (params.count_cap) count_clause.push_back(count_at_most(*params.count_cap));
  auto with_count = [&](std::vector<EventPredicate> parts) {
    parts.insert(parts.end(), count_clause.begin(), count_clause.end());
    return all_of(std::move(parts));
  };

  switch (kind) {
    case TransformKind::Perco: {
      if (params.s < 1) throw Error(ErrorKind::Instance, "|S| must be at least 1");
      const std::size_t k = params.min_turns.value_or(2 * params.s - 1);
      instance.label = "perco";
      instance.event_e = with_count({max_weight_equals(top), min_turns_at_least(k)});
      instance.event_e_prime = event_full();
      instance.smap = perco_family(params.s);
      instance.epsilon = pow(p, static_cast<unsigned>((2 * d - 1) * params.s));
      break;
    }
    case TransformKind::Lift: {
      const auto& values = alphabet.values();
      if (values.size() < 2) throw Error(ErrorKind::Instance, "lift needs at least two weights");
      const std::int64_t gap = values[values.size() - 1] - values[values.size() - 2];
      const auto m = static_cast<std::int64_t>(params.lift_sites.value_or(static_cast<std::size_t>(length)));
      instance.label = "lift";
      // Weight at least top - m * gap forces at most m sub-max sites on any maximal path.
      instance.event_e = with_count({max_weight_at_least(top - m * gap), max_weight_below(top)});
      instance.event_e_prime = with_count({max_weight_equals(top)});
      instance.smap = lift_family();
      instance.epsilon = pow(p, static_cast<unsigned>(m));
      break;
    }
    case TransformKind::RGood: {
      if (params.s < 1) throw Error(ErrorKind::Instance, "|S| must be at least 1");
      if (params.R < 1) throw Error(ErrorKind::Instance, "R must be at least 1");
      const std::size_t g = params.good_turns.value_or((params.s - 1) * (2 * params.R + 1) + 1);
      instance.label = "rgood";
      instance.event_e = with_count({good_turns_at_least(params.R, g)});
      instance.event_e_prime = event_full();
      instance.smap = rgood_family(params.R, params.s);
      std::size_t ball = 1;
      for (std::size_t a = 0; a < d; ++a) ball *= 2 * static_cast<std::size_t>(params.R) + 1;
      instance.epsilon = pow(p, static_cast<unsigned>(ball * params.s));
      break;
    }
  }
  if (params.epsilon) instance.epsilon = *params.epsilon;
  return instance;
}

}  // namespace dlpp
