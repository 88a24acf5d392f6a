#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlpp/alphabet.hpp"
#include "dlpp/environment.hpp"
#include "dlpp/lattice.hpp"
#include "dlpp/numeric.hpp"
#include "dlpp/passage.hpp"
#include "dlpp/transforms.hpp"

namespace dlpp {

// Product space Theta^{box}: every environment of the box with its exact mass.
class FiniteSpace {
 public:
  FiniteSpace(Box box, WeightAlphabet alphabet);

  const Box& box() const noexcept { return box_; }
  const WeightAlphabet& alphabet() const noexcept { return alphabet_; }
  const BigInt& total_states() const noexcept { return total_; }

  Environment environment_at(std::uint64_t index) const;
  std::uint64_t index_of(const Environment& env) const;
  Rational probability(const Environment& env) const;

 private:
  Box box_;
  WeightAlphabet alphabet_;
  BigInt total_;
};

// Per-environment view with lazily computed passage data toward `target`.
class InstanceContext {
 public:
  InstanceContext(const Environment& env, Site target, std::uint64_t path_cap);

  const Environment& env() const noexcept { return env_; }
  const Site& target() const noexcept { return target_; }
  // Number of sites of a path from the origin to the target.
  std::int64_t path_length() const noexcept { return target_.norm() + 1; }

  const PassageField& field();
  std::int64_t max_weight();
  const BigInt& count();
  // Maximal paths to the target; throws ErrorKind::Budget above the cap.
  const std::vector<DirectedPath>& maximal_paths();
  std::size_t min_turns();

 private:
  const Environment& env_;
  Site target_;
  std::uint64_t path_cap_;
  std::optional<PassageField> field_;
  std::optional<std::vector<DirectedPath>> paths_;
  std::optional<std::size_t> min_turns_;
};

using EventPredicate = std::function<bool(InstanceContext&)>;

EventPredicate event_full();
EventPredicate max_weight_equals(std::int64_t value);
EventPredicate max_weight_below(std::int64_t value);
EventPredicate max_weight_at_least(std::int64_t value);
EventPredicate count_at_most(BigInt bound);
// Every maximal path has at least k turns.
EventPredicate min_turns_at_least(std::size_t k);
// Every maximal path has at least k R-good turns.
EventPredicate good_turns_at_least(int R, std::size_t k);
EventPredicate all_of(std::vector<EventPredicate> parts);

// The family S(omega) of (path, S) pairs and the map T.
using PlanFamily = std::function<std::vector<TransformPlan>(InstanceContext&)>;
using PlanMap = std::function<Environment(const Environment&, const TransformPlan&)>;

// Every maximal path with every separated subset of size s of its turns.
PlanFamily perco_family(std::size_t s);
// Every maximal path with its sub-max sites.
PlanFamily lift_family();
// Every maximal path with every (2R+1)-separated subset of size s of its R-good turns.
PlanFamily rgood_family(int R, std::size_t s);

struct MvmpInstance {
  std::string label;
  Site target;
  EventPredicate event_e;
  EventPredicate event_e_prime;
  PlanFamily smap;
  PlanMap tmap;
  Rational epsilon;
};

// E = E' = full space, S(omega) = {(first maximal path, {})}, T = identity.
MvmpInstance identity_instance(const FiniteSpace& space, Rational epsilon = 1);

struct MvmpViolation {
  std::uint64_t omega_prime = 0;  // state index
  std::string path;               // step string
  std::vector<Site> S;
  Rational lhs;                   // P(omega')
  Rational rhs;                   // epsilon * P(preimages)
  std::string reason;
};

struct MvmpReport {
  std::string label;
  BigInt states;
  Rational p_e;
  Rational p_e_prime;
  std::optional<std::uint64_t> min_s;  // unset when E is empty
  std::uint64_t max_t = 0;
  Rational epsilon;
  Rational bound_rhs;
  bool hypothesis_holds = true;
  bool landing_holds = true;  // T(omega, F) in E' for every valid input
  bool conclusion_holds = true;
  bool vacuous = false;       // P(E) = 0
  std::optional<Rational> slack;  // bound_rhs / P(E) when P(E) > 0
  std::uint64_t hypothesis_checks = 0;
  std::uint64_t violation_count = 0;
  std::vector<MvmpViolation> violations;  // first few

  bool holds() const noexcept { return hypothesis_holds && landing_holds && conclusion_holds; }
  bool holds_with_mass() const noexcept { return holds() && !vacuous; }
  nlohmann::json to_json() const;
};

struct MvmpOptions {
  std::uint64_t exhaustion_limit = std::uint64_t{1} << 24;
  unsigned threads = 1;
  std::uint64_t path_cap = std::uint64_t{1} << 16;
  std::size_t max_reported_violations = 16;
};

MvmpReport verify_mvmp(const FiniteSpace& space, const MvmpInstance& instance, const MvmpOptions& options = {});

// Toy-scale parameters for the proof instances. Cardinalities that scale
// with n in the proofs are explicit integers here.
struct SurgeryParams {
  std::optional<Site> target;           // default: box corner
  std::size_t s = 1;                    // |S| for perco and rgood
  int R = 2;                            // rgood radius
  std::optional<BigInt> count_cap;      // |Pi_max| <= cap clause
  std::optional<std::size_t> min_turns;   // perco: default 2s - 1
  std::optional<std::size_t> good_turns;  // rgood: default (s - 1)(2R + 1) + 1
  std::optional<std::size_t> lift_sites;  // lift: max sub-max sites m, default path length
  std::optional<Rational> epsilon;      // override (negative tests)
};

MvmpInstance build_surgery_instance(TransformKind kind, const FiniteSpace& space, const SurgeryParams& params);

}  // namespace dlpp
