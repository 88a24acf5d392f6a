#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dlpp/environment.hpp"
#include "dlpp/numeric.hpp"
#include "dlpp/path.hpp"

namespace dlpp {

// Positions along a path are 1-based, matching pi_1 .. pi_k.
struct TurnRecord {
  std::size_t index = 0;
  Site site;
  Site star;                 // pi_{i-1} + pi_{i+1} - pi_i
  std::vector<Site> shield;  // neighbours of star off the path, inside the box
  std::size_t clipped = 0;   // shield neighbours dropped for leaving the box
  bool is_bifurcation = false;
  bool is_r_good = false;
};

// Interior positions where the step direction changes.
std::vector<std::size_t> turns_of(const DirectedPath& path);
bool is_turn(const DirectedPath& path, std::size_t index);

Site star_of(const DirectedPath& path, std::size_t index);
// Neighbours of the star not on the path. Neighbours outside `box` are
// dropped and counted in `clipped`.
std::vector<Site> shield_of(const DirectedPath& path, std::size_t index, const Box& box,
                            std::size_t* clipped = nullptr);

// R < k0 < ||x - origin|| - R and both R-site windows around the turn carry
// normalized weight < R - 1, i.e. sum(w - min) < (R - 1) * (max - min).
bool is_r_good(const DirectedPath& path, std::size_t index, const Environment& env, int R);
std::vector<std::size_t> r_good_turns(const DirectedPath& path, const Environment& env, int R);

TurnRecord analyze_turn(const DirectedPath& path, std::size_t index, const Environment& env, int R);

struct BifurcationScan {
  std::vector<std::size_t> indices;
  std::size_t clipped = 0;  // turns whose star left the box
};

BifurcationScan bifurcations_of(const DirectedPath& path, const Environment& env);

inline constexpr std::size_t kAllTurns = std::numeric_limits<std::size_t>::max();

struct SeparatedSelection {
  std::vector<Site> sites;
  bool shortfall = false;  // fewer than the requested k were achievable
};

// Greedy scan in the given (path) order keeping a site iff it is at l1
// distance >= min_distance from every kept site; stops after k.
SeparatedSelection select_separated_turns(std::span<const Site> positions, std::int64_t min_distance,
                                          std::size_t k = kAllTurns);

// 2^(number of 2-separated bifurcations); a lower bound on the number of
// maximal paths when `path` is maximal.
BigInt bifurcation_lower_bound_count(const DirectedPath& path, const Environment& env);

// Sites of the path at the given 1-based positions.
std::vector<Site> sites_at(const DirectedPath& path, std::span<const std::size_t> indices);

}  // namespace dlpp
