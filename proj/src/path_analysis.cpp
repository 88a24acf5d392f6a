#include "dlpp/path_analysis.hpp"

#include "dlpp/error.hpp"

namespace dlpp {
namespace {

// Whether `z` lies on the path; uses that the path visits exactly one site per level.
bool on_path(const std::vector<Site>& sites, const Site& origin, const Site& z) {
  if (z.dimension() != origin.dimension()) return false;
  std::int64_t level = 0;
  for (std::size_t a = 0; a < z.dimension(); ++a) {
    if (z[a] < origin[a]) return false;
    level += z[a] - origin[a];
  }
  return level < static_cast<std::int64_t>(sites.size()) && sites[static_cast<std::size_t>(level)] == z;
}

void require_turn(const DirectedPath& path, std::size_t index) {
  if (!is_turn(path, index)) {
    throw Error(ErrorKind::Domain, "position " + std::to_string(index) + " is not a turn of the path");
  }
}

}  // namespace

bool is_turn(const DirectedPath& path, std::size_t index) {
  const auto& steps = path.steps();
  // Position i sits between steps i-2 and i-1 (0-based).
  return index >= 2 && index < path.length() && steps[index - 2] != steps[index - 1];
}

std::vector<std::size_t> turns_of(const DirectedPath& path) {
  std::vector<std::size_t> turns;
  for (std::size_t i = 2; i < path.length(); ++i) {
    if (is_turn(path, i)) turns.push_back(i);
  }
  return turns;
}

Site star_of(const DirectedPath& path, std::size_t index) {
  require_turn(path, index);
  const auto sites = path.sites();
  return sites[index - 2] + sites[index] - sites[index - 1];
}

std::vector<Site> shield_of(const DirectedPath& path, std::size_t index, const Box& box, std::size_t* clipped) {
  const Site star = star_of(path, index);
  const auto sites = path.sites();
  std::vector<Site> shield;
  for (std::size_t a = 0; a < star.dimension(); ++a) {
    for (int sign : {-1, +1}) {
      Site z = star;
      z[a] += sign;
      if (on_path(sites, path.origin(), z)) continue;
      if (!box.contains(z)) {
        if (clipped) ++*clipped;
        continue;
      }
      shield.push_back(std::move(z));
    }
  }
  return shield;
}

bool is_r_good(const DirectedPath& path, std::size_t index, const Environment& env, int R) {
  require_turn(path, index);
  if (R < 1) throw Error(ErrorKind::Domain, "R must be at least 1");
  const auto k0 = static_cast<std::int64_t>(index);
  const std::int64_t span = static_cast<std::int64_t>(path.length()) - 1;  // ||x - origin||
  if (!(R < k0 && k0 < span - R)) return false;

  const auto indices = path.indices(env.box());
  const std::int64_t lo = env.alphabet().min_value();
  const std::int64_t threshold = static_cast<std::int64_t>(R - 1) * (env.alphabet().max_value() - lo);
  std::int64_t before = 0;
  std::int64_t after = 0;
  for (std::int64_t k = k0 - R; k <= k0 - 1; ++k) before += env.at(indices[static_cast<std::size_t>(k - 1)]) - lo;
  for (std::int64_t k = k0 + 1; k <= k0 + R; ++k) after += env.at(indices[static_cast<std::size_t>(k - 1)]) - lo;
  return before < threshold && after < threshold;
}

std::vector<std::size_t> r_good_turns(const DirectedPath& path, const Environment& env, int R) {
  std::vector<std::size_t> good;
  for (std::size_t i : turns_of(path)) {
    if (is_r_good(path, i, env, R)) good.push_back(i);
  }
  return good;
}

TurnRecord analyze_turn(const DirectedPath& path, std::size_t index, const Environment& env, int R) {
  require_turn(path, index);
  TurnRecord record;
  record.index = index;
  record.site = path.sites()[index - 1];
  record.star = star_of(path, index);
  record.shield = shield_of(path, index, env.box(), &record.clipped);
  record.is_bifurcation = env.box().contains(record.star) && env.weight(record.site) == env.weight(record.star);
  record.is_r_good = is_r_good(path, index, env, R);
  return record;
}

BifurcationScan bifurcations_of(const DirectedPath& path, const Environment& env) {
  BifurcationScan scan;
  const auto sites = path.sites();
  for (std::size_t i : turns_of(path)) {
    const Site star = sites[i - 2] + sites[i] - sites[i - 1];
    if (!env.box().contains(star)) {
      ++scan.clipped;
      continue;
    }
    if (env.weight(sites[i - 1]) == env.weight(star)) scan.indices.push_back(i);
  }
  return scan;
}

SeparatedSelection select_separated_turns(std::span<const Site> positions, std::int64_t min_distance,
                                          std::size_t k) {
  if (min_distance < 2) throw Error(ErrorKind::Domain, "minimum separation must be at least 2");
  SeparatedSelection selection;
  for (const Site& candidate : positions) {
    if (selection.sites.size() >= k) break;
    bool far = true;
    for (const Site& kept : selection.sites) {
      if (l1_distance(candidate, kept) < min_distance) {
        far = false;
        break;
      }
    }
    if (far) selection.sites.push_back(candidate);
  }
  selection.shortfall = k != kAllTurns && selection.sites.size() < k;
  return selection;
}

BigInt bifurcation_lower_bound_count(const DirectedPath& path, const Environment& env) {
  const auto scan = bifurcations_of(path, env);
  const auto positions = sites_at(path, scan.indices);
  const auto selection = select_separated_turns(positions, 2);
  return pow2(static_cast<unsigned>(selection.sites.size()));
}

std::vector<Site> sites_at(const DirectedPath& path, std::span<const std::size_t> indices) {
  const auto sites = path.sites();
  std::vector<Site> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i < 1 || i > sites.size()) throw Error(ErrorKind::Bounds, "path position out of range");
    out.push_back(sites[i - 1]);
  }
  return out;
}

}  // namespace dlpp
