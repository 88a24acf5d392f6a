#include "dlpp/passage.hpp"

#include <algorithm>

#include "dlpp/error.hpp"

namespace dlpp {
namespace {

// Sites of the sub-box above `origin`, grouped by l1 level, each level in
// row-major (lexicographic) order.
struct LevelOrder {
  std::vector<std::vector<std::size_t>> levels;
};

LevelOrder level_order(const Box& box, const Site& origin, int max_level) {
  LevelOrder order;
  order.levels.resize(static_cast<std::size_t>(max_level) + 1);
  const std::size_t d = box.dimension();
  std::vector<int> coords = origin.coords();
  for (;;) {
    int level = 0;
    for (std::size_t a = 0; a < d; ++a) level += coords[a] - origin[a];
    if (level <= max_level) order.levels[static_cast<std::size_t>(level)].push_back(box.index_of(Site(coords)));
    std::size_t axis = d;
    while (axis-- > 0) {
      if (++coords[axis] < box.extent(axis)) break;
      coords[axis] = origin[axis];
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return order;
}

int full_level(const Box& box, const Site& origin) {
  int level = 0;
  for (std::size_t a = 0; a < box.dimension(); ++a) level += box.extent(a) - 1 - origin[a];
  return level;
}

// Coordinate of `index` along `axis`.
int coord_of(const Box& box, std::size_t index, std::size_t axis) {
  return static_cast<int>((index / box.stride(axis)) % static_cast<std::size_t>(box.extent(axis)));
}

void require_origin(const Environment& env, const Site& origin) {
  if (origin.dimension() != env.dimension()) throw Error(ErrorKind::Dimension, "origin dimension mismatch");
  if (!env.box().contains(origin)) {
    throw Error(ErrorKind::Bounds, "origin " + origin.to_string() + " outside box " + env.box().to_string());
  }
}

// Lexicographic (max weight, min turns) per state (site, incoming axis).
struct TurnTable {
  std::size_t d = 0;
  std::size_t origin_index = 0;
  std::vector<std::int64_t> weight;  // [site * d + axis]
  std::vector<std::int64_t> turns;

  // Min turns over maximal paths ending at site (weight must be W_max(site)).
  std::int64_t best_turns(std::size_t site, std::int64_t max_weight) const {
    if (site == origin_index) return 0;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t a = 0; a < d; ++a) {
      if (weight[site * d + a] == max_weight) best = std::min(best, turns[site * d + a]);
    }
    return best;
  }
};

TurnTable turn_table(const Environment& env, const Site& origin, int max_level) {
  const Box& box = env.box();
  const std::size_t d = box.dimension();
  TurnTable table;
  table.d = d;
  table.origin_index = box.index_of(origin);
  table.weight.assign(box.size() * d, kUnreachable);
  table.turns.assign(box.size() * d, 0);
  const LevelOrder order = level_order(box, origin, max_level);
  const std::int64_t origin_weight = env.at(table.origin_index);

  for (std::size_t level = 1; level < order.levels.size(); ++level) {
    for (std::size_t z : order.levels[level]) {
      for (std::size_t a = 0; a < d; ++a) {
        if (coord_of(box, z, a) <= origin[a]) continue;
        const std::size_t p = z - box.stride(a);
        std::int64_t best_w = kUnreachable;
        std::int64_t best_t = 0;
        if (p == table.origin_index) {
          best_w = origin_weight;
        } else {
          for (std::size_t b = 0; b < d; ++b) {
            const std::int64_t w = table.weight[p * d + b];
            if (w == kUnreachable) continue;
            const std::int64_t t = table.turns[p * d + b] + (b != a ? 1 : 0);
            if (w > best_w || (w == best_w && t < best_t)) {
              best_w = w;
              best_t = t;
            }
          }
        }
        if (best_w == kUnreachable) continue;
        table.weight[z * d + a] = best_w + env.at(z);
        table.turns[z * d + a] = best_t;
      }
    }
  }
  return table;
}

}  // namespace

std::size_t PassageField::checked_index(const Site& x) const {
  if (x.dimension() != box_.dimension()) throw Error(ErrorKind::Dimension, "site dimension mismatch");
  if (!box_.contains(x)) throw Error(ErrorKind::Bounds, "site " + x.to_string() + " outside box " + box_.to_string());
  const std::size_t index = box_.index_of(x);
  if (!reachable(index)) {
    throw Error(ErrorKind::Reachability, "site " + x.to_string() + " not reachable from " + origin_.to_string());
  }
  return index;
}

std::int64_t PassageField::max_weight(const Site& x) const { return max_weight_[checked_index(x)]; }

const BigInt& PassageField::path_count(const Site& x) const { return path_count_[checked_index(x)]; }

PassageField compute_passage_field(const Environment& env, const Site& origin, std::optional<int> max_level) {
  require_origin(env, origin);
  const Box& box = env.box();
  const std::size_t d = box.dimension();

  PassageField field;
  field.box_ = box;
  field.origin_ = origin;
  field.max_level_ = std::min(max_level.value_or(full_level(box, origin)), full_level(box, origin));
  if (field.max_level_ < 0) throw Error(ErrorKind::Bounds, "negative level cap");
  field.max_weight_.assign(box.size(), kUnreachable);
  field.path_count_.assign(box.size(), BigInt(0));

  const LevelOrder order = level_order(box, origin, field.max_level_);
  const std::size_t o = box.index_of(origin);
  field.max_weight_[o] = env.at(o);
  field.path_count_[o] = 1;

  // Each level reads only the previous one.
  for (std::size_t level = 1; level < order.levels.size(); ++level) {
    for (std::size_t z : order.levels[level]) {
      std::int64_t best = kUnreachable;
      for (std::size_t a = 0; a < d; ++a) {
        if (coord_of(box, z, a) > origin[a]) best = std::max(best, field.max_weight_[z - box.stride(a)]);
      }
      BigInt count = 0;
      for (std::size_t a = 0; a < d; ++a) {
        if (coord_of(box, z, a) > origin[a] && field.max_weight_[z - box.stride(a)] == best) {
          count += field.path_count_[z - box.stride(a)];
        }
      }
      field.max_weight_[z] = best + env.at(z);
      field.path_count_[z] = std::move(count);
    }
  }
  return field;
}

LengthSummary length_n_summary(const Environment& env, int n) {
  if (n < 1) throw Error(ErrorKind::Domain, "path length must be at least 1");
  for (int extent : env.box().extents()) {
    if (extent < n) {
      throw Error(ErrorKind::Bounds, "box " + env.box().to_string() + " cannot hold paths of length " +
                                         std::to_string(n));
    }
  }
  return length_n_summary(compute_passage_field(env, Site::zero(env.dimension()), n - 1), n);
}

LengthSummary length_n_summary(const PassageField& field, int n) {
  if (n < 1) throw Error(ErrorKind::Domain, "path length must be at least 1");
  if (field.origin() != Site::zero(field.box().dimension())) {
    throw Error(ErrorKind::Domain, "length summaries start from the origin 0");
  }
  if (field.max_level() < n - 1) throw Error(ErrorKind::Bounds, "field does not reach layer n - 1");
  for (int extent : field.box().extents()) {
    if (extent < n) throw Error(ErrorKind::Bounds, "box cannot hold paths of length " + std::to_string(n));
  }
  const auto order = level_order(field.box(), field.origin(), n - 1);
  const auto& layer = order.levels.back();
  LengthSummary summary;
  summary.max_weight = kUnreachable;
  for (std::size_t z : layer) summary.max_weight = std::max(summary.max_weight, field.max_weight_at(z));
  for (std::size_t z : layer) {
    if (field.max_weight_at(z) == summary.max_weight) {
      summary.count += field.path_count_at(z);
      summary.endpoints.push_back(field.box().site_at(z));
    }
  }
  return summary;
}

namespace {

// Sites lying on at least one maximal path from the origin to `target`.
std::vector<char> maximal_support(const PassageField& field, const Environment& env, std::size_t target) {
  const Box& box = field.box();
  std::vector<char> on_max(box.size(), 0);
  std::vector<std::size_t> stack{target};
  on_max[target] = 1;
  while (!stack.empty()) {
    const std::size_t z = stack.back();
    stack.pop_back();
    for (std::size_t a = 0; a < box.dimension(); ++a) {
      if (coord_of(box, z, a) <= field.origin()[a]) continue;
      const std::size_t p = z - box.stride(a);
      if (on_max[p] || !field.reachable(p)) continue;
      if (field.max_weight_at(p) + env.at(z) == field.max_weight_at(z)) {
        on_max[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return on_max;
}

bool maximal_step(const PassageField& field, const Environment& env, const std::vector<char>& on_max,
                  const Site& target, std::size_t z, std::size_t axis) {
  const Box& box = field.box();
  if (coord_of(box, z, axis) >= target[axis]) return false;
  const std::size_t q = z + box.stride(axis);
  return on_max[q] && field.max_weight_at(z) + env.at(q) == field.max_weight_at(q);
}

void check_field_matches(const PassageField& field, const Environment& env) {
  if (!(field.box() == env.box())) throw Error(ErrorKind::Domain, "field and environment boxes differ");
}

}  // namespace

MaximalPaths enumerate_maximal_paths(const PassageField& field, const Environment& env, const Site& x,
                                     std::uint64_t cap) {
  check_field_matches(field, env);
  const std::size_t target = field.checked_index(x);
  MaximalPaths result;
  if (field.path_count_at(target) > cap) {
    result.overflow = field.path_count_at(target);
    return result;
  }
  const Box& box = field.box();
  const std::vector<char> on_max = maximal_support(field, env, target);
  const std::int64_t expected = field.max_weight_at(target);

  std::vector<std::uint8_t> steps;
  auto walk = [&](auto&& self, std::size_t z) -> void {
    if (z == target) {
      DirectedPath path(field.origin(), steps);
      if (path.weight(env) != expected) throw Error(ErrorKind::Consistency, "enumerated path is not maximal");
      result.paths.push_back(std::move(path));
      return;
    }
    for (std::size_t a = 0; a < box.dimension(); ++a) {
      if (!maximal_step(field, env, on_max, x, z, a)) continue;
      steps.push_back(static_cast<std::uint8_t>(a));
      self(self, z + box.stride(a));
      steps.pop_back();
    }
  };
  walk(walk, box.index_of(field.origin()));
  if (BigInt(result.paths.size()) != field.path_count_at(target)) {
    throw Error(ErrorKind::Consistency, "enumeration size disagrees with the DP count");
  }
  return result;
}

DirectedPath first_maximal_path(const PassageField& field, const Environment& env, const Site& x) {
  check_field_matches(field, env);
  const std::size_t target = field.checked_index(x);
  const Box& box = field.box();
  const std::vector<char> on_max = maximal_support(field, env, target);
  std::vector<std::uint8_t> steps;
  std::size_t z = box.index_of(field.origin());
  while (z != target) {
    std::size_t a = 0;
    while (a < box.dimension() && !maximal_step(field, env, on_max, x, z, a)) ++a;
    if (a == box.dimension()) throw Error(ErrorKind::Consistency, "maximal support is disconnected");
    steps.push_back(static_cast<std::uint8_t>(a));
    z += box.stride(a);
  }
  return DirectedPath(field.origin(), std::move(steps));
}

std::size_t min_turns_over_maximal(const Environment& env, const Site& x) {
  return min_turns_over_maximal(env, Site::zero(env.dimension()), x);
}

std::size_t min_turns_over_maximal(const Environment& env, const Site& origin, const Site& x) {
  require_origin(env, origin);
  if (!env.box().contains(x)) throw Error(ErrorKind::Bounds, "site " + x.to_string() + " outside box");
  const Site delta = x - origin;
  if (!delta.non_negative()) {
    throw Error(ErrorKind::Reachability, "site " + x.to_string() + " not reachable from " + origin.to_string());
  }
  const int level = static_cast<int>(delta.norm());
  const TurnTable table = turn_table(env, origin, level);
  const std::size_t target = env.box().index_of(x);
  std::int64_t best_w = target == table.origin_index ? env.at(target) : kUnreachable;
  for (std::size_t a = 0; a < table.d; ++a) best_w = std::max(best_w, table.weight[target * table.d + a]);
  return static_cast<std::size_t>(table.best_turns(target, best_w));
}

std::size_t min_turns_over_maximal_length(const Environment& env, int n) {
  const LengthSummary summary = length_n_summary(env, n);
  const Site origin = Site::zero(env.dimension());
  const TurnTable table = turn_table(env, origin, n - 1);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const Site& end : summary.endpoints) {
    best = std::min(best, table.best_turns(env.box().index_of(end), summary.max_weight));
  }
  return static_cast<std::size_t>(best);
}

}  // namespace dlpp
