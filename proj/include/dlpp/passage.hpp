#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dlpp/environment.hpp"
#include "dlpp/numeric.hpp"
#include "dlpp/path.hpp"

namespace dlpp {

inline constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::min();

// Last-passage values W_max(x) and exact maximal-path counts from one origin.
// Sites not dominating the origin, or beyond max_level, are unreachable.
class PassageField {
 public:
  const Box& box() const noexcept { return box_; }
  const Site& origin() const noexcept { return origin_; }
  int max_level() const noexcept { return max_level_; }

  bool reachable(std::size_t index) const { return max_weight_[index] != kUnreachable; }
  bool reachable(const Site& x) const { return box_.contains(x) && reachable(box_.index_of(x)); }

  // Throws on sites outside the box (bounds) or not reachable (reachability).
  std::int64_t max_weight(const Site& x) const;
  const BigInt& path_count(const Site& x) const;

  std::int64_t max_weight_at(std::size_t index) const { return max_weight_[index]; }
  const BigInt& path_count_at(std::size_t index) const { return path_count_[index]; }
  std::span<const BigInt> path_counts() const noexcept { return path_count_; }
  std::span<const std::int64_t> max_weights() const noexcept { return max_weight_; }

  std::size_t checked_index(const Site& x) const;

 private:
  friend PassageField compute_passage_field(const Environment&, const Site&, std::optional<int>);

  Box box_;
  Site origin_;
  int max_level_ = 0;
  std::vector<std::int64_t> max_weight_;
  std::vector<BigInt> path_count_;
};

// Level-by-level (anti-diagonal) DP. max_level caps ||x - origin||.
PassageField compute_passage_field(const Environment& env, const Site& origin,
                                   std::optional<int> max_level = std::nullopt);

struct LengthSummary {
  std::int64_t max_weight = 0;
  BigInt count;
  std::vector<Site> endpoints;  // argmax endpoints on the layer, lexicographic
};

// Paths of length n (n sites) from 0; endpoints lie on the layer ||x|| = n - 1.
LengthSummary length_n_summary(const Environment& env, int n);
LengthSummary length_n_summary(const PassageField& field, int n);

struct MaximalPaths {
  std::vector<DirectedPath> paths;  // lexicographic step order
  std::optional<BigInt> overflow;   // set (to the exact count) when count > cap

  bool overflowed() const noexcept { return overflow.has_value(); }
};

MaximalPaths enumerate_maximal_paths(const PassageField& field, const Environment& env, const Site& x,
                                     std::uint64_t cap);

// Lexicographically first maximal path to x (first entry of the enumeration).
DirectedPath first_maximal_path(const PassageField& field, const Environment& env, const Site& x);

// min |turn_pi| over maximal paths pi from the origin (default 0) to x.
std::size_t min_turns_over_maximal(const Environment& env, const Site& x);
std::size_t min_turns_over_maximal(const Environment& env, const Site& origin, const Site& x);
// Same over maximal paths of length n from 0 (free endpoint on the layer).
std::size_t min_turns_over_maximal_length(const Environment& env, int n);

}  // namespace dlpp
