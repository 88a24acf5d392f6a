#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlpp/environment.hpp"
#include "dlpp/lattice.hpp"

namespace dlpp {

// Directed path: origin plus a sequence of unit steps e_axis. Axes are
// 0-based internally; the textual form uses 1-based digits ("112" = e1 e1 e2).
class DirectedPath {
 public:
  DirectedPath() = default;
  DirectedPath(Site origin, std::vector<std::uint8_t> steps);

  static DirectedPath from_step_string(Site origin, std::string_view digits);
  static DirectedPath from_sites(std::span<const Site> sites);

  const Site& origin() const noexcept { return origin_; }
  const std::vector<std::uint8_t>& steps() const noexcept { return steps_; }
  std::size_t dimension() const noexcept { return origin_.dimension(); }
  // Number of sites (steps + 1).
  std::size_t length() const noexcept { return steps_.size() + 1; }

  Site endpoint() const;
  std::vector<Site> sites() const;
  bool within(const Box& box) const;
  // Linear box indices of the visited sites; throws if any leaves the box.
  std::vector<std::size_t> indices(const Box& box) const;

  std::int64_t weight(const Environment& env) const;
  std::string step_string() const;

  auto operator<=>(const DirectedPath&) const = default;
  bool operator==(const DirectedPath&) const = default;

 private:
  Site origin_;
  std::vector<std::uint8_t> steps_;
};

}  // namespace dlpp
