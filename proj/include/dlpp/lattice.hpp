#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "dlpp/numeric.hpp"

namespace dlpp {

// A point of Z^d. Sites handed to the DP are non-negative, but differences
// (and stars of shield neighbours) may leave the positive orthant.
class Site {
 public:
  Site() = default;
  explicit Site(std::vector<int> coords) : coords_(std::move(coords)) {}
  Site(std::initializer_list<int> coords) : coords_(coords) {}

  static Site zero(std::size_t dimension) { return Site(std::vector<int>(dimension, 0)); }
  static Site unit(std::size_t dimension, std::size_t axis);

  std::size_t dimension() const noexcept { return coords_.size(); }
  const std::vector<int>& coords() const noexcept { return coords_; }
  int operator[](std::size_t axis) const { return coords_[axis]; }
  int& operator[](std::size_t axis) { return coords_[axis]; }

  // l1 norm, sum of |x_i|.
  std::int64_t norm() const noexcept;
  bool non_negative() const noexcept;

  Site operator+(const Site& other) const;
  Site operator-(const Site& other) const;

  // Parses "2,3" or "(2,3)".
  static Site parse(std::string_view text);
  std::string to_string() const;

  auto operator<=>(const Site&) const = default;
  bool operator==(const Site&) const = default;

 private:
  std::vector<int> coords_;
};

std::int64_t l1_distance(const Site& a, const Site& b);

// Axis-aligned box {0..extent_i-1} of sites, stored row-major (last axis fastest).
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<int> extents);

  // "6x6", "4x4x4".
  static Box parse(std::string_view text);
  // Smallest box containing the rectangle [0, corner].
  static Box spanning(const Site& corner);

  std::size_t dimension() const noexcept { return extents_.size(); }
  const std::vector<int>& extents() const noexcept { return extents_; }
  int extent(std::size_t axis) const { return extents_[axis]; }
  std::size_t size() const noexcept { return size_; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }
  Site corner() const;

  bool contains(const Site& site) const noexcept;
  std::size_t index_of(const Site& site) const;
  Site site_at(std::size_t index) const;

  std::string to_string() const;

  bool operator==(const Box& other) const { return extents_ == other.extents_; }

 private:
  std::vector<int> extents_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

// C_beta = { x : 0 <= x_i <= (1 - beta) ||x|| for every i }.
struct ConeSpec {
  Rational beta;

  explicit ConeSpec(Rational b);
};

bool cone_contains(const ConeSpec& cone, const Site& x);

BigInt multinomial(const Site& x);

}  // namespace dlpp
