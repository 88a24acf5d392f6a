#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "dlpp/alphabet.hpp"
#include "dlpp/lattice.hpp"

namespace dlpp {

// Immutable weight field on a finite box. Every weight is a member of the
// alphabet (checked on construction).
class Environment {
 public:
  Environment(Box box, WeightAlphabet alphabet, std::uint64_t seed, std::vector<std::int64_t> weights);

  const Box& box() const noexcept { return box_; }
  const WeightAlphabet& alphabet() const noexcept { return alphabet_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const std::int64_t> weights() const noexcept { return weights_; }
  std::size_t dimension() const noexcept { return box_.dimension(); }

  std::int64_t at(std::size_t index) const { return weights_[index]; }
  std::int64_t weight(const Site& site) const { return weights_[box_.index_of(site)]; }

  // Copy with some weights replaced (alphabet membership re-checked).
  Environment with_weights(std::vector<std::int64_t> weights) const;

  bool operator==(const Environment& other) const {
    return box_ == other.box_ && alphabet_ == other.alphabet_ && weights_ == other.weights_;
  }

 private:
  Box box_;
  WeightAlphabet alphabet_;
  std::uint64_t seed_ = 0;
  std::vector<std::int64_t> weights_;
};

// Weight of one site as a pure function of (seed, coordinates, alphabet):
// hash -> uniform 64-bit word -> inverse CDF over the exact probabilities.
std::int64_t sample_site_weight(const WeightAlphabet& alphabet, std::uint64_t seed, const Site& site);

Environment generate_environment(const Box& box, const WeightAlphabet& alphabet, std::uint64_t seed);
Environment constant_environment(const Box& box, const WeightAlphabet& alphabet, std::int64_t value);

// Mixed-radix enumeration of all |Theta|^sites environments of a box; site 0
// (row-major) is the least significant digit.
BigInt environment_space_size(const Box& box, const WeightAlphabet& alphabet);
Environment environment_from_index(const Box& box, const WeightAlphabet& alphabet, std::uint64_t index);
std::uint64_t index_of_environment(const Environment& env);
// Exact product-measure probability of the whole configuration.
Rational environment_probability(const Environment& env);

// omega -> factor * omega + offset in real units; factor > 0.
Environment affine_image(const Environment& env, std::int64_t factor, std::int64_t offset);

// Serialization: JSON header plus optional raw dump (row-major, little-endian int64).
nlohmann::json environment_header(const Environment& env);
void write_weight_dump(const Environment& env, std::ostream& out);
std::vector<std::int64_t> read_weight_dump(std::istream& in, std::size_t count);
void save_environment(const Environment& env, const std::filesystem::path& header_path, bool dump_weights);
Environment load_environment(const std::filesystem::path& header_path);

}  // namespace dlpp
