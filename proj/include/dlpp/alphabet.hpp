#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dlpp/numeric.hpp"

namespace dlpp {

// Finite weight alphabet Theta stored as scaled integers: the real weight of
// an integer value v is v / scale. Values are sorted and distinct.
class WeightAlphabet {
 public:
  WeightAlphabet() = default;

  static WeightAlphabet create(std::vector<std::int64_t> values, std::vector<Rational> probabilities,
                               std::int64_t scale = 1);
  // Real-valued alphabet; the least common denominator becomes the scale.
  static WeightAlphabet from_rationals(const std::vector<Rational>& values, std::vector<Rational> probabilities);
  static WeightAlphabet bernoulli(const Rational& probability_of_one);
  static WeightAlphabet uniform(std::vector<std::int64_t> values);

  // Either JSON ({"values": ["0","1"], "probs": ["1/2","1/2"]}) or the
  // shorthand "0:1/2,1:1/2".
  static WeightAlphabet parse(std::string_view text);
  static WeightAlphabet from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const std::vector<std::int64_t>& values() const noexcept { return values_; }
  const std::vector<Rational>& probabilities() const noexcept { return probabilities_; }
  std::int64_t scale() const noexcept { return scale_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::int64_t min_value() const { return values_.front(); }
  std::int64_t max_value() const { return values_.back(); }
  bool is_degenerate() const noexcept { return values_.size() < 2; }
  // min value 0 and max value equal to scale, i.e. real weights in [0, 1].
  bool is_normalized() const noexcept;

  std::optional<std::size_t> index_of(std::int64_t value) const noexcept;
  bool contains(std::int64_t value) const noexcept { return index_of(value).has_value(); }
  const Rational& probability_of(std::int64_t value) const;

  // p = min{P(w = min Theta), P(w = max Theta)}.
  Rational extreme_mass() const;
  Rational real_value(std::int64_t value) const { return Rational(BigInt(value), BigInt(scale_)); }
  std::string label() const;

  bool operator==(const WeightAlphabet& other) const = default;

 private:
  std::vector<std::int64_t> values_;
  std::vector<Rational> probabilities_;
  std::int64_t scale_ = 1;
};

// normalized = original + shift (both in scaled integers); the real weights
// satisfy normalized_real = factor * original_real + shift / scale.
struct AffineRecord {
  std::int64_t shift = 0;
  Rational factor = 1;
  std::int64_t original_scale = 1;
  std::int64_t scale = 1;

  bool is_identity() const { return shift == 0 && factor == 1; }
  std::int64_t to_original(std::int64_t normalized) const { return normalized - shift; }
};

std::pair<WeightAlphabet, AffineRecord> normalize_alphabet(const WeightAlphabet& alphabet);

}  // namespace dlpp
