#include "dlpp/alphabet.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dlpp/error.hpp"

namespace dlpp {

WeightAlphabet WeightAlphabet::create(std::vector<std::int64_t> values, std::vector<Rational> probabilities,
                                      std::int64_t scale) {
  if (values.empty()) throw Error(ErrorKind::Alphabet, "alphabet needs at least one value");
  if (values.size() != probabilities.size()) {
    throw Error(ErrorKind::Alphabet, "values and probabilities differ in length");
  }
  if (scale < 1) throw Error(ErrorKind::Alphabet, "scale must be a positive integer");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  WeightAlphabet alphabet;
  alphabet.scale_ = scale;
  Rational total = 0;
  for (std::size_t k : order) {
    if (!alphabet.values_.empty() && alphabet.values_.back() == values[k]) {
      throw Error(ErrorKind::Alphabet, "duplicate alphabet value " + std::to_string(values[k]));
    }
    if (probabilities[k] < 0) throw Error(ErrorKind::Alphabet, "negative probability");
    total += probabilities[k];
    alphabet.values_.push_back(values[k]);
    alphabet.probabilities_.push_back(probabilities[k]);
  }
  if (total != 1) throw Error(ErrorKind::Alphabet, "probabilities sum to " + to_string(total) + ", not 1");
  return alphabet;
}

WeightAlphabet WeightAlphabet::from_rationals(const std::vector<Rational>& values, std::vector<Rational> probabilities) {
  BigInt scale = 1;
  for (const Rational& v : values) {
    BigInt den = boost::multiprecision::denominator(v);
    scale = scale / boost::multiprecision::gcd(scale, den) * den;
  }
  if (scale > BigInt(std::int64_t{1} << 40)) throw Error(ErrorKind::Alphabet, "common denominator too large");
  std::vector<std::int64_t> scaled;
  for (const Rational& v : values) {
    Rational s = v * Rational(scale);
    scaled.push_back(boost::multiprecision::numerator(s).convert_to<std::int64_t>());
  }
  return create(std::move(scaled), std::move(probabilities), scale.convert_to<std::int64_t>());
}

WeightAlphabet WeightAlphabet::bernoulli(const Rational& probability_of_one) {
  return create({0, 1}, {Rational(1) - probability_of_one, probability_of_one});
}

WeightAlphabet WeightAlphabet::uniform(std::vector<std::int64_t> values) {
  const auto n = static_cast<std::int64_t>(values.size());
  std::vector<Rational> probs(values.size(), n > 0 ? make_rational(1, n) : Rational(0));
  return create(std::move(values), std::move(probs));
}

WeightAlphabet WeightAlphabet::parse(std::string_view text) {
  auto first = text.find_first_not_of(" \t\n");
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      return from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Alphabet, std::string("bad alphabet JSON: ") + e.what());
    }
  }
  std::vector<Rational> values;
  std::vector<Rational> probs;
  std::stringstream in{std::string(text)};
  std::string item;
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Alphabet, "expected value:probability, got '" + item + "'");
    values.push_back(parse_rational(item.substr(0, colon)));
    probs.push_back(parse_rational(item.substr(colon + 1)));
  }
  return from_rationals(values, std::move(probs));
}

WeightAlphabet WeightAlphabet::from_json(const nlohmann::json& j) {
  if (!j.contains("values") || !j.contains("probs")) {
    throw Error(ErrorKind::Alphabet, "alphabet JSON needs 'values' and 'probs'");
  }
  auto read = [](const nlohmann::json& item) {
    if (item.is_string()) return parse_rational(item.get<std::string>());
    if (item.is_number_integer()) return Rational(item.get<std::int64_t>());
    throw Error(ErrorKind::Alphabet, "alphabet entries must be strings like \"1/2\" or integers");
  };
  std::vector<Rational> values;
  std::vector<Rational> probs;
  for (const auto& v : j.at("values")) values.push_back(read(v));
  for (const auto& p : j.at("probs")) probs.push_back(read(p));
  return from_rationals(values, std::move(probs));
}

nlohmann::json WeightAlphabet::to_json() const {
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json probs = nlohmann::json::array();
  for (std::size_t k = 0; k < values_.size(); ++k) {
    values.push_back(to_string(real_value(values_[k])));
    probs.push_back(to_string(probabilities_[k]));
  }
  return {{"values", values}, {"probs", probs}, {"scale", scale_}};
}

bool WeightAlphabet::is_normalized() const noexcept {
  return !values_.empty() && values_.front() == 0 && values_.back() == scale_;
}

std::optional<std::size_t> WeightAlphabet::index_of(std::int64_t value) const noexcept {
  auto it = std::lower_bound(values_.begin(), values_.end(), value);
  if (it == values_.end() || *it != value) return std::nullopt;
  return static_cast<std::size_t>(it - values_.begin());
}

const Rational& WeightAlphabet::probability_of(std::int64_t value) const {
  auto k = index_of(value);
  if (!k) throw Error(ErrorKind::Alphabet, "value " + std::to_string(value) + " not in alphabet");
  return probabilities_[*k];
}

Rational WeightAlphabet::extreme_mass() const {
  return std::min(probabilities_.front(), probabilities_.back());
}

std::string WeightAlphabet::label() const {
  std::string out;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (k) out += ",";
    Rational v = real_value(values_[k]);
    out += boost::multiprecision::denominator(v) == 1 ? boost::multiprecision::numerator(v).str() : to_string(v);
    out += ":" + to_string(probabilities_[k]);
  }
  return out;
}

std::pair<WeightAlphabet, AffineRecord> normalize_alphabet(const WeightAlphabet& alphabet) {
  AffineRecord record;
  record.original_scale = alphabet.scale();
  const std::int64_t lo = alphabet.min_value();
  const std::int64_t hi = alphabet.max_value();
  record.shift = -lo;
  // Degenerate alphabets keep their scale; there is no max to pin to 1.
  record.scale = hi > lo ? hi - lo : alphabet.scale();
  record.factor = make_rational(alphabet.scale(), record.scale);

  std::vector<std::int64_t> values;
  for (std::int64_t v : alphabet.values()) values.push_back(v + record.shift);
  return {WeightAlphabet::create(std::move(values), alphabet.probabilities(), record.scale), record};
}

}  // namespace dlpp
