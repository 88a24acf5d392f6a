#include "dlpp/environment.hpp"

#include <array>
#include <fstream>

#include "dlpp/error.hpp"

namespace dlpp {
namespace {

using u128 = unsigned __int128;

// Cumulative thresholds floor(F_k * 2^64); value k is drawn when u < threshold_k.
std::vector<u128> cumulative_thresholds(const WeightAlphabet& alphabet) {
  std::vector<u128> thresholds;
  Rational cumulative = 0;
  const BigInt two64 = pow2(64);
  for (std::size_t k = 0; k < alphabet.size(); ++k) {
    cumulative += alphabet.probabilities()[k];
    BigInt t = boost::multiprecision::numerator(cumulative) * two64 / boost::multiprecision::denominator(cumulative);
    const auto hi = static_cast<std::uint64_t>(t >> 64);
    const auto lo = static_cast<std::uint64_t>(t & BigInt(~std::uint64_t{0}));
    thresholds.push_back((u128(hi) << 64) | lo);
  }
  return thresholds;
}

std::uint64_t site_word(std::uint64_t seed, const std::vector<int>& coords) {
  std::uint64_t h = splitmix64(seed ^ 0xD1B54A32D192ED03ULL);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    h = hash_combine(h, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(coords[i])) << 8) | i);
  }
  return splitmix64(h);
}

std::int64_t pick(const WeightAlphabet& alphabet, const std::vector<u128>& thresholds, std::uint64_t word) {
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (u128(word) < thresholds[k]) return alphabet.values()[k];
  }
  return alphabet.values().back();
}

}  // namespace

Environment::Environment(Box box, WeightAlphabet alphabet, std::uint64_t seed, std::vector<std::int64_t> weights)
    : box_(std::move(box)), alphabet_(std::move(alphabet)), seed_(seed), weights_(std::move(weights)) {
  if (weights_.size() != box_.size()) throw Error(ErrorKind::Bounds, "weight count does not match box size");
  for (std::int64_t w : weights_) {
    if (!alphabet_.contains(w)) throw Error(ErrorKind::Alphabet, "weight " + std::to_string(w) + " not in alphabet");
  }
}

Environment Environment::with_weights(std::vector<std::int64_t> weights) const {
  return Environment(box_, alphabet_, seed_, std::move(weights));
}

std::int64_t sample_site_weight(const WeightAlphabet& alphabet, std::uint64_t seed, const Site& site) {
  return pick(alphabet, cumulative_thresholds(alphabet), site_word(seed, site.coords()));
}

Environment generate_environment(const Box& box, const WeightAlphabet& alphabet, std::uint64_t seed) {
  if (box.dimension() < 2) throw Error(ErrorKind::Dimension, "dimension must be at least 2");
  const auto thresholds = cumulative_thresholds(alphabet);
  std::vector<std::int64_t> weights(box.size());
  std::vector<int> coords(box.dimension(), 0);
  // Row-major walk; the weight never depends on the walk order.
  for (std::size_t index = 0; index < box.size(); ++index) {
    weights[index] = pick(alphabet, thresholds, site_word(seed, coords));
    for (std::size_t axis = box.dimension(); axis-- > 0;) {
      if (++coords[axis] < box.extent(axis)) break;
      coords[axis] = 0;
    }
  }
  return Environment(box, alphabet, seed, std::move(weights));
}

Environment constant_environment(const Box& box, const WeightAlphabet& alphabet, std::int64_t value) {
  return Environment(box, alphabet, 0, std::vector<std::int64_t>(box.size(), value));
}

Environment affine_image(const Environment& env, std::int64_t factor, std::int64_t offset) {
  if (factor <= 0) throw Error(ErrorKind::Domain, "affine factor must be positive");
  const auto& alphabet = env.alphabet();
  const std::int64_t shift = offset * alphabet.scale();
  std::vector<std::int64_t> values;
  for (std::int64_t v : alphabet.values()) values.push_back(factor * v + shift);
  auto image = WeightAlphabet::create(std::move(values), alphabet.probabilities(), alphabet.scale());
  std::vector<std::int64_t> weights;
  weights.reserve(env.weights().size());
  for (std::int64_t w : env.weights()) weights.push_back(factor * w + shift);
  return Environment(env.box(), std::move(image), env.seed(), std::move(weights));
}

BigInt environment_space_size(const Box& box, const WeightAlphabet& alphabet) {
  BigInt total = 1;
  for (std::size_t i = 0; i < box.size(); ++i) total *= alphabet.size();
  return total;
}

Environment environment_from_index(const Box& box, const WeightAlphabet& alphabet, std::uint64_t index) {
  if (BigInt(index) >= environment_space_size(box, alphabet)) throw Error(ErrorKind::Bounds, "environment index out of range");
  const std::uint64_t radix = alphabet.size();
  std::vector<std::int64_t> weights(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    weights[i] = alphabet.values()[index % radix];
    index /= radix;
  }
  return Environment(box, alphabet, 0, std::move(weights));
}

std::uint64_t index_of_environment(const Environment& env) {
  const std::uint64_t radix = env.alphabet().size();
  std::uint64_t index = 0;
  for (std::size_t i = env.box().size(); i-- > 0;) {
    index = index * radix + *env.alphabet().index_of(env.at(i));
  }
  return index;
}

Rational environment_probability(const Environment& env) {
  Rational p = 1;
  for (std::int64_t w : env.weights()) p *= env.alphabet().probability_of(w);
  return p;
}

nlohmann::json environment_header(const Environment& env) {
  nlohmann::json alphabet = env.alphabet().to_json();
  return {
      {"format", "dlpp-environment/1"},
      {"box", env.box().extents()},
      {"alphabet", {{"values", alphabet["values"]}, {"probs", alphabet["probs"]}}},
      {"scale", env.alphabet().scale()},
      {"seed", env.seed()},
  };
}

void write_weight_dump(const Environment& env, std::ostream& out) {
  for (std::int64_t w : env.weights()) {
    auto u = static_cast<std::uint64_t>(w);
    std::array<char, 8> bytes{};
    for (std::size_t b = 0; b < 8; ++b) bytes[b] = static_cast<char>((u >> (8 * b)) & 0xFFU);
    out.write(bytes.data(), bytes.size());
  }
}

std::vector<std::int64_t> read_weight_dump(std::istream& in, std::size_t count) {
  std::vector<std::int64_t> weights(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::array<unsigned char, 8> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
      throw Error(ErrorKind::Io, "weight dump truncated at entry " + std::to_string(i));
    }
    std::uint64_t u = 0;
    for (std::size_t b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    weights[i] = static_cast<std::int64_t>(u);
  }
  return weights;
}

void save_environment(const Environment& env, const std::filesystem::path& header_path, bool dump_weights) {
  nlohmann::json header = environment_header(env);
  if (dump_weights) {
    std::filesystem::path dump = header_path;
    dump.replace_extension(".bin");
    std::ofstream out(dump, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + dump.string());
    write_weight_dump(env, out);
    header["weightsFile"] = dump.filename().string();
  }
  std::ofstream out(header_path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + header_path.string());
  out << header.dump(2) << "\n";
}

Environment load_environment(const std::filesystem::path& header_path) {
  std::ifstream in(header_path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + header_path.string());
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, header_path.string() + ": " + e.what());
  }
  Box box(header.at("box").get<std::vector<int>>());
  auto alphabet = WeightAlphabet::from_json(header.at("alphabet"));
  if (header.contains("scale") && header["scale"].get<std::int64_t>() != alphabet.scale()) {
    throw Error(ErrorKind::Alphabet, "header scale disagrees with alphabet values");
  }
  const auto seed = header.value("seed", std::uint64_t{0});
  if (header.contains("weightsFile")) {
    auto dump = header_path.parent_path() / header["weightsFile"].get<std::string>();
    std::ifstream raw(dump, std::ios::binary);
    if (!raw) throw Error(ErrorKind::Io, "cannot read " + dump.string());
    return Environment(box, alphabet, seed, read_weight_dump(raw, box.size()));
  }
  return generate_environment(box, alphabet, seed);
}

}  // namespace dlpp
