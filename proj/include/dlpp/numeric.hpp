#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace dlpp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "7", "-3/4", "0.125" (decimals are converted exactly).
Rational parse_rational(std::string_view text);

// Always "num/den", denominators positive, e.g. "1/1", "-3/4".
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

BigInt parse_bigint(std::string_view text);

Rational make_rational(std::int64_t num, std::int64_t den = 1);

// log2 of a positive integer, accurate to double precision at any size.
// Returns -infinity for zero.
double log2(const BigInt& value);

BigInt pow2(unsigned exponent);
Rational pow(const Rational& base, unsigned exponent);

// Counter-based mixing (splitmix64 finalizer).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
  return splitmix64(h ^ (v + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2)));
}

// Seed for (base, a, b), e.g. (campaign seed, point index, trial index).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept {
  return hash_combine(hash_combine(splitmix64(base), a), b);
}

// Small deterministic generator for resampling; platform independent.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound), bound > 0, without modulo bias.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % bound;
  }

 private:
  std::uint64_t state_;
};

}  // namespace dlpp
