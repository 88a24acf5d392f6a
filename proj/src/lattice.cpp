#include "dlpp/lattice.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "dlpp/error.hpp"

namespace dlpp {

Site Site::unit(std::size_t dimension, std::size_t axis) {
  Site e = zero(dimension);
  e.coords_.at(axis) = 1;
  return e;
}

std::int64_t Site::norm() const noexcept {
  std::int64_t total = 0;
  for (int c : coords_) total += std::llabs(c);
  return total;
}

bool Site::non_negative() const noexcept {
  for (int c : coords_) {
    if (c < 0) return false;
  }
  return true;
}

Site Site::operator+(const Site& other) const {
  if (dimension() != other.dimension()) throw Error(ErrorKind::Dimension, "site dimension mismatch");
  Site out = *this;
  for (std::size_t i = 0; i < coords_.size(); ++i) out.coords_[i] += other.coords_[i];
  return out;
}

Site Site::operator-(const Site& other) const {
  if (dimension() != other.dimension()) throw Error(ErrorKind::Dimension, "site dimension mismatch");
  Site out = *this;
  for (std::size_t i = 0; i < coords_.size(); ++i) out.coords_[i] -= other.coords_[i];
  return out;
}

Site Site::parse(std::string_view text) {
  std::string cleaned;
  for (char c : text) {
    if (c == '(' || c == ')' || c == '[' || c == ']' || std::isspace(static_cast<unsigned char>(c))) continue;
    cleaned.push_back(c);
  }
  std::vector<int> coords;
  std::stringstream in(cleaned);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      int value = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      coords.push_back(value);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, "bad site coordinate '" + token + "' in '" + std::string(text) + "'");
    }
  }
  if (coords.empty()) throw Error(ErrorKind::Config, "empty site '" + std::string(text) + "'");
  return Site(std::move(coords));
}

std::string Site::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(coords_[i]);
  }
  return out + ")";
}

std::int64_t l1_distance(const Site& a, const Site& b) { return (a - b).norm(); }

Box::Box(std::vector<int> extents) : extents_(std::move(extents)) {
  if (extents_.size() < 2) {
    throw Error(ErrorKind::Dimension, "lattice dimension must be at least 2, got " + std::to_string(extents_.size()));
  }
  strides_.assign(extents_.size(), 1);
  size_ = 1;
  for (std::size_t i = extents_.size(); i-- > 0;) {
    if (extents_[i] < 1) throw Error(ErrorKind::Bounds, "box extents must be >= 1");
    strides_[i] = size_;
    size_ *= static_cast<std::size_t>(extents_[i]);
  }
}

Box Box::parse(std::string_view text) {
  std::vector<int> extents;
  std::string token;
  auto flush = [&] {
    if (token.empty()) throw Error(ErrorKind::Config, "bad box '" + std::string(text) + "'");
    extents.push_back(std::stoi(token));
    token.clear();
  };
  for (char c : text) {
    if (c == 'x' || c == 'X' || c == '*' || c == ',') {
      flush();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      token.push_back(c);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw Error(ErrorKind::Config, "bad box '" + std::string(text) + "'");
    }
  }
  flush();
  return Box(std::move(extents));
}

Box Box::spanning(const Site& corner) {
  if (!corner.non_negative()) throw Error(ErrorKind::Bounds, "corner must be non-negative");
  std::vector<int> extents;
  for (int c : corner.coords()) extents.push_back(c + 1);
  return Box(std::move(extents));
}

Site Box::corner() const {
  std::vector<int> c;
  for (int e : extents_) c.push_back(e - 1);
  return Site(std::move(c));
}

bool Box::contains(const Site& site) const noexcept {
  if (site.dimension() != extents_.size()) return false;
  for (std::size_t i = 0; i < extents_.size(); ++i) {
    if (site[i] < 0 || site[i] >= extents_[i]) return false;
  }
  return true;
}

std::size_t Box::index_of(const Site& site) const {
  if (!contains(site)) throw Error(ErrorKind::Bounds, "site " + site.to_string() + " outside box " + to_string());
  std::size_t index = 0;
  for (std::size_t i = 0; i < extents_.size(); ++i) index += static_cast<std::size_t>(site[i]) * strides_[i];
  return index;
}

Site Box::site_at(std::size_t index) const {
  if (index >= size_) throw Error(ErrorKind::Bounds, "site index out of range");
  std::vector<int> coords(extents_.size());
  for (std::size_t i = 0; i < extents_.size(); ++i) {
    coords[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
  return Site(std::move(coords));
}

std::string Box::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < extents_.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(extents_[i]);
  }
  return out;
}

ConeSpec::ConeSpec(Rational b) : beta(std::move(b)) {
  if (beta <= 0 || beta >= 1) throw Error(ErrorKind::Domain, "cone beta must lie in (0, 1), got " + dlpp::to_string(beta));
}

bool cone_contains(const ConeSpec& cone, const Site& x) {
  if (!x.non_negative()) return false;
  const Rational bound = (Rational(1) - cone.beta) * Rational(x.norm());
  for (int c : x.coords()) {
    if (Rational(c) > bound) return false;
  }
  return true;
}

BigInt multinomial(const Site& x) {
  // Product of binomials C(x_1 + ... + x_k, x_k).
  BigInt result = 1;
  std::int64_t running = 0;
  for (int c : x.coords()) {
    for (int j = 1; j <= c; ++j) {
      ++running;
      result *= running;
      result /= j;
    }
  }
  return result;
}

}  // namespace dlpp
