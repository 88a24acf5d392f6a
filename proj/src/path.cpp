#include "dlpp/path.hpp"

#include "dlpp/error.hpp"

namespace dlpp {

DirectedPath::DirectedPath(Site origin, std::vector<std::uint8_t> steps)
    : origin_(std::move(origin)), steps_(std::move(steps)) {
  for (std::uint8_t axis : steps_) {
    if (axis >= origin_.dimension()) throw Error(ErrorKind::Domain, "step axis out of range");
  }
}

DirectedPath DirectedPath::from_step_string(Site origin, std::string_view digits) {
  std::vector<std::uint8_t> steps;
  for (char c : digits) {
    if (c < '1' || c > '9') throw Error(ErrorKind::Config, "bad step digit '" + std::string(1, c) + "'");
    steps.push_back(static_cast<std::uint8_t>(c - '1'));
  }
  return DirectedPath(std::move(origin), std::move(steps));
}

DirectedPath DirectedPath::from_sites(std::span<const Site> sites) {
  if (sites.empty()) throw Error(ErrorKind::Domain, "empty path");
  std::vector<std::uint8_t> steps;
  for (std::size_t i = 1; i < sites.size(); ++i) {
    Site delta = sites[i] - sites[i - 1];
    if (delta.norm() != 1 || !delta.non_negative()) {
      throw Error(ErrorKind::Domain, "consecutive sites " + sites[i - 1].to_string() + " -> " +
                                         sites[i].to_string() + " are not a unit step");
    }
    for (std::size_t axis = 0; axis < delta.dimension(); ++axis) {
      if (delta[axis] == 1) steps.push_back(static_cast<std::uint8_t>(axis));
    }
  }
  return DirectedPath(sites.front(), std::move(steps));
}

Site DirectedPath::endpoint() const {
  Site end = origin_;
  for (std::uint8_t axis : steps_) ++end[axis];
  return end;
}

std::vector<Site> DirectedPath::sites() const {
  std::vector<Site> out;
  out.reserve(length());
  Site current = origin_;
  out.push_back(current);
  for (std::uint8_t axis : steps_) {
    ++current[axis];
    out.push_back(current);
  }
  return out;
}

bool DirectedPath::within(const Box& box) const { return box.contains(origin_) && box.contains(endpoint()); }

std::vector<std::size_t> DirectedPath::indices(const Box& box) const {
  if (!within(box)) throw Error(ErrorKind::Bounds, "path leaves box " + box.to_string());
  std::vector<std::size_t> out;
  out.reserve(length());
  std::size_t index = box.index_of(origin_);
  out.push_back(index);
  for (std::uint8_t axis : steps_) {
    index += box.stride(axis);
    out.push_back(index);
  }
  return out;
}

std::int64_t DirectedPath::weight(const Environment& env) const {
  std::int64_t total = 0;
  for (std::size_t index : indices(env.box())) total += env.at(index);
  return total;
}

std::string DirectedPath::step_string() const {
  std::string out;
  out.reserve(steps_.size());
  for (std::uint8_t axis : steps_) out.push_back(static_cast<char>('1' + axis));
  return out;
}

}  // namespace dlpp
