#include "dlpp/error.hpp"

namespace dlpp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Alphabet: return "alphabet";
    case ErrorKind::Bounds: return "bounds";
    case ErrorKind::Reachability: return "reachability";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Plan: return "plan";
    case ErrorKind::ExhaustionLimit: return "exhaustion-limit";
    case ErrorKind::DegenerateInstance: return "degenerate-instance";
    case ErrorKind::Instance: return "instance";
    case ErrorKind::Statistics: return "statistics";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

}  // namespace dlpp
