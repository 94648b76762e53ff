#include "qpmsynth/error.hpp"

namespace qpmsynth {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::usage:
      return "usage";
    case ErrorCode::parse:
      return "parse";
    case ErrorCode::range:
      return "range";
    case ErrorCode::domain:
      return "domain";
    case ErrorCode::infeasible:
      return "infeasible";
    case ErrorCode::shape:
      return "shape";
    case ErrorCode::degenerate:
      return "degenerate";
    case ErrorCode::data:
      return "data";
    case ErrorCode::io:
      return "io";
  }
  return "unknown";
}

}  // namespace qpmsynth
