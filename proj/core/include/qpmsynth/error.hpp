#pragma once

#include <stdexcept>
#include <string>

namespace qpmsynth {

/// Failure categories. Each maps onto one process exit code of the CLI.
enum class ErrorCode {
  usage,       ///< malformed command line
  parse,       ///< config or data file could not be parsed / failed validation
  range,       ///< wavelength or position outside a model's validity range
  domain,      ///< argument outside a function's mathematical domain
  infeasible,  ///< design constraints cannot be met
  shape,       ///< grid or matrix dimensions disagree
  degenerate,  ///< input carries no usable signal (all-zero, empty overlap)
  data,        ///< measured data violates a precondition
  io,          ///< filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Exit-code map: 1 usage, 2 config/parse, 3 numeric/domain, 4 I/O.
constexpr int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::usage:
      return 1;
    case ErrorCode::parse:
      return 2;
    case ErrorCode::io:
      return 4;
    default:
      return 3;
  }
}

const char* to_string(ErrorCode code) noexcept;

}  // namespace qpmsynth
