#pragma once

#include <stdexcept>
#include <string>

namespace ud {

// Failure categories surfaced by the library. The CLI maps CONFIG to exit
// code 2 and everything else to exit code 3.
enum class ErrorCode {
  CONFIG,
  DIMENSION_MISMATCH,
  DEGENERATE_GRADIENT,
  NEGATIVE_GAP,
  MISSING_ITERATES,
  INADMISSIBLE_STEP,
  HYPOTHESIS_VIOLATED,
  BOUNDARY_MAX,
  INCONCLUSIVE,
  IO,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ud
