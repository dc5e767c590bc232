#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace etr {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kNumericalFailure,
  kDimensionTooLarge,
  kNotStrictlyCopositive,
  kNotCDT,
  kNotApplicable,
  kInfeasibleProblem,
  kCombinatorialBlowup,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it to a stable name in its reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace etr
