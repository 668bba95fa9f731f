#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wastegrasp {

enum class ErrorCode {
  kInvalidDepth,
  kInvalidTransform,
  kDimension,
  kEmptyCloud,
  kPrecondition,
  kDegenerateGeometry,
  kNoGraspFound,
  kObjectMissed,
  kTimeout,
  kUndefinedLoss,
  kInvalidBox,
  kUndefinedAp,
  kUndefinedAccuracy,
  kInvalidConfig,
  kIo,
  kParse,
};

/// Stable snake_case name, used in machine-readable error output.
std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wastegrasp
