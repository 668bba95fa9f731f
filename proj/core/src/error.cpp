#include "wastegrasp/error.hpp"

namespace wastegrasp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDepth: return "invalid_depth";
    case ErrorCode::kInvalidTransform: return "invalid_transform";
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kEmptyCloud: return "empty_cloud";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kDegenerateGeometry: return "degenerate_geometry";
    case ErrorCode::kNoGraspFound: return "no_grasp_found";
    case ErrorCode::kObjectMissed: return "object_missed";
    case ErrorCode::kTimeout: return "timeout";
    case ErrorCode::kUndefinedLoss: return "undefined_loss";
    case ErrorCode::kInvalidBox: return "invalid_box";
    case ErrorCode::kUndefinedAp: return "undefined_ap";
    case ErrorCode::kUndefinedAccuracy: return "undefined_accuracy";
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

}  // namespace wastegrasp
