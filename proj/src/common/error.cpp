#include "common/error.hpp"

namespace evifuse {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::InvalidBba: return "InvalidBba";
    case ErrorCode::TotalConflict: return "TotalConflict";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TooFewBoes: return "TooFewBoes";
    case ErrorCode::RowSumExceedsOne: return "RowSumExceedsOne";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DegenerateChief: return "DegenerateChief";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::TooManySections: return "TooManySections";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace evifuse
