#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evifuse {

enum class ErrorCode {
  InvalidArgument,
  FrameMismatch,
  InvalidBba,
  TotalConflict,
  IndexOutOfRange,
  TooFewBoes,
  RowSumExceedsOne,
  LengthMismatch,
  ShapeMismatch,
  DegenerateChief,
  InvalidWeights,
  EmptyInput,
  EmptyPool,
  TooFewSamples,
  NonFiniteLoss,
  ParseError,
  ClassMismatch,
  InvalidCounts,
  ClassTooSmall,
  TooManySections,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// C API can map it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace evifuse
