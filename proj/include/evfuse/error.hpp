#pragma once

#include <stdexcept>
#include <string>

namespace evfuse {

enum class ErrorKind {
  kNoModalities,
  kDimensionMismatch,
  kNonFinite,
  kTotalConflict,
  kDegenerateCertainty,
  kNothingToFuse,
  kNoCandidateFrames,
  kInvalidSequence,
  kIdMismatch,
  kLabelAbsent,
  kParse,
  kInvalidArgument,
  kIo,
};

// All library failures surface as this exception; kind() is stable, what()
// carries the human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace evfuse
