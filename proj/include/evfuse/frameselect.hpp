#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "evfuse/types.hpp"

namespace evfuse {

/// Stride used when the caller does not supply one.
inline constexpr std::size_t kDefaultFrameStride = 5;

struct ScoredFrame {
  std::uint64_t index;
  Vector scores;
};

/// Per-frame score vectors from any external scorer. Only every stride-th
/// frame is a candidate: 1-based ordinal positions stride, 2*stride, ...
/// Absolute frame indices play no part in striding.
struct FrameScoreSequence {
  std::string id;
  std::vector<ScoredFrame> frames;
  std::size_t stride = kDefaultFrameStride;
};

struct FrameChoice {
  std::uint64_t frame_index;
  double saliency;  // the winning frame's largest score

  bool operator==(const FrameChoice&) const = default;
};

/// Throws kInvalidSequence for non-increasing indices, ragged or empty score
/// vectors, non-finite scores or a zero stride.
void validate_frames(const FrameScoreSequence& seq);

/// Candidate maximising max_k scores_k; ties go to the lowest frame index.
/// Scores are used as supplied (logits or probabilities alike).
FrameChoice select_best_frame(const FrameScoreSequence& seq);

}  // namespace evfuse
