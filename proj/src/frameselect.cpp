#include "evfuse/frameselect.hpp"

#include <algorithm>
#include <cmath>

#include "evfuse/error.hpp"

namespace evfuse {

void validate_frames(const FrameScoreSequence& seq) {
  if (seq.stride == 0) {
    throw Error(ErrorKind::kInvalidSequence, "stride must be positive");
  }
  if (seq.frames.empty()) return;
  const std::size_t width = seq.frames.front().scores.size();
  if (width == 0) {
    throw Error(ErrorKind::kInvalidSequence, "empty score vector");
  }
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const ScoredFrame& f = seq.frames[i];
    if (i > 0 && f.index <= seq.frames[i - 1].index) {
      throw Error(ErrorKind::kInvalidSequence,
                  "frame indices must be strictly increasing");
    }
    if (f.scores.size() != width) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "dimension mismatch: frame " + std::to_string(f.index) +
                      " has " + std::to_string(f.scores.size()) + " scores, expected " +
                      std::to_string(width));
    }
    if (!std::all_of(f.scores.begin(), f.scores.end(),
                     [](double s) { return std::isfinite(s); })) {
      throw Error(ErrorKind::kNonFinite,
                  "non-finite score in frame " + std::to_string(f.index));
    }
  }
}

FrameChoice select_best_frame(const FrameScoreSequence& seq) {
  validate_frames(seq);
  if (seq.frames.size() < seq.stride) {
    throw Error(ErrorKind::kNoCandidateFrames, "no candidate frames");
  }
  // Indices increase along the sequence, so keeping the first strict maximum
  // implements the lowest-index tie-break.
  const ScoredFrame* best = nullptr;
  double best_score = 0.0;
  for (std::size_t pos = seq.stride - 1; pos < seq.frames.size(); pos += seq.stride) {
    const ScoredFrame& f = seq.frames[pos];
    const double score = *std::max_element(f.scores.begin(), f.scores.end());
    if (best == nullptr || score > best_score) {
      best = &f;
      best_score = score;
    }
  }
  return {best->index, best_score};
}

}  // namespace evfuse
