#pragma once

#include <utility>
#include <vector>

#include "evfuse/evidence.hpp"
#include "evfuse/types.hpp"

namespace evfuse {

/// Combinations whose normaliser 1 - c falls below this are rejected.
inline constexpr double kTotalConflictThreshold = 1e-12;
/// opinion_to_probabilities rejects uncertainty below this.
inline constexpr double kMinUncertainty = 1e-12;

struct Combined {
  Opinion opinion;
  double conflict;  // c = sum_{i != j} b1_i * b2_j
};

using ModalityOpinions = std::vector<std::pair<Modality, Opinion>>;
using FusionOrder = std::vector<Modality>;

struct FusionResult {
  Opinion fused;
  Vector probabilities;
  DirichletParams dirichlet;
  ModalityOpinions per_modality;
  std::vector<double> conflict_trace;  // one entry per pairwise step
};

/// Closed-form Dempster combination of two opinions over singletons + frame.
/// Combining with a vacuous opinion returns the other operand bit-for-bit.
Combined ds_combine(const Opinion& lhs, const Opinion& rhs);

/// Generic Dempster's rule evaluated by enumerating all (K+1)^2 focal-set
/// pairs, where focal set K stands for the whole frame. Slow; reference only.
Combined ds_combine_oracle(const Opinion& lhs, const Opinion& rhs);

/// S = K/u, e_k = b_k S, alpha_k = e_k + 1, p_k = alpha_k / S.
std::pair<DirichletParams, Vector> opinion_to_probabilities(const Opinion& opinion);

/// Left fold of ds_combine over the list, then probability recovery.
FusionResult fuse_sequence(const ModalityOpinions& opinions);

/// audio, video, text.
FusionOrder default_fusion_order();

/// Evidence -> opinions -> fuse_sequence. Modalities are visited in `order`;
/// present modalities missing from `order` follow in canonical order, and
/// absent ones are skipped (equivalent to fusing a vacuous opinion).
FusionResult fuse_record(const LogitSet& record, Mitigation mode,
                         const FusionOrder& order = default_fusion_order());

}  // namespace evfuse
