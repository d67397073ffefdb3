#include "evfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>

#include "evfuse/error.hpp"

namespace evfuse {
namespace {

void check_pair(const Opinion& lhs, const Opinion& rhs) {
  if (lhs.classes() != rhs.classes() || lhs.classes() == 0) {
    throw Error(ErrorKind::kDimensionMismatch,
                "dimension mismatch: cannot combine opinions over " +
                    std::to_string(lhs.classes()) + " and " +
                    std::to_string(rhs.classes()) + " classes");
  }
}

// Rejects a Dempster normaliser (1 - c) that is too small to divide by.
double checked_normaliser(double norm) {
  if (!(norm >= kTotalConflictThreshold)) {
    throw Error(ErrorKind::kTotalConflict, "total conflict");
  }
  return norm;
}

}  // namespace

Combined ds_combine(const Opinion& lhs, const Opinion& rhs) {
  check_pair(lhs, rhs);
  const std::size_t k = lhs.classes();
  const auto& b1 = lhs.beliefs;
  const auto& b2 = rhs.beliefs;

  double conflict = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (b1[i] == 0.0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) conflict += b1[i] * b2[j];
    }
  }
  // Mass landing on a non-empty intersection. It equals 1 - c for normalised
  // inputs but, unlike 1 - c, does not cancel when c approaches 1, so long
  // chains stay normalised. c == 0 keeps the exact divisor 1.
  Combined out{Opinion{Vector(k), 0.0}, conflict};
  double agreeing = lhs.uncertainty * rhs.uncertainty;
  for (std::size_t i = 0; i < k; ++i) {
    out.opinion.beliefs[i] = b1[i] * b2[i] + b1[i] * rhs.uncertainty + b2[i] * lhs.uncertainty;
    agreeing += out.opinion.beliefs[i];
  }
  const double norm = conflict == 0.0 ? 1.0 : checked_normaliser(agreeing);
  for (double& b : out.opinion.beliefs) b /= norm;
  out.opinion.uncertainty = lhs.uncertainty * rhs.uncertainty / norm;
  return out;
}

Combined ds_combine_oracle(const Opinion& lhs, const Opinion& rhs) {
  check_pair(lhs, rhs);
  const std::size_t k = lhs.classes();
  const std::size_t frame = k;  // index of the whole-frame focal set
  auto mass = [frame](const Opinion& op, std::size_t set) {
    return set == frame ? op.uncertainty : op.beliefs[set];
  };
  // Intersection of two focal sets, or nullopt when empty.
  auto intersect = [frame](std::size_t a, std::size_t b) -> std::optional<std::size_t> {
    if (a == frame) return b;
    if (b == frame) return a;
    if (a == b) return a;
    return std::nullopt;
  };

  Vector combined(k + 1, 0.0);
  double conflict = 0.0;
  for (std::size_t a = 0; a <= frame; ++a) {
    for (std::size_t b = 0; b <= frame; ++b) {
      const double m = mass(lhs, a) * mass(rhs, b);
      if (auto set = intersect(a, b)) {
        combined[*set] += m;
      } else {
        conflict += m;
      }
    }
  }
  const double norm = checked_normaliser(1.0 - conflict);

  Combined out{Opinion{Vector(k), combined[frame] / norm}, conflict};
  for (std::size_t i = 0; i < k; ++i) out.opinion.beliefs[i] = combined[i] / norm;
  return out;
}

std::pair<DirichletParams, Vector> opinion_to_probabilities(const Opinion& opinion) {
  const std::size_t k = opinion.classes();
  if (k == 0) {
    throw Error(ErrorKind::kInvalidArgument, "empty opinion");
  }
  if (!(opinion.uncertainty >= kMinUncertainty)) {
    throw Error(ErrorKind::kDegenerateCertainty, "degenerate certainty");
  }
  const double strength = static_cast<double>(k) / opinion.uncertainty;
  DirichletParams params{Vector(k), strength};
  Vector probs(k);
  for (std::size_t i = 0; i < k; ++i) {
    params.alpha[i] = opinion.beliefs[i] * strength + 1.0;
    probs[i] = params.alpha[i] / strength;
  }
  return {std::move(params), std::move(probs)};
}

FusionResult fuse_sequence(const ModalityOpinions& opinions) {
  if (opinions.empty()) {
    throw Error(ErrorKind::kNothingToFuse, "nothing to fuse");
  }
  FusionResult result;
  result.per_modality = opinions;
  result.fused = opinions.front().second;
  for (std::size_t i = 1; i < opinions.size(); ++i) {
    Combined step = ds_combine(result.fused, opinions[i].second);
    result.fused = std::move(step.opinion);
    result.conflict_trace.push_back(step.conflict);
  }
  auto [params, probs] = opinion_to_probabilities(result.fused);
  result.dirichlet = std::move(params);
  result.probabilities = std::move(probs);
  return result;
}

FusionOrder default_fusion_order() {
  return {Modality::audio(), Modality::video(), Modality::text()};
}

FusionResult fuse_record(const LogitSet& record, Mitigation mode,
                         const FusionOrder& order) {
  const EvidenceSet evidence = compute_evidence(record, mode);

  ModalityOpinions opinions;
  opinions.reserve(evidence.size());
  std::set<Modality> seen;
  for (const Modality& m : order) {
    if (!seen.insert(m).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "fusion order lists " + m.name() + " twice");
    }
    if (auto it = evidence.find(m); it != evidence.end()) {
      opinions.emplace_back(m, evidence_to_opinion(it->second));
    }
  }
  for (const auto& [m, e] : evidence) {
    if (!seen.contains(m)) opinions.emplace_back(m, evidence_to_opinion(e));
  }
  return fuse_sequence(opinions);
}

}  // namespace evfuse
