#pragma once

#include <optional>

#include "evfuse/types.hpp"

namespace evfuse {

/// How logits become non-negative evidence.
enum class Mitigation {
  kBasic,     // per-modality clip at zero
  kAdvanced,  // shift every modality by the smallest logit in the record
};

Mitigation parse_mitigation(std::string_view name);
const char* to_string(Mitigation mode) noexcept;

/// Checks the record is non-empty, every vector has the same length (equal
/// to `expected_classes` when given, and at least 2) and every entry is
/// finite. Returns K.
std::size_t validate_logits(const LogitSet& record,
                            std::optional<std::size_t> expected_classes = {});

/// e^n = l^n - min over all present modalities of min(l^m). The global
/// minimum of the result is exactly zero.
EvidenceSet advanced_evidence(const LogitSet& record);

/// e^n_k = max(l^n_k, 0), independently per modality.
EvidenceSet basic_evidence(const LogitSet& record);

EvidenceSet compute_evidence(const LogitSet& record, Mitigation mode);

DirichletParams evidence_to_dirichlet(const Vector& evidence);

/// b_k = (alpha_k - 1) / S, u = K / S.
Opinion dirichlet_to_opinion(const DirichletParams& params);

inline Opinion evidence_to_opinion(const Vector& evidence) {
  return dirichlet_to_opinion(evidence_to_dirichlet(evidence));
}

}  // namespace evfuse
