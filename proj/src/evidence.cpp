#include "evfuse/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "evfuse/error.hpp"

namespace evfuse {

Mitigation parse_mitigation(std::string_view name) {
  if (name == "basic") return Mitigation::kBasic;
  if (name == "advanced") return Mitigation::kAdvanced;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown mitigation mode '" + std::string(name) + "'");
}

const char* to_string(Mitigation mode) noexcept {
  return mode == Mitigation::kBasic ? "basic" : "advanced";
}

std::size_t validate_logits(const LogitSet& record,
                            std::optional<std::size_t> expected_classes) {
  if (record.empty()) {
    throw Error(ErrorKind::kNoModalities, "no modalities");
  }
  const std::size_t k = expected_classes.value_or(record.begin()->second.size());
  if (k < 2) {
    throw Error(ErrorKind::kDimensionMismatch,
                "dimension mismatch: need at least 2 classes");
  }
  for (const auto& [modality, logits] : record) {
    if (logits.size() != k) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "dimension mismatch: " + modality.name() + " has " +
                      std::to_string(logits.size()) + " logits, expected " +
                      std::to_string(k));
    }
    for (double v : logits) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kNonFinite, "non-finite logit in " + modality.name());
      }
    }
  }
  return k;
}

EvidenceSet advanced_evidence(const LogitSet& record) {
  validate_logits(record);
  double floor = std::numeric_limits<double>::infinity();
  for (const auto& [modality, logits] : record) {
    floor = std::min(floor, *std::min_element(logits.begin(), logits.end()));
  }
  EvidenceSet out;
  for (const auto& [modality, logits] : record) {
    Vector e(logits.size());
    // x - floor is exactly 0 for x == floor and non-negative otherwise.
    std::transform(logits.begin(), logits.end(), e.begin(),
                   [floor](double x) { return x - floor; });
    out.emplace(modality, std::move(e));
  }
  return out;
}

EvidenceSet basic_evidence(const LogitSet& record) {
  validate_logits(record);
  EvidenceSet out;
  for (const auto& [modality, logits] : record) {
    Vector e(logits.size());
    std::transform(logits.begin(), logits.end(), e.begin(),
                   [](double x) { return x > 0.0 ? x : 0.0; });
    out.emplace(modality, std::move(e));
  }
  return out;
}

EvidenceSet compute_evidence(const LogitSet& record, Mitigation mode) {
  return mode == Mitigation::kBasic ? basic_evidence(record)
                                    : advanced_evidence(record);
}

DirichletParams evidence_to_dirichlet(const Vector& evidence) {
  DirichletParams params{Vector(evidence.size()), 0.0};
  for (std::size_t k = 0; k < evidence.size(); ++k) {
    if (!(evidence[k] >= 0.0) || !std::isfinite(evidence[k])) {
      throw Error(ErrorKind::kNonFinite,
                  "evidence must be finite and non-negative");
    }
    params.alpha[k] = evidence[k] + 1.0;
    params.strength += params.alpha[k];
  }
  return params;
}

Opinion dirichlet_to_opinion(const DirichletParams& params) {
  const std::size_t k = params.classes();
  if (k == 0 || !(params.strength > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "empty Dirichlet parameters");
  }
  Opinion op{Vector(k), static_cast<double>(k) / params.strength};
  for (std::size_t i = 0; i < k; ++i) {
    op.beliefs[i] = (params.alpha[i] - 1.0) / params.strength;
  }
  return op;
}

}  // namespace evfuse
