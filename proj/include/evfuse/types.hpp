#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "evfuse/modality.hpp"

namespace evfuse {

using Vector = std::vector<double>;

/// Raw per-class scores for each present modality of one sample.
using LogitSet = std::map<Modality, Vector>;

/// Non-negative per-class support for each present modality.
using EvidenceSet = std::map<Modality, Vector>;

struct DirichletParams {
  Vector alpha;     // alpha_k = evidence_k + 1
  double strength;  // sum of alpha

  std::size_t classes() const noexcept { return alpha.size(); }
};

/// Subjective-logic opinion: beliefs over K singletons plus mass on the
/// whole frame. sum(beliefs) + uncertainty == 1.
struct Opinion {
  Vector beliefs;
  double uncertainty = 1.0;

  std::size_t classes() const noexcept { return beliefs.size(); }

  static Opinion vacuous(std::size_t classes) {
    return Opinion{Vector(classes, 0.0), 1.0};
  }

  bool operator==(const Opinion&) const = default;
};

}  // namespace evfuse
