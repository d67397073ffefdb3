#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evfuse/records.hpp"
#include "evfuse/taxonomy.hpp"

namespace evfuse {

/// Class-conditional logit generator for one modality:
///   l_k = offset + noise * N(0,1) + signal * [k == target] + neutral_bias * [k == neutral]
/// where target is the true class, or with probability `disagreement` a
/// uniformly drawn wrong class.
struct ModalityProfile {
  double signal = 3.0;
  double noise = 1.0;
  double offset = 0.0;
  double neutral_bias = 0.0;
  double dropout = 0.0;       // probability the modality is absent
  double disagreement = 0.0;  // probability of pointing at a wrong class
};

struct SimulationConfig {
  std::size_t records = 0;
  std::uint64_t seed = 0;
  std::map<Modality, ModalityProfile> profiles = {
      {Modality::audio(), {}}, {Modality::video(), {}}, {Modality::text(), {}}};
  // Fraction of records whose truth is `unseen_label`; their logits carry no
  // class signal, only noise and neutral_bias.
  double unseen_rate = 0.0;
  std::string unseen_label = "contempt";
  std::string id_prefix = "sim";
  bool with_labels = true;
};

/// Throws kInvalidArgument on out-of-range rates, negative noise or an
/// empty profile set.
void validate_simulation(const SimulationConfig& config);

/// Byte-deterministic for a given (config, taxonomy). At least one modality
/// is kept per record: if dropout removes all, the first profile whose
/// dropout is below 1 is restored.
std::vector<LogitRecord> simulate_records(const SimulationConfig& config,
                                          const LabelTaxonomy& taxonomy);

}  // namespace evfuse
