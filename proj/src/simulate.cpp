#include "evfuse/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "evfuse/error.hpp"

namespace evfuse {
namespace {

// Draws built directly on mt19937_64 output, whose sequence is fixed by the
// standard; the std distributions are implementation-defined.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  double normal() {
    // Box-Muller; 1 - uniform() lies in (0, 1].
    const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }

 private:
  std::mt19937_64 engine_;
};

void check_rate(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, what + " must lie in [0, 1]");
  }
}

// Six decimals keep files compact and make printed values stable.
double quantize(double v) { return std::round(v * 1e6) / 1e6 + 0.0; }

}  // namespace

void validate_simulation(const SimulationConfig& config) {
  if (config.profiles.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "simulation needs at least one modality");
  }
  bool any_present = false;
  for (const auto& [m, p] : config.profiles) {
    const std::string name = m.name();
    check_rate(p.dropout, name + " dropout");
    check_rate(p.disagreement, name + " disagreement");
    for (double v : {p.signal, p.noise, p.offset, p.neutral_bias}) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kInvalidArgument, name + " parameters must be finite");
      }
    }
    if (p.noise < 0.0) throw Error(ErrorKind::kInvalidArgument, name + " noise must be >= 0");
    any_present = any_present || p.dropout < 1.0;
  }
  if (!any_present) {
    throw Error(ErrorKind::kInvalidArgument, "every modality has dropout 1");
  }
  check_rate(config.unseen_rate, "unseen rate");
  if (config.unseen_rate > 0.0 && normalize_label(config.unseen_label).empty()) {
    throw Error(ErrorKind::kInvalidArgument, "unseen label must be non-empty");
  }
}

std::vector<LogitRecord> simulate_records(const SimulationConfig& config,
                                          const LabelTaxonomy& taxonomy) {
  validate_simulation(config);
  const std::size_t k = taxonomy.size();
  const std::size_t neutral = taxonomy.neutral_index();
  const std::size_t width = std::max<std::size_t>(6, std::to_string(config.records).size());

  Sampler rng(config.seed);
  std::vector<LogitRecord> out;
  out.reserve(config.records);
  for (std::size_t i = 0; i < config.records; ++i) {
    LogitRecord rec;
    const std::string n = std::to_string(i);
    rec.id = config.id_prefix + "-" + std::string(width - n.size(), '0') + n;

    const bool unseen = rng.uniform() < config.unseen_rate;
    const std::size_t truth = rng.index(k);
    if (config.with_labels) {
      rec.label = unseen ? config.unseen_label : taxonomy.classes()[truth];
      rec.truth = taxonomy.resolve(*rec.label);
    }

    auto draw = [&](const ModalityProfile& p, std::size_t target) {
      Vector logits(k);
      for (std::size_t c = 0; c < k; ++c) {
        double v = p.offset + p.noise * rng.normal();
        if (!unseen && c == target) v += p.signal;
        if (c == neutral) v += p.neutral_bias;
        logits[c] = quantize(v);
      }
      return logits;
    };

    for (const auto& [modality, p] : config.profiles) {
      // Every variate is drawn even for dropped modalities so changing one
      // knob does not reshuffle the others.
      const bool dropped = rng.uniform() < p.dropout;
      std::size_t target = truth;
      if (rng.uniform() < p.disagreement) target = (truth + 1 + rng.index(k - 1)) % k;
      Vector logits = draw(p, target);
      if (!dropped) rec.logits.emplace(modality, std::move(logits));
    }
    if (rec.logits.empty()) {
      for (const auto& [modality, p] : config.profiles) {
        if (p.dropout < 1.0) {
          rec.logits.emplace(modality, draw(p, truth));
          break;
        }
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace evfuse
