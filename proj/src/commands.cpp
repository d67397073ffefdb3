#include "evfuse/commands.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "evfuse/error.hpp"
#include "evfuse/metrics.hpp"
#include "evfuse/records.hpp"

namespace evfuse {
namespace {

using nlohmann::json;

// Runs fn(i) for i in [0, n) over contiguous chunks on `workers` threads.
// fn must only write to slot i of its outputs.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([=, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

// Loads every input; returns nullopt when fail-fast aborted.
std::optional<std::vector<LogitRecord>> load_all(const RunConfig& config,
                                                 const LabelTaxonomy& taxonomy,
                                                 std::span<const Input> inputs,
                                                 std::ostream& diag) {
  std::vector<LogitRecord> all;
  std::set<std::string> ids;
  for (const Input& input : inputs) {
    LoadResult loaded;
    try {
      loaded = load_records(*input.stream, taxonomy, {config.fail_fast});
    } catch (const Error& e) {
      diag << input.name << ": " << e.what() << '\n';
      return std::nullopt;
    }
    for (const auto& d : loaded.diagnostics) {
      diag << input.name << ": line " << d.line << ": " << d.message << '\n';
    }
    for (auto& r : loaded.records) {
      if (!ids.insert(r.id).second) {
        diag << input.name << ": duplicate id '" << r.id << "'\n";
          if (config.fail_fast) return std::nullopt;
        continue;
      }
      all.push_back(std::move(r));
    }
  }
  return all;
}

std::vector<std::size_t> order_by_id(const std::vector<LogitRecord>& records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return records[a].id < records[b].id; });
  return order;
}

struct Fused {
  std::optional<FusionResult> result;
  std::string error;
};

std::vector<Fused> fuse_all(const std::vector<LogitRecord>& records, Mitigation mode,
                            const RunConfig& config) {
  std::vector<Fused> fused(records.size());
  parallel_for(records.size(), config.workers, [&](std::size_t i) {
    try {
      fused[i].result = fuse_record(records[i].logits, mode, config.fusion_order);
    } catch (const Error& e) {
      fused[i].error = e.what();
    }
  });
  return fused;
}

}  // namespace

void validate_config(const RunConfig& config) {
  std::set<Modality> seen;
  for (const Modality& m : config.fusion_order) {
    if (!seen.insert(m).second) {
      throw Error(ErrorKind::kInvalidArgument, "fusion order lists " + m.name() + " twice");
    }
  }
  if (config.workers == 0) throw Error(ErrorKind::kInvalidArgument, "workers must be >= 1");
  if (config.stride == 0) throw Error(ErrorKind::kInvalidArgument, "stride must be >= 1");
}

int cmd_fuse(const RunConfig& config, const LabelTaxonomy& taxonomy,
             std::span<const Input> inputs, std::ostream& out, std::ostream& diag) {
  validate_config(config);
  auto records = load_all(config, taxonomy, inputs, diag);
  if (!records) return kExitValidation;

  const auto fused = fuse_all(*records, config.mode, config);
  std::vector<std::string> lines(records->size());
  parallel_for(records->size(), config.workers, [&](std::size_t i) {
    if (!fused[i].result) return;
    const FusionResult& r = *fused[i].result;
    const Prediction p = Prediction::from_probabilities((*records)[i].id, r.probabilities,
                                                        r.fused.uncertainty);
    json doc;
    doc["id"] = p.record_id;
    doc["probabilities"] = r.probabilities;
    doc["predicted"] = taxonomy.classes()[p.predicted_index];
    doc["uncertainty"] = r.fused.uncertainty;
    doc["conflict"] = r.conflict_trace;
    lines[i] = doc.dump();
  });

  for (std::size_t i : order_by_id(*records)) {
    if (!fused[i].result) {
      diag << "record '" << (*records)[i].id << "': " << fused[i].error << '\n';
      if (config.fail_fast) return kExitValidation;
      continue;
    }
    out << lines[i] << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed");
  return kExitOk;
}

int cmd_evaluate(const RunConfig& config, const LabelTaxonomy& taxonomy,
                 std::span<const Input> inputs, std::ostream& out, std::ostream& diag) {
  validate_config(config);
  auto loaded = load_all(config, taxonomy, inputs, diag);
  if (!loaded) return kExitValidation;

  std::vector<LogitRecord> records;
  records.reserve(loaded->size());
  for (std::size_t i : order_by_id(*loaded)) {
    LogitRecord& r = (*loaded)[i];
    if (!r.truth) {
      diag << "record '" << r.id << "': missing ground truth\n";
      if (config.fail_fast) return kExitValidation;
      continue;
    }
    records.push_back(std::move(r));
  }

  auto evaluate = [&](Mitigation mode) -> std::optional<EvalReport> {
    const auto fused = fuse_all(records, mode, config);
    std::vector<EvaluatedRecord> evaluated;
    evaluated.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!fused[i].result) {
        diag << "record '" << records[i].id << "': " << fused[i].error << '\n';
        if (config.fail_fast) return std::nullopt;
        continue;
      }
      const FusionResult& r = *fused[i].result;
      evaluated.push_back(
          {Prediction::from_probabilities(records[i].id, r.probabilities, r.fused.uncertainty),
           {records[i].id, *records[i].truth},
           r.conflict_trace});
    }
    return build_report(evaluated, taxonomy, to_string(mode), {config.exclude_unseen});
  };

  if (config.compare) {
    auto basic = evaluate(Mitigation::kBasic);
    if (!basic) return kExitValidation;
    auto advanced = evaluate(Mitigation::kAdvanced);
    if (!advanced) return kExitValidation;
    write_comparison(*basic, *advanced, out, config.format);
  } else {
    auto report = evaluate(config.mode);
    if (!report) return kExitValidation;
    write_report(*report, out, config.format);
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, const LabelTaxonomy& taxonomy, std::ostream& out,
                 std::ostream& diag) {
  validate_config(config);
  if (!config.seed) {
    diag << "simulate: --seed is required\n";
    return kExitUsage;
  }
  SimulationConfig sim = config.simulation;
  sim.seed = *config.seed;
  try {
    write_records(out, simulate_records(sim, taxonomy));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    diag << "simulate: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_select_frame(const RunConfig& config, std::span<const Input> inputs, std::ostream& out,
                     std::ostream& diag) {
  validate_config(config);
  std::vector<FrameScoreSequence> sequences;
  std::set<std::string> ids;
  for (const Input& input : inputs) {
    FrameLoadResult loaded;
    try {
      loaded = load_frame_sequences(*input.stream, config.stride, {config.fail_fast});
    } catch (const Error& e) {
      diag << input.name << ": " << e.what() << '\n';
      return kExitValidation;
    }
    for (const auto& d : loaded.diagnostics) {
      diag << input.name << ": line " << d.line << ": " << d.message << '\n';
    }
    for (auto& s : loaded.sequences) {
      if (!ids.insert(s.id).second) {
        diag << input.name << ": duplicate id '" << s.id << "'\n";
        if (config.fail_fast) return kExitValidation;
        continue;
      }
      sequences.push_back(std::move(s));
    }
  }
  std::sort(sequences.begin(), sequences.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  for (const auto& seq : sequences) {
    json doc;
    doc["id"] = seq.id;
    try {
      const FrameChoice choice = select_best_frame(seq);
      doc["frame"] = choice.frame_index;
      doc["saliency"] = choice.saliency;
    } catch (const Error& e) {
      diag << "sequence '" << seq.id << "': " << e.what() << '\n';
      if (config.fail_fast) return kExitValidation;
      doc["error"] = e.what();
    }
    out << doc.dump() << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed");
  return kExitOk;
}

}  // namespace evfuse
