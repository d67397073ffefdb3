#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evfuse/evidence.hpp"
#include "evfuse/fusion.hpp"
#include "evfuse/frameselect.hpp"
#include "evfuse/report.hpp"
#include "evfuse/simulate.hpp"
#include "evfuse/taxonomy.hpp"

namespace evfuse {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Mitigation mode = Mitigation::kAdvanced;
  bool compare = false;  // evaluate: run basic and advanced side by side
  FusionOrder fusion_order = default_fusion_order();
  std::optional<std::string> taxonomy_path;
  std::vector<std::string> inputs;
  std::string output;
  bool fail_fast = false;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::size_t stride = kDefaultFrameStride;
  ReportFormat format = ReportFormat::kTabular;
  bool exclude_unseen = false;
  SimulationConfig simulation;
};

/// Throws kInvalidArgument for duplicate fusion-order entries or zero
/// workers / stride.
void validate_config(const RunConfig& config);

/// A named input stream; the name prefixes diagnostics.
struct Input {
  std::string name;
  std::istream* stream;
};

/// One JSON line per record, sorted by id:
///   {"conflict":[...],"id":...,"predicted":...,"probabilities":[...],"uncertainty":...}
int cmd_fuse(const RunConfig& config, const LabelTaxonomy& taxonomy,
             std::span<const Input> inputs, std::ostream& out, std::ostream& diag);

/// Writes an EvalReport, or a basic/advanced comparison when config.compare.
int cmd_evaluate(const RunConfig& config, const LabelTaxonomy& taxonomy,
                 std::span<const Input> inputs, std::ostream& out, std::ostream& diag);

/// Requires config.seed; writes config.simulation.records record lines.
int cmd_simulate(const RunConfig& config, const LabelTaxonomy& taxonomy, std::ostream& out,
                 std::ostream& diag);

/// One JSON line per sequence, sorted by id: {"frame":n,"id":...,"saliency":x}
/// or {"error":...,"id":...} when a sequence has no candidate frame.
int cmd_select_frame(const RunConfig& config, std::span<const Input> inputs, std::ostream& out,
                     std::ostream& diag);

}  // namespace evfuse
