#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evfuse/frameselect.hpp"
#include "evfuse/taxonomy.hpp"
#include "evfuse/types.hpp"

namespace evfuse {

struct LogitRecord {
  std::string id;
  LogitSet logits;
  std::optional<std::string> label;  // as written in the source
  std::optional<Truth> truth;        // label resolved against the taxonomy
  std::map<std::string, std::string> metadata;

  bool operator==(const LogitRecord&) const = default;
};

/// One rejected input line.
struct Diagnostic {
  std::size_t line;
  std::string message;
};

struct LoadOptions {
  // Throw on the first malformed line instead of skipping it.
  bool fail_fast = false;
};

struct LoadResult {
  std::vector<LogitRecord> records;
  std::vector<Diagnostic> diagnostics;
};

/// Parses one record line. Throws Error on any malformation.
LogitRecord parse_record(std::string_view line, const LabelTaxonomy& taxonomy);

/// Reads line-delimited records (docs/formats.md). Blank lines are skipped.
/// Malformed lines and duplicate ids become diagnostics carrying 1-based
/// line numbers; with fail_fast the first one is thrown as Error instead.
LoadResult load_records(std::istream& in, const LabelTaxonomy& taxonomy,
                        const LoadOptions& options = {});

/// Serialises one record as a single line without the trailing newline.
std::string format_record(const LogitRecord& record);

void write_records(std::ostream& out, const std::vector<LogitRecord>& records);

struct FrameLoadResult {
  std::vector<FrameScoreSequence> sequences;
  std::vector<Diagnostic> diagnostics;
};

/// Reads line-delimited frame score sequences, applying `stride` to each.
FrameLoadResult load_frame_sequences(std::istream& in, std::size_t stride,
                                     const LoadOptions& options = {});

}  // namespace evfuse
