#include "evfuse/records.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "evfuse/error.hpp"
#include "evfuse/evidence.hpp"

namespace evfuse {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorKind::kParse, message);
}

json parse_object(std::string_view line) {
  json doc = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) malformed("unparseable line");
  if (!doc.is_object()) malformed("record must be an object");
  return doc;
}

Vector parse_numbers(const json& node, const std::string& what) {
  if (!node.is_array()) malformed(what + " must be an array of numbers");
  Vector out;
  out.reserve(node.size());
  for (const json& v : node) {
    if (!v.is_number()) malformed(what + " must be an array of numbers");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw Error(ErrorKind::kNonFinite, "non-finite value in " + what);
    out.push_back(x);
  }
  return out;
}

std::string parse_id(const json& doc) {
  auto it = doc.find("id");
  if (it == doc.end() || !it->is_string() || it->get_ref<const std::string&>().empty()) {
    malformed("missing or empty 'id'");
  }
  return it->get<std::string>();
}

template <typename Parse>
auto load_lines(std::istream& in, const LoadOptions& options, Parse parse) {
  using Item = decltype(parse(std::string_view{}));
  std::vector<Item> items;
  std::vector<Diagnostic> diagnostics;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      Item item = parse(line);
      if (!ids.insert(item.id).second) {
        malformed("duplicate id '" + item.id + "'");
      }
      items.push_back(std::move(item));
    } catch (const Error& e) {
      if (options.fail_fast) {
        throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
      }
      diagnostics.push_back({line_no, e.what()});
    }
  }
  return std::make_pair(std::move(items), std::move(diagnostics));
}

}  // namespace

LogitRecord parse_record(std::string_view line, const LabelTaxonomy& taxonomy) {
  const json doc = parse_object(line);
  LogitRecord record;
  record.id = parse_id(doc);

  for (const auto& [key, value] : doc.items()) {
    if (key == "id") continue;
    if (key == "logits") {
      if (!value.is_object() || value.empty()) malformed("'logits' must be a non-empty object");
      for (const auto& [name, vec] : value.items()) {
        record.logits.emplace(Modality::parse(name), parse_numbers(vec, "logits." + name));
      }
    } else if (key == "label") {
      if (value.is_null()) continue;
      if (!value.is_string()) malformed("'label' must be a string");
      const auto& label = value.get_ref<const std::string&>();
      if (normalize_label(label).empty()) malformed("empty 'label'");
      record.label = label;
      record.truth = taxonomy.resolve(label);
    } else if (key == "metadata") {
      if (!value.is_object()) malformed("'metadata' must be an object");
      for (const auto& [mk, mv] : value.items()) {
        if (!mv.is_string()) malformed("metadata." + mk + " must be a string");
        record.metadata.emplace(mk, mv.get<std::string>());
      }
    } else {
      malformed("unknown field '" + key + "'");
    }
  }
  if (record.logits.empty()) malformed("missing 'logits'");
  validate_logits(record.logits, taxonomy.size());
  return record;
}

LoadResult load_records(std::istream& in, const LabelTaxonomy& taxonomy,
                        const LoadOptions& options) {
  auto [records, diagnostics] = load_lines(
      in, options, [&](std::string_view line) { return parse_record(line, taxonomy); });
  return {std::move(records), std::move(diagnostics)};
}

std::string format_record(const LogitRecord& record) {
  json doc;
  doc["id"] = record.id;
  json logits = json::object();
  for (const auto& [m, v] : record.logits) logits[m.name()] = v;
  doc["logits"] = std::move(logits);
  if (record.label) doc["label"] = *record.label;
  if (!record.metadata.empty()) doc["metadata"] = record.metadata;
  return doc.dump();
}

void write_records(std::ostream& out, const std::vector<LogitRecord>& records) {
  for (const auto& r : records) out << format_record(r) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed");
}

FrameLoadResult load_frame_sequences(std::istream& in, std::size_t stride,
                                     const LoadOptions& options) {
  auto parse = [stride](std::string_view line) {
    const json doc = parse_object(line);
    FrameScoreSequence seq;
    seq.id = parse_id(doc);
    seq.stride = stride;
    for (const auto& [key, value] : doc.items()) {
      if (key == "id") continue;
      if (key != "frames") malformed("unknown field '" + key + "'");
      if (!value.is_array()) malformed("'frames' must be an array");
      for (const json& f : value) {
        if (!f.is_object() || !f.contains("index") || !f.contains("scores") || f.size() != 2) {
          malformed("each frame must be {\"index\": n, \"scores\": [...]}");
        }
        const json& idx = f["index"];
        if (!idx.is_number_unsigned()) malformed("frame index must be a non-negative integer");
        seq.frames.push_back({idx.get<std::uint64_t>(), parse_numbers(f["scores"], "scores")});
      }
    }
    validate_frames(seq);
    return seq;
  };
  auto [sequences, diagnostics] = load_lines(in, options, parse);
  return {std::move(sequences), std::move(diagnostics)};
}

}  // namespace evfuse
