#include "evfuse/report.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "evfuse/error.hpp"

namespace evfuse {
namespace {

using nlohmann::json;

// nlohmann keeps object keys sorted, so dump() is deterministic.
json to_json(const EvalReport& r) {
  json doc;
  doc["mode"] = r.mode;
  doc["classes"] = r.classes;
  doc["n_records"] = r.n_records;
  doc["accuracy_standard"] = r.accuracy_standard;
  doc["accuracy_neutral_tolerant"] = r.accuracy_neutral_tolerant;
  doc["per_step_mean_conflict"] = r.per_step_mean_conflict;
  doc["conflict_weighted_error"] = r.conflict_weighted_error;
  doc["exclude_unseen"] = r.exclude_unseen;
  doc["fallback_rates"] = json::object();
  for (const auto& [label, rate] : r.fallback_rates) doc["fallback_rates"][label] = rate;
  doc["confusion"] = {{"rows", r.confusion.row_labels},
                      {"columns", r.confusion.column_labels},
                      {"counts", r.confusion.counts}};
  return doc;
}

EvalReport from_json(const json& doc) {
  try {
    EvalReport r;
    r.mode = doc.at("mode").get<std::string>();
    r.classes = doc.at("classes").get<std::vector<std::string>>();
    r.n_records = doc.at("n_records").get<std::uint64_t>();
    r.accuracy_standard = doc.at("accuracy_standard").get<double>();
    r.accuracy_neutral_tolerant = doc.at("accuracy_neutral_tolerant").get<double>();
    r.per_step_mean_conflict = doc.at("per_step_mean_conflict").get<double>();
    r.conflict_weighted_error = doc.at("conflict_weighted_error").get<double>();
    r.exclude_unseen = doc.at("exclude_unseen").get<bool>();
    r.fallback_rates = doc.at("fallback_rates").get<std::map<std::string, double>>();
    const json& m = doc.at("confusion");
    r.confusion.row_labels = m.at("rows").get<std::vector<std::string>>();
    r.confusion.column_labels = m.at("columns").get<std::vector<std::string>>();
    r.confusion.counts = m.at("counts").get<std::vector<std::vector<std::uint64_t>>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed report: ") + e.what());
  }
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string signed_fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.6f", v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void write_tabular(const EvalReport& r, std::ostream& out) {
  out << "mode                       " << r.mode << '\n'
      << "records                    " << r.n_records << '\n'
      << "exclude_unseen             " << (r.exclude_unseen ? "yes" : "no") << '\n'
      << "accuracy_standard          " << fixed(r.accuracy_standard) << '\n'
      << "accuracy_neutral_tolerant  " << fixed(r.accuracy_neutral_tolerant) << '\n'
      << "per_step_mean_conflict     " << fixed(r.per_step_mean_conflict) << '\n'
      << "conflict_weighted_error    " << fixed(r.conflict_weighted_error) << '\n';
  for (const auto& [label, rate] : r.fallback_rates) {
    out << pad_right("fallback_rate[" + label + "]", 26) << ' ' << fixed(rate) << '\n';
  }

  const auto& m = r.confusion;
  std::size_t first = std::string("truth\\pred").size();
  for (const auto& l : m.row_labels) first = std::max(first, l.size());
  std::size_t width = 6;
  for (const auto& l : m.column_labels) width = std::max(width, l.size());
  for (const auto& row : m.counts)
    for (auto c : row) width = std::max(width, std::to_string(c).size());

  out << "\nconfusion (rows: truth, columns: predicted)\n" << pad_right("truth\\pred", first);
  for (const auto& l : m.column_labels) out << "  " << pad_left(l, width);
  out << '\n';
  for (std::size_t i = 0; i < m.row_labels.size(); ++i) {
    out << pad_right(m.row_labels[i], first);
    for (auto c : m.counts[i]) out << "  " << pad_left(std::to_string(c), width);
    out << '\n';
  }
}

void check(std::ostream& sink) {
  if (!sink) throw Error(ErrorKind::kIo, "report write failed");
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "tabular") return ReportFormat::kTabular;
  if (name == "structured" || name == "json") return ReportFormat::kStructured;
  throw Error(ErrorKind::kInvalidArgument, "unknown report format '" + std::string(name) + "'");
}

void write_report(const EvalReport& report, std::ostream& sink, ReportFormat format) {
  if (format == ReportFormat::kStructured) {
    sink << to_json(report).dump(2) << '\n';
  } else {
    write_tabular(report, sink);
  }
  check(sink);
}

EvalReport read_report(std::istream& source) {
  json doc = json::parse(source, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kParse, "malformed report: not a JSON object");
  }
  return from_json(doc);
}

void write_comparison(const EvalReport& basic, const EvalReport& advanced, std::ostream& sink,
                      ReportFormat format) {
  const double d_std = advanced.accuracy_standard - basic.accuracy_standard;
  const double d_tol = advanced.accuracy_neutral_tolerant - basic.accuracy_neutral_tolerant;
  const double d_conf = advanced.per_step_mean_conflict - basic.per_step_mean_conflict;
  const double d_err = advanced.conflict_weighted_error - basic.conflict_weighted_error;
  if (format == ReportFormat::kStructured) {
    json doc;
    doc["basic"] = to_json(basic);
    doc["advanced"] = to_json(advanced);
    doc["delta"] = {{"accuracy_standard", d_std},
                    {"accuracy_neutral_tolerant", d_tol},
                    {"per_step_mean_conflict", d_conf},
                    {"conflict_weighted_error", d_err}};
    sink << doc.dump(2) << '\n';
  } else {
    write_tabular(basic, sink);
    sink << '\n';
    write_tabular(advanced, sink);
    sink << "\ndelta (advanced - basic)\n"
         << "accuracy_standard          " << signed_fixed(d_std) << '\n'
         << "accuracy_neutral_tolerant  " << signed_fixed(d_tol) << '\n'
         << "per_step_mean_conflict     " << signed_fixed(d_conf) << '\n'
         << "conflict_weighted_error    " << signed_fixed(d_err) << '\n';
  }
  check(sink);
}

}  // namespace evfuse
