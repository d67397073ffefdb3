#pragma once

#include <iosfwd>
#include <string_view>

#include "evfuse/metrics.hpp"

namespace evfuse {

enum class ReportFormat { kTabular, kStructured };

ReportFormat parse_report_format(std::string_view name);

/// Deterministic: identical reports produce identical bytes. The structured
/// form is JSON and round-trips through read_report.
void write_report(const EvalReport& report, std::ostream& sink, ReportFormat format);

EvalReport read_report(std::istream& source);

/// basic vs advanced side by side plus advanced-minus-basic deltas.
void write_comparison(const EvalReport& basic, const EvalReport& advanced, std::ostream& sink,
                      ReportFormat format);

}  // namespace evfuse
