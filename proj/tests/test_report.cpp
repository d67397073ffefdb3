#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "evfuse/error.hpp"
#include "evfuse/report.hpp"
#include "support/golden.hpp"

using namespace evfuse;

namespace {
const LabelTaxonomy kTax = LabelTaxonomy::default_taxonomy();

EvaluatedRecord rec(const std::string& id, Vector probs, const std::string& label,
                    std::vector<double> conflicts) {
  return {Prediction::from_probabilities(id, std::move(probs), 0.25), {id, kTax.resolve(label)},
          std::move(conflicts)};
}

EvalReport fixture_report() {
  const std::vector<EvaluatedRecord> records{
      rec("a", {0.4, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1}, "anger", {0.1, 0.3}),
      rec("b", {0.1, 0.1, 0.1, 0.1, 0.4, 0.1, 0.1}, "happy", {0.2}),
      rec("c", {0.1, 0.1, 0.1, 0.1, 0.4, 0.1, 0.1}, "contempt", {0.05, 0.05}),
      rec("d", {0.1, 0.1, 0.1, 0.4, 0.1, 0.1, 0.1}, "calm", {}),
      rec("e", {0.1, 0.1, 0.1, 0.1, 0.1, 0.4, 0.1}, "sad", {0.7, 0.2}),
  };
  return build_report(records, kTax, "advanced");
}
}  // namespace

TEST_CASE("empty report is a valid zeroed document") {
  const EvalReport empty = build_report({}, kTax, "advanced");
  std::ostringstream json;
  write_report(empty, json, ReportFormat::kStructured);
  std::istringstream in(json.str());
  const EvalReport back = read_report(in);
  CHECK(back == empty);
  CHECK(back.n_records == 0);
  CHECK(back.confusion.total() == 0);

  std::ostringstream table;
  write_report(empty, table, ReportFormat::kTabular);
  CHECK(table.str().find("records                    0\n") != std::string::npos);
}

TEST_CASE("fixture report matches the frozen golden files") {
  const EvalReport report = fixture_report();
  CHECK(report.confusion.row_labels.back() == "contempt");
  CHECK(report.confusion.row_labels[7] == "calm");
  for (auto [format, name] : {std::pair{ReportFormat::kTabular, "report_fixture.txt"},
                              std::pair{ReportFormat::kStructured, "report_fixture.json"}}) {
    std::ostringstream out;
    write_report(report, out, format);
    std::ostringstream again;
    write_report(report, again, format);
    CHECK(out.str() == again.str());
    CHECK(evfuse::testing::matches_golden(name, out.str()));
  }
}

TEST_CASE("structured report round-trips losslessly") {
  EvalReport report = fixture_report();
  report.per_step_mean_conflict = 0.1 + 0.2;  // not exactly representable in decimal
  report.exclude_unseen = true;
  std::stringstream buf;
  write_report(report, buf, ReportFormat::kStructured);
  CHECK(read_report(buf) == report);

  std::istringstream bad("{\"mode\": 3}");
  CHECK_THROWS_AS(read_report(bad), Error);
  std::istringstream worse("nope");
  CHECK_THROWS_AS(read_report(worse), Error);
}

TEST_CASE("comparison output carries deltas") {
  const EvalReport adv = fixture_report();
  EvalReport basic = adv;
  basic.mode = "basic";
  basic.accuracy_standard -= 0.25;
  std::ostringstream table;
  write_comparison(basic, adv, table, ReportFormat::kTabular);
  CHECK(table.str().find("accuracy_standard          +0.250000") != std::string::npos);

  std::ostringstream json;
  write_comparison(basic, adv, json, ReportFormat::kStructured);
  CHECK(json.str().find("\"delta\"") != std::string::npos);
}

TEST_CASE("write failure is reported") {
  std::ofstream closed;
  CHECK_THROWS_AS(write_report(fixture_report(), closed, ReportFormat::kTabular), Error);
}
