// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "evfuse/commands.hpp"
#include "evfuse/error.hpp"
#include "evfuse/fusion.hpp"
#include "evfuse/metrics.hpp"
#include "evfuse/records.hpp"
#include "evfuse/simulate.hpp"
#include "support/generators.hpp"

using namespace evfuse;
using evfuse::testing::Gen;
using evfuse::testing::max_abs_diff;
using evfuse::testing::sum;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Accumulates failures for one criterion; the first few are kept verbatim.
class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& text) { detail_ += (detail_.empty() ? "" : ", ") + text; }

  bool passed() const { return failures_ == 0 && checks_ > 0; }
  std::string summary() const {
    std::string s = std::to_string(checks_) + " checks";
    if (!detail_.empty()) s += ", " + detail_;
    if (failures_) s += ", " + std::to_string(failures_) + " failed: " + notes_;
    return s;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string notes_;
  std::string detail_;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const Modality kA = Modality::audio();
const Modality kV = Modality::video();
const Modality kT = Modality::text();

// ds_combine vs the enumeration oracle: >= 1000 pairs per K in 2..10,
// max abs error < 1e-12, under 10 s.
Verdict oracle_equivalence() {
  Verdict v;
  Gen gen(1);
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::size_t k = 2; k <= 10; ++k) {
    for (int i = 0; i < 1000; ++i) {
      const Opinion m1 = gen.opinion(k);
      const Opinion m2 = gen.opinion(k);
      const Combined fast = ds_combine(m1, m2);
      const Combined slow = ds_combine_oracle(m1, m2);
      const double err = std::max({max_abs_diff(fast.opinion.beliefs, slow.opinion.beliefs),
                                   std::abs(fast.opinion.uncertainty - slow.opinion.uncertainty),
                                   std::abs(fast.conflict - slow.conflict)});
      worst = std::max(worst, err);
      v.require(err < 1e-12, "K=" + std::to_string(k) + " err " + num(err));
    }
  }
  const double elapsed = seconds_since(start);
  v.require(elapsed < 10.0, "runtime " + num(elapsed) + " s");
  v.note("max err " + num(worst) + ", " + num(elapsed) + " s");
  return v;
}

// {a:[2,0.5,-1], v:[1,0,1]} under advanced mitigation, each value within 1e-9.
Verdict worked_example() {
  Verdict v;
  const FusionResult r =
      fuse_record({{kA, {2.0, 0.5, -1.0}}, {kV, {1.0, 0.0, 1.0}}}, Mitigation::kAdvanced);
  const Vector b{0.466667, 0.2, 0.133333};
  const Vector b_exact{7.0 / 15, 1.0 / 5, 2.0 / 15};
  const Vector p{8.0 / 15, 4.0 / 15, 3.0 / 15};
  // The quoted beliefs carry six decimals; the exact thirds are checked at 1e-9.
  v.require(max_abs_diff(r.fused.beliefs, b) <= 5e-7, "b vs quoted");
  v.require(max_abs_diff(r.fused.beliefs, b_exact) <= 1e-9, "b");
  v.require(std::abs(r.fused.uncertainty - 0.2) <= 1e-9, "u");
  v.require(max_abs_diff(r.probabilities, p) <= 1e-9, "p");
  v.require(r.conflict_trace.size() == 1 && std::abs(r.conflict_trace[0] - 0.25) <= 1e-9, "c");
  return v;
}

// Randomised invariants, >= 10,000 cases each.
Verdict invariant_suite() {
  Verdict v;
  Gen gen(3);
  constexpr int kCases = 10000;
  for (int i = 0; i < kCases; ++i) {
    const std::size_t k = gen.index(2, 10);
    const Opinion m1 = gen.opinion(k);
    const Opinion m2 = gen.opinion(k);
    const Opinion m3 = gen.opinion(k);

    const Combined c12 = ds_combine(m1, m2);
    const Combined c21 = ds_combine(m2, m1);
    v.require(max_abs_diff(c12.opinion.beliefs, c21.opinion.beliefs) <= 1e-12 &&
                  std::abs(c12.opinion.uncertainty - c21.opinion.uncertainty) <= 1e-12,
              "commutativity");
    const Opinion left = ds_combine(c12.opinion, m3).opinion;
    const Opinion right = ds_combine(m1, ds_combine(m2, m3).opinion).opinion;
    v.require(max_abs_diff(left.beliefs, right.beliefs) <= 1e-9 &&
                  std::abs(left.uncertainty - right.uncertainty) <= 1e-9,
              "associativity");
    v.require(c12.opinion.uncertainty <= std::min(m1.uncertainty, m2.uncertainty) + 1e-12,
              "uncertainty contraction");
    v.require(c12.conflict >= 0.0 &&
                  c12.conflict <= (1 - m1.uncertainty) * (1 - m2.uncertainty) + 1e-15,
              "conflict bound");
    v.require(ds_combine(m1, Opinion::vacuous(k)).opinion == m1 &&
                  ds_combine(Opinion::vacuous(k), m1).opinion == m1,
              "vacuous identity");

    // Arbitrary chain, up to 100 opinions.
    Opinion acc = gen.opinion(k);
    const std::size_t len = gen.index(1, 100);
    for (std::size_t j = 0; j < len; ++j) acc = ds_combine(acc, gen.opinion(k)).opinion;
    v.require(std::abs(sum(acc.beliefs) + acc.uncertainty - 1.0) <= 1e-9, "chain normalisation");

    // Records: probability normalisation and translation invariance.
    LogitSet rec;
    for (const Modality& m : {kA, kV, kT}) {
      if (rec.empty() || gen.chance(0.7)) rec[m] = gen.logits(k, -8, 8);
    }
    const FusionResult r = fuse_record(rec, Mitigation::kAdvanced);
    v.require(std::abs(sum(r.probabilities) - 1.0) <= 1e-9, "sum p");
    v.require(std::abs(sum(fuse_record(rec, Mitigation::kBasic).probabilities) - 1.0) <= 1e-9,
              "sum p basic");
    const double shift = gen.uniform(-100, 100);
    LogitSet moved = rec;
    for (auto& [m, l] : moved)
      for (auto& x : l) x += shift;
    const FusionResult rm = fuse_record(moved, Mitigation::kAdvanced);
    v.require(max_abs_diff(r.probabilities, rm.probabilities) <= 1e-12, "translation invariance");
  }
  v.note(std::to_string(kCases) + " cases");
  return v;
}

// Omitting absent modalities == supplying them as vacuous, bit for bit.
Verdict missing_modality() {
  Verdict v;
  const LabelTaxonomy tax = LabelTaxonomy::default_taxonomy();
  SimulationConfig sim;
  sim.records = 5000;
  sim.seed = 4;
  for (auto& [m, p] : sim.profiles) p.dropout = 0.4;
  std::size_t with_gaps = 0;
  for (const LogitRecord& rec : simulate_records(sim, tax)) {
    with_gaps += rec.logits.size() < 3;
    for (Mitigation mode : {Mitigation::kBasic, Mitigation::kAdvanced}) {
      const FusionResult present = fuse_record(rec.logits, mode);
      const EvidenceSet evidence = compute_evidence(rec.logits, mode);
      ModalityOpinions padded;
      for (const Modality& m : default_fusion_order()) {
        auto it = evidence.find(m);
        padded.emplace_back(m, it == evidence.end() ? Opinion::vacuous(tax.size())
                                                    : evidence_to_opinion(it->second));
      }
      const FusionResult full = fuse_sequence(padded);
      v.require(present.fused == full.fused && present.probabilities == full.probabilities &&
                    present.dirichlet.alpha == full.dirichlet.alpha &&
                    present.dirichlet.strength == full.dirichlet.strength,
                "record " + rec.id);
    }
  }
  v.note(std::to_string(with_gaps) + " records with absent modalities");
  return v;
}

// Hand-counted fixtures; tolerant >= standard; matrix cross-check.
Verdict metrics_fixtures() {
  Verdict v;
  const LabelTaxonomy tax = LabelTaxonomy::default_taxonomy();
  auto pred = [&](const std::string& id, std::size_t cls) {
    Vector p(tax.size(), 0.0);
    p[cls] = 1.0;
    return Prediction::from_probabilities(id, p, 0.5);
  };
  auto truth = [&](const std::string& id, const std::string& label) {
    return LabeledTruth{id, tax.resolve(label)};
  };
  // 2 exact (anger, joy), 1 neutral fallback (anger), 1 wrong (sadness -> joy).
  const std::vector<Prediction> preds{pred("r1", 0), pred("r2", 3), pred("r3", 4),
                                      pred("r4", 3)};
  const std::vector<LabeledTruth> truths{truth("r1", "anger"), truth("r2", "joy"),
                                         truth("r3", "anger"), truth("r4", "sadness")};
  v.require(accuracy_neutral_tolerant(preds, truths, tax) == 0.75, "tolerant 0.75");
  v.require(accuracy_standard(preds, truths, tax) == 0.5, "standard 0.5");
  const std::vector<Prediction> three{pred("a", 0), pred("b", 3), pred("c", 5), pred("d", 0)};
  const std::vector<LabeledTruth> three_t{truth("a", "anger"), truth("b", "joy"),
                                          truth("c", "sadness"), truth("d", "fear")};
  v.require(accuracy_standard(three, three_t, tax) == 0.75, "3 of 4");

  Gen gen(5);
  const std::vector<std::string> labels{"anger",   "disgust",  "fear",     "joy", "neutral",
                                        "sadness", "surprise", "contempt", "calm"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Prediction> p;
    std::vector<LabeledTruth> t;
    const std::size_t n = gen.index(0, 50);
    for (std::size_t i = 0; i < n; ++i) {
      p.push_back(pred("r" + std::to_string(i), gen.index(0, 6)));
      t.push_back(truth("r" + std::to_string(i), labels[gen.index(0, labels.size() - 1)]));
    }
    for (bool exclude : {false, true}) {
      const double s = accuracy_standard(p, t, tax, {exclude});
      const double tol = accuracy_neutral_tolerant(p, t, tax, {exclude});
      v.require(tol >= s, "tolerant >= standard");
      const Accuracies a = accuracies_from_confusion(confusion(p, t, tax), tax, {exclude});
      v.require(a.standard == s && a.neutral_tolerant == tol, "confusion cross-check");
    }
  }
  return v;
}

// Simulated contempt-truth stream with weak logits: fallback rate computable,
// contempt appears as a truth row only.
Verdict unseen_label_pipeline() {
  Verdict v;
  const LabelTaxonomy tax = LabelTaxonomy::default_taxonomy();
  RunConfig config;
  config.seed = 6;
  config.simulation.records = 500;
  config.simulation.unseen_rate = 1.0;
  config.simulation.unseen_label = "contempt";
  for (auto& [m, p] : config.simulation.profiles) {
    p.noise = 0.3;
    p.neutral_bias = 0.5;
  }
  std::ostringstream sim, diag;
  cmd_simulate(config, tax, sim, diag);
  std::istringstream in(sim.str());
  config.format = ReportFormat::kStructured;
  std::ostringstream report_text;
  const std::vector<Input> inputs{{"contempt", &in}};
  const int status = cmd_evaluate(config, tax, inputs, report_text, diag);
  v.require(status == kExitOk, "evaluate status");
  std::istringstream report_in(report_text.str());
  const EvalReport report = read_report(report_in);
  const auto row = report.confusion.row_of("contempt");
  v.require(row.has_value() && *row >= tax.size(), "contempt truth row");
  v.require(row && report.confusion.row_total(*row) == 500, "row total");
  v.require(std::find(report.confusion.column_labels.begin(), report.confusion.column_labels.end(),
                      "contempt") == report.confusion.column_labels.end(),
            "contempt not predictable");
  const auto it = report.fallback_rates.find("contempt");
  v.require(it != report.fallback_rates.end() && it->second >= 0.0 && it->second <= 1.0,
            "fallback rate");
  v.require(report.accuracy_standard == 0.0, "unseen never standard-correct");
  if (it != report.fallback_rates.end()) v.note("fallback rate " + num(it->second));
  return v;
}

// Brute-force argmax on random sequences up to 10,000 frames; fixtures exact.
Verdict frame_selection() {
  Verdict v;
  v.require(select_best_frame({"d", {{0, {0.1, 0.9}}, {5, {0.2, 0.3}}, {10, {0.95, 0.1}}}, 1}) ==
                FrameChoice{10, 0.95},
            "derived example");
  v.require(select_best_frame({"t", {{3, {0.7}}, {8, {0.7}}}, 1}) == FrameChoice{3, 0.7},
            "tie-break");
  v.require(select_best_frame({"s", {{0, {9.}}, {1, {1.}}, {2, {8.}}, {3, {2.}}, {4, {7.}}}, 2}) ==
                FrameChoice{3, 2.0},
            "stride 2");
  try {
    select_best_frame({"short", {{0, {1.0}}}, 5});
    v.require(false, "stride > length must fail");
  } catch (const Error& e) {
    v.require(e.kind() == ErrorKind::kNoCandidateFrames, "stride > length kind");
  }

  Gen gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    FrameScoreSequence seq;
    seq.stride = gen.index(1, 6);
    const std::size_t n = trial < 10 ? 10000 : gen.index(seq.stride, 2000);
    const std::size_t width = gen.index(1, 8);
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Vector s(width);
      for (auto& x : s) x = std::round(gen.uniform(-40, 40)) / 8.0;
      seq.frames.push_back({index, s});
      index += gen.index(1, 4);
    }
    v.require(select_best_frame(seq) == *evfuse::testing::brute_force_best_frame(seq),
              "random sequence");
  }
  return v;
}

// cmd_fuse over 100,000 simulated K=7 records: byte-identical across runs and
// worker counts, each run under 5 s.
Verdict determinism_throughput() {
  Verdict v;
  const LabelTaxonomy tax = LabelTaxonomy::default_taxonomy();
  RunConfig sim_config;
  sim_config.seed = 8;
  sim_config.simulation.records = 100000;
  sim_config.simulation.profiles[kT].dropout = 0.2;
  std::ostringstream sim, diag;
  cmd_simulate(sim_config, tax, sim, diag);
  const std::string records = sim.str();

  std::string first;
  double slowest = 0.0;
  for (std::size_t workers : {1u, 1u, 2u, 4u}) {
    RunConfig config;
    config.workers = workers;
    std::istringstream in(records);
    const std::vector<Input> inputs{{"sim", &in}};
    std::ostringstream out;
    const auto start = Clock::now();
    const int status = cmd_fuse(config, tax, inputs, out, diag);
    const double elapsed = seconds_since(start);
    slowest = std::max(slowest, elapsed);
    v.require(status == kExitOk, "status");
    v.require(elapsed < 5.0, "workers=" + std::to_string(workers) + " took " + num(elapsed) + " s");
    if (first.empty()) {
      first = out.str();
      v.require(std::count(first.begin(), first.end(), '\n') == 100000, "line count");
    } else {
      v.require(out.str() == first, "bytes differ at workers=" + std::to_string(workers));
    }
  }
  v.note("slowest run " + num(slowest) + " s");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"oracle equivalence (K=2..10, 1000 pairs each, < 1e-12, < 10 s)", oracle_equivalence},
      {"worked example golden (1e-9)", worked_example},
      {"invariant suite (10,000 randomised cases)", invariant_suite},
      {"missing-modality identity (bit-identical)", missing_modality},
      {"metrics fixtures and confusion cross-check", metrics_fixtures},
      {"unseen-label pipeline (contempt)", unseen_label_pipeline},
      {"frame selection vs brute force", frame_selection},
      {"determinism and throughput (100,000 records, < 5 s)", determinism_throughput},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict verdict;
    try {
      verdict = criteria[i].second();
    } catch (const std::exception& e) {
      verdict.require(false, std::string("exception: ") + e.what());
    }
    failed += !verdict.passed();
    std::printf("%s  [%zu] %s  (%s)\n", verdict.passed() ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), verdict.summary().c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
