#include "evfuse/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "evfuse/error.hpp"

namespace evfuse {
namespace {

// Pairs each prediction with its truth by record id.
std::vector<std::pair<const Prediction*, const Truth*>> align(
    std::span<const Prediction> preds, std::span<const LabeledTruth> truths,
    const LabelTaxonomy& taxonomy) {
  if (preds.size() != truths.size()) {
    throw Error(ErrorKind::kIdMismatch, "id mismatch: " + std::to_string(preds.size()) +
                                            " predictions vs " + std::to_string(truths.size()) +
                                            " truths");
  }
  std::unordered_map<std::string_view, const Truth*> by_id;
  by_id.reserve(truths.size());
  for (const auto& t : truths) {
    if (!by_id.emplace(t.record_id, &t.truth).second) {
      throw Error(ErrorKind::kIdMismatch, "id mismatch: duplicate truth id '" + t.record_id + "'");
    }
  }
  std::vector<std::pair<const Prediction*, const Truth*>> out;
  out.reserve(preds.size());
  std::set<std::string_view> used;
  for (const auto& p : preds) {
    auto it = by_id.find(p.record_id);
    if (it == by_id.end() || !used.insert(p.record_id).second) {
      throw Error(ErrorKind::kIdMismatch, "id mismatch: prediction '" + p.record_id + "'");
    }
    if (p.predicted_index >= taxonomy.size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "prediction '" + p.record_id + "' has out-of-range class index");
    }
    out.emplace_back(&p, it->second);
  }
  return out;
}

double ratio(std::uint64_t hits, std::uint64_t total) {
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double accuracy(std::span<const Prediction> preds, std::span<const LabeledTruth> truths,
                const LabelTaxonomy& taxonomy, const MetricOptions& options, bool tolerant) {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  for (const auto& [p, t] : align(preds, truths, taxonomy)) {
    if (!t->seen() && options.exclude_unseen) continue;
    ++total;
    const bool exact = t->class_index == p->predicted_index;
    const bool fallback = tolerant && p->predicted_index == taxonomy.neutral_index();
    if (exact || fallback) ++hits;
  }
  return ratio(hits, total);
}

}  // namespace

Prediction Prediction::from_probabilities(std::string record_id, Vector probabilities,
                                          double uncertainty) {
  if (probabilities.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "empty probability vector");
  }
  const auto best = std::max_element(probabilities.begin(), probabilities.end());
  const auto index = static_cast<std::size_t>(best - probabilities.begin());
  return {std::move(record_id), index, std::move(probabilities), uncertainty};
}

std::uint64_t ConfusionMatrix::row_total(std::size_t row) const {
  return std::accumulate(counts[row].begin(), counts[row].end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (std::size_t r = 0; r < counts.size(); ++r) sum += row_total(r);
  return sum;
}

std::optional<std::size_t> ConfusionMatrix::row_of(std::string_view label) const {
  auto it = std::find(row_labels.begin(), row_labels.end(), label);
  if (it == row_labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - row_labels.begin());
}

double accuracy_standard(std::span<const Prediction> preds, std::span<const LabeledTruth> truths,
                         const LabelTaxonomy& taxonomy, const MetricOptions& options) {
  return accuracy(preds, truths, taxonomy, options, /*tolerant=*/false);
}

double accuracy_neutral_tolerant(std::span<const Prediction> preds,
                                 std::span<const LabeledTruth> truths,
                                 const LabelTaxonomy& taxonomy, const MetricOptions& options) {
  return accuracy(preds, truths, taxonomy, options, /*tolerant=*/true);
}

ConfusionMatrix confusion(std::span<const Prediction> preds, std::span<const LabeledTruth> truths,
                          const LabelTaxonomy& taxonomy) {
  const auto pairs = align(preds, truths, taxonomy);
  std::set<std::string> unseen;
  for (const auto& [p, t] : pairs) {
    if (!t->seen()) unseen.insert(t->label);
  }
  ConfusionMatrix m;
  m.column_labels = taxonomy.classes();
  m.row_labels = taxonomy.classes();
  m.row_labels.insert(m.row_labels.end(), unseen.begin(), unseen.end());
  m.counts.assign(m.row_labels.size(), std::vector<std::uint64_t>(taxonomy.size(), 0));
  for (const auto& [p, t] : pairs) {
    const std::size_t row = t->seen() ? *t->class_index : *m.row_of(t->label);
    ++m.counts[row][p->predicted_index];
  }
  return m;
}

double fallback_rate(std::span<const Prediction> preds, std::span<const LabeledTruth> truths,
                     const LabelTaxonomy& taxonomy, std::string_view label) {
  const std::string wanted = normalize_label(label);
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  for (const auto& [p, t] : align(preds, truths, taxonomy)) {
    if (t->label != wanted) continue;
    ++total;
    if (p->predicted_index == taxonomy.neutral_index()) ++hits;
  }
  if (total == 0) {
    throw Error(ErrorKind::kLabelAbsent, "label absent: no record with truth '" + wanted + "'");
  }
  return ratio(hits, total);
}

Accuracies accuracies_from_confusion(const ConfusionMatrix& matrix, const LabelTaxonomy& taxonomy,
                                     const MetricOptions& options) {
  const std::size_t k = taxonomy.size();
  const std::size_t neutral = taxonomy.neutral_index();
  std::uint64_t exact = 0;
  std::uint64_t tolerant = 0;
  std::uint64_t total = 0;
  for (std::size_t r = 0; r < matrix.counts.size(); ++r) {
    const bool seen = r < k;
    if (!seen && options.exclude_unseen) continue;
    total += matrix.row_total(r);
    const std::uint64_t diagonal = seen ? matrix.counts[r][r] : 0;
    exact += diagonal;
    tolerant += diagonal + (r == neutral ? 0 : matrix.counts[r][neutral]);
  }
  return {ratio(exact, total), ratio(tolerant, total)};
}

EvalReport build_report(std::span<const EvaluatedRecord> records, const LabelTaxonomy& taxonomy,
                        std::string mode, const MetricOptions& options) {
  std::vector<Prediction> preds;
  std::vector<LabeledTruth> truths;
  preds.reserve(records.size());
  truths.reserve(records.size());
  for (const auto& r : records) {
    preds.push_back(r.prediction);
    truths.push_back(r.truth);
  }

  EvalReport report;
  report.mode = std::move(mode);
  report.classes = taxonomy.classes();
  report.exclude_unseen = options.exclude_unseen;
  report.n_records = records.size();
  report.confusion = confusion(preds, truths, taxonomy);
  report.accuracy_standard = accuracy_standard(preds, truths, taxonomy, options);
  report.accuracy_neutral_tolerant = accuracy_neutral_tolerant(preds, truths, taxonomy, options);

  const Accuracies check = accuracies_from_confusion(report.confusion, taxonomy, options);
  if (check.standard != report.accuracy_standard ||
      check.neutral_tolerant != report.accuracy_neutral_tolerant) {
    throw Error(ErrorKind::kInvalidArgument, "accuracy does not match confusion matrix");
  }

  double conflict_sum = 0.0;
  std::uint64_t steps = 0;
  double weighted_error = 0.0;
  double weight = 0.0;
  for (const auto& r : records) {
    const double c = std::accumulate(r.conflicts.begin(), r.conflicts.end(), 0.0);
    conflict_sum += c;
    steps += r.conflicts.size();
    if (!r.truth.truth.seen()) continue;
    const double mean_c = r.conflicts.empty() ? 0.0 : c / static_cast<double>(r.conflicts.size());
    const double p_truth = r.prediction.probabilities.at(*r.truth.truth.class_index);
    weighted_error += (1.0 + mean_c) * (1.0 - p_truth);
    weight += 1.0 + mean_c;
  }
  report.per_step_mean_conflict = steps == 0 ? 0.0 : conflict_sum / static_cast<double>(steps);
  report.conflict_weighted_error = weight > 0.0 ? weighted_error / weight : 0.0;

  for (std::size_t r = taxonomy.size(); r < report.confusion.row_labels.size(); ++r) {
    const std::string& label = report.confusion.row_labels[r];
    report.fallback_rates[label] = fallback_rate(preds, truths, taxonomy, label);
  }
  return report;
}

}  // namespace evfuse
