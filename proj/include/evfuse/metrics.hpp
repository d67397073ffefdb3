#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evfuse/taxonomy.hpp"
#include "evfuse/types.hpp"

namespace evfuse {

struct Prediction {
  std::string record_id;
  std::size_t predicted_index = 0;
  Vector probabilities;
  double uncertainty = 1.0;

  /// predicted_index = argmax, lowest index on ties.
  static Prediction from_probabilities(std::string record_id, Vector probabilities,
                                       double uncertainty);
};

struct LabeledTruth {
  std::string record_id;
  Truth truth;
};

struct MetricOptions {
  // Drop unseen-truth records from both accuracies. By default they stay in
  // the denominator: always wrong under the standard metric, and credited by
  // the tolerant metric only when predicted neutral.
  bool exclude_unseen = false;
};

/// Rows are truth labels (taxonomy order, then unseen labels alphabetically),
/// columns are the taxonomy classes.
struct ConfusionMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<std::uint64_t>> counts;

  std::uint64_t total() const;
  std::uint64_t row_total(std::size_t row) const;
  // Returns nullopt for labels with no row.
  std::optional<std::size_t> row_of(std::string_view label) const;

  bool operator==(const ConfusionMatrix&) const = default;
};

double accuracy_standard(std::span<const Prediction> preds,
                         std::span<const LabeledTruth> truths,
                         const LabelTaxonomy& taxonomy, const MetricOptions& options = {});

double accuracy_neutral_tolerant(std::span<const Prediction> preds,
                                 std::span<const LabeledTruth> truths,
                                 const LabelTaxonomy& taxonomy,
                                 const MetricOptions& options = {});

ConfusionMatrix confusion(std::span<const Prediction> preds,
                          std::span<const LabeledTruth> truths,
                          const LabelTaxonomy& taxonomy);

/// Fraction of records whose truth is `label` that were predicted neutral.
/// Throws kLabelAbsent when no record carries that truth.
double fallback_rate(std::span<const Prediction> preds, std::span<const LabeledTruth> truths,
                     const LabelTaxonomy& taxonomy, std::string_view label);

struct Accuracies {
  double standard;
  double neutral_tolerant;
};

/// Both accuracies recomputed from confusion counts alone.
Accuracies accuracies_from_confusion(const ConfusionMatrix& matrix,
                                     const LabelTaxonomy& taxonomy,
                                     const MetricOptions& options = {});

struct EvalReport {
  std::string mode;
  std::vector<std::string> classes;
  ConfusionMatrix confusion;
  double accuracy_standard = 0.0;
  double accuracy_neutral_tolerant = 0.0;
  std::uint64_t n_records = 0;
  // Mean conflict factor over every pairwise combination step of every record.
  double per_step_mean_conflict = 0.0;
  // sum_r w_r (1 - p_r[truth]) / sum_r w_r over seen-truth records, with
  // w_r = 1 + the record's mean step conflict. Zero without seen truths.
  double conflict_weighted_error = 0.0;
  std::map<std::string, double> fallback_rates;  // per unseen truth label
  bool exclude_unseen = false;

  bool operator==(const EvalReport&) const = default;
};

/// Per-record inputs to a report. `conflicts` is the record's conflict trace.
struct EvaluatedRecord {
  Prediction prediction;
  LabeledTruth truth;
  std::vector<double> conflicts;
};

/// Aggregates records into a report and cross-checks the accuracies against
/// the confusion matrix (throws on disagreement).
EvalReport build_report(std::span<const EvaluatedRecord> records, const LabelTaxonomy& taxonomy,
                        std::string mode, const MetricOptions& options = {});

}  // namespace evfuse
