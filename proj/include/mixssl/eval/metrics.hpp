#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mixssl/core/tensor.hpp"
#include "mixssl/data/dataset.hpp"
#include "mixssl/nn/model.hpp"

namespace mixssl::eval {

// Class-probability rows (each summing to 1), argmax predictions (ties broken
// towards the lowest class index) and ground truth.
struct PredictionSet {
  TensorD scores;  // (n, classes)
  std::vector<int> predicted;
  std::vector<int> truth;

  static PredictionSet from_scores(TensorD scores, std::vector<int> truth);

  int64_t size() const { return static_cast<int64_t>(truth.size()); }
  int classes() const { return scores.rank() == 2 ? static_cast<int>(scores.dim(1)) : 0; }
  void validate() const;
};

struct MetricsReport {
  std::string run_name;
  std::string task;  // "binary" or "multiclass"
  int class_count = 0;
  std::map<int, double> per_class_accuracy;  // percent, classes present in truth
  double average_accuracy = 0.0;             // unweighted mean over classes (percent)
  double overall_accuracy = 0.0;             // sample-weighted (percent)
  double precision = 0.0;                    // percent; binary: positive class, else macro
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> roc_auc;  // percent, binary only
  std::string metadata;           // run manifest reference

  std::string to_json() const;
  static MetricsReport from_json(const std::string& text);
  std::string to_csv() const;  // header + one row
};

// Top-1 accuracy per class (percent) plus the unweighted average over classes
// that appear in the truth; absent classes are excluded with a warning.
std::pair<std::map<int, double>, double> per_class_accuracy(const PredictionSet& preds);

double overall_accuracy(const PredictionSet& preds);

// Binary precision/recall/F1 for the given positive class (percent).
// Conventions: precision 0 with no positive predictions, recall 0 with no
// positive truths, f1 0 when p + r == 0.
std::tuple<double, double, double> precision_recall_f1(const PredictionSet& preds,
                                                       int positive_class);

// Macro average of one-vs-rest precision/recall/F1 over all classes.
std::tuple<double, double, double> macro_precision_recall_f1(const PredictionSet& preds);

// Mann-Whitney ROC-AUC (percent): fraction of (positive, negative) pairs the
// positive outscores, ties at half credit. Throws InvalidInput unless both
// classes are present.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& truth);

// (fpr, tpr) staircase for plotting.
std::vector<std::pair<double, double>> roc_points(const std::vector<double>& scores,
                                                  const std::vector<int>& truth);

struct EvalOptions {
  int64_t batch_size = 64;
  int positive_class = 1;  // binary tasks
  std::string run_name;
  std::string metadata;
};

// Deterministic eval-mode inference over the dataset followed by the full
// applicable metric set (ROC-AUC only for 2-class tasks).
MetricsReport evaluate_bundle(nn::ModelBundleF& bundle, const data::Dataset& dataset,
                              const EvalOptions& options = {});
MetricsReport evaluate(const std::filesystem::path& checkpoint_dir, const data::Dataset& dataset,
                       const EvalOptions& options = {});

// Also returns the raw predictions (for ROC plots).
MetricsReport evaluate_bundle(nn::ModelBundleF& bundle, const data::Dataset& dataset,
                              const EvalOptions& options, PredictionSet* predictions);

struct ComparisonRow {
  std::string name;
  double accuracy = 0.0;  // class-average for multiclass, overall for binary
  double delta = 0.0;     // percentage points vs baseline
  bool is_baseline = false;
  bool has_metrics = true;
  MetricsReport report;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  // sorted by accuracy descending
  std::string baseline_name;

  std::string to_text() const;
  std::string to_csv() const;
};

// Table-1-style comparison: per-run accuracy with the delta against the named
// baseline in percentage points, e.g. "92.19 (+5.90)".
ComparisonTable compare_runs(const std::vector<MetricsReport>& reports,
                             const std::string& baseline_name);

std::string format_accuracy_with_delta(double accuracy, double delta, bool is_baseline);

}  // namespace mixssl::eval
