#include "mixssl/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mixssl/core/errors.hpp"
#include "mixssl/core/log.hpp"
#include "mixssl/data/augment.hpp"
#include "mixssl/nn/checkpoint.hpp"

namespace fs = std::filesystem;

namespace mixssl::eval {

PredictionSet PredictionSet::from_scores(TensorD scores, std::vector<int> truth) {
  PredictionSet p;
  p.scores = std::move(scores);
  p.truth = std::move(truth);
  if (p.scores.rank() != 2) throw InvalidInput("scores must be (n, classes)");
  const int64_t n = p.scores.dim(0), k = p.scores.dim(1);
  if (static_cast<int64_t>(p.truth.size()) != n) {
    throw InvalidInput("truth length does not match score rows");
  }
  p.predicted.resize(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const double* row = p.scores.data() + i * k;
    int best = 0;
    for (int64_t j = 1; j < k; ++j) {
      if (row[j] > row[best]) best = static_cast<int>(j);  // ties keep the lowest index
    }
    p.predicted[static_cast<size_t>(i)] = best;
  }
  p.validate();
  return p;
}

void PredictionSet::validate() const {
  const int64_t n = scores.dim(0), k = scores.dim(1);
  if (k < 2) throw InvalidInput("prediction set needs at least 2 classes");
  for (int64_t i = 0; i < n; ++i) {
    const double* row = scores.data() + i * k;
    double sum = 0.0;
    for (int64_t j = 0; j < k; ++j) {
      if (!(row[j] >= -1e-9)) throw InvalidInput("negative class probability");
      sum += row[j];
    }
    if (std::fabs(sum - 1.0) > 1e-6) {
      throw InvalidInput("score row " + std::to_string(i) + " does not sum to 1");
    }
  }
  for (int t : truth) {
    if (t < 0 || t >= k) throw InvalidInput("truth label out of range");
  }
}

std::pair<std::map<int, double>, double> per_class_accuracy(const PredictionSet& preds) {
  const int k = preds.classes();
  std::vector<int64_t> correct(static_cast<size_t>(k)), total(static_cast<size_t>(k));
  for (size_t i = 0; i < preds.truth.size(); ++i) {
    const int t = preds.truth[i];
    total[static_cast<size_t>(t)]++;
    if (preds.predicted[i] == t) correct[static_cast<size_t>(t)]++;
  }
  std::map<int, double> per_class;
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < k; ++c) {
    if (total[static_cast<size_t>(c)] == 0) {
      log_warn("class " + std::to_string(c) + " absent from truth, excluded from average");
      continue;
    }
    const double acc = 100.0 * static_cast<double>(correct[static_cast<size_t>(c)]) /
                       static_cast<double>(total[static_cast<size_t>(c)]);
    per_class[c] = acc;
    sum += acc;
    ++present;
  }
  const double average = present > 0 ? sum / static_cast<double>(present) : 0.0;
  return {per_class, average};
}

double overall_accuracy(const PredictionSet& preds) {
  if (preds.truth.empty()) return 0.0;
  int64_t correct = 0;
  for (size_t i = 0; i < preds.truth.size(); ++i) {
    if (preds.predicted[i] == preds.truth[i]) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(preds.truth.size());
}

std::tuple<double, double, double> precision_recall_f1(const PredictionSet& preds,
                                                       int positive_class) {
  int64_t tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < preds.truth.size(); ++i) {
    const bool pred_pos = preds.predicted[i] == positive_class;
    const bool true_pos = preds.truth[i] == positive_class;
    if (pred_pos && true_pos) ++tp;
    if (pred_pos && !true_pos) ++fp;
    if (!pred_pos && true_pos) ++fn;
  }
  const double p = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  const double r = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  const double f1 = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  return {100.0 * p, 100.0 * r, 100.0 * f1};
}

std::tuple<double, double, double> macro_precision_recall_f1(const PredictionSet& preds) {
  const int k = preds.classes();
  double sp = 0.0, sr = 0.0, sf = 0.0;
  for (int c = 0; c < k; ++c) {
    const auto [p, r, f1] = precision_recall_f1(preds, c);
    sp += p;
    sr += r;
    sf += f1;
  }
  return {sp / k, sr / k, sf / k};
}

double roc_auc(const std::vector<double>& scores, const std::vector<int>& truth) {
  if (scores.size() != truth.size() || scores.empty()) {
    throw InvalidInput("roc_auc: scores and truth must be non-empty and equal length");
  }
  int64_t n_pos = 0, n_neg = 0;
  for (int t : truth) {
    if (t == 1) {
      ++n_pos;
    } else if (t == 0) {
      ++n_neg;
    } else {
      throw InvalidInput("roc_auc: truth must be binary 0/1");
    }
  }
  if (n_pos == 0 || n_neg == 0) {
    throw InvalidInput("roc_auc undefined: both classes must be present");
  }

  // Rank-sum formulation with average ranks on ties equals the pairwise
  // Mann-Whitney count with half credit for ties.
  std::vector<size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < idx.size()) {
    size_t j = i;
    while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);  // ranks are 1-based
    for (size_t t = i; t <= j; ++t) {
      if (truth[idx[t]] == 1) rank_sum_pos += avg_rank;
    }
    i = j + 1;
  }
  const double auc =
      (rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1)) /
      (static_cast<double>(n_pos) * static_cast<double>(n_neg));
  return 100.0 * auc;
}

std::vector<std::pair<double, double>> roc_points(const std::vector<double>& scores,
                                                  const std::vector<int>& truth) {
  std::vector<size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  int64_t n_pos = std::count(truth.begin(), truth.end(), 1);
  int64_t n_neg = static_cast<int64_t>(truth.size()) - n_pos;
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(0.0, 0.0);
  int64_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < idx.size()) {
    size_t j = i;
    while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    for (size_t t = i; t <= j; ++t) {
      if (truth[idx[t]] == 1) {
        ++tp;
      } else {
        ++fp;
      }
    }
    pts.emplace_back(n_neg > 0 ? static_cast<double>(fp) / static_cast<double>(n_neg) : 0.0,
                     n_pos > 0 ? static_cast<double>(tp) / static_cast<double>(n_pos) : 0.0);
    i = j + 1;
  }
  return pts;
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["run_name"] = run_name;
  j["task"] = task;
  j["class_count"] = class_count;
  nlohmann::json pc = nlohmann::json::object();
  for (const auto& [c, v] : per_class_accuracy) pc[std::to_string(c)] = v;
  j["per_class_accuracy"] = pc;
  j["average_accuracy"] = average_accuracy;
  j["overall_accuracy"] = overall_accuracy;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  if (roc_auc) j["roc_auc"] = *roc_auc;
  j["metadata"] = metadata;
  return j.dump(2);
}

MetricsReport MetricsReport::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("unparsable metrics report: " + std::string(e.what()));
  }
  MetricsReport r;
  r.run_name = j.value("run_name", "");
  r.task = j.value("task", "");
  r.class_count = j.value("class_count", 0);
  if (j.contains("per_class_accuracy")) {
    for (const auto& [k, v] : j.at("per_class_accuracy").items()) {
      r.per_class_accuracy[std::stoi(k)] = v.get<double>();
    }
  }
  r.average_accuracy = j.value("average_accuracy", 0.0);
  r.overall_accuracy = j.value("overall_accuracy", 0.0);
  r.precision = j.value("precision", 0.0);
  r.recall = j.value("recall", 0.0);
  r.f1 = j.value("f1", 0.0);
  if (j.contains("roc_auc")) r.roc_auc = j.at("roc_auc").get<double>();
  r.metadata = j.value("metadata", "");
  return r;
}

std::string MetricsReport::to_csv() const {
  std::ostringstream os;
  os << "run_name,task,class_count,average_accuracy,overall_accuracy,precision,recall,f1,roc_auc";
  for (const auto& [c, v] : per_class_accuracy) {
    (void)v;
    os << ",acc_class_" << c;
  }
  os << "\n";
  os << run_name << "," << task << "," << class_count << "," << average_accuracy << ","
     << overall_accuracy << "," << precision << "," << recall << "," << f1 << ","
     << (roc_auc ? std::to_string(*roc_auc) : "") ;
  for (const auto& [c, v] : per_class_accuracy) {
    (void)c;
    os << "," << v;
  }
  os << "\n";
  return os.str();
}

MetricsReport evaluate_bundle(nn::ModelBundleF& bundle, const data::Dataset& dataset,
                              const EvalOptions& options, PredictionSet* predictions) {
  if (!bundle.components.classifier) {
    throw IncompatibleCheckpoint("evaluate: checkpoint has no classifier head");
  }
  if (dataset.items.empty()) throw DataError("evaluate: dataset is empty");
  const int class_count = dataset.class_count();
  if (bundle.config.class_count && *bundle.config.class_count != class_count) {
    throw ConfigError("evaluate: class count mismatch between checkpoint (" +
                      std::to_string(*bundle.config.class_count) + ") and dataset (" +
                      std::to_string(class_count) + ")");
  }

  const int64_t n = dataset.size();
  TensorD scores({n, static_cast<int64_t>(class_count)});
  std::vector<int> truth(static_cast<size_t>(n));

  const int64_t bs = std::max<int64_t>(1, options.batch_size);
  for (int64_t start = 0; start < n; start += bs) {
    const int64_t count = std::min(bs, n - start);
    TensorF images({count, bundle.config.channels, bundle.config.image_h, bundle.config.image_w});
    const int64_t stride = images.numel() / count;
    for (int64_t i = 0; i < count; ++i) {
      const auto& item = dataset.items[static_cast<size_t>(start + i)];
      if (!item.label) throw DataError("evaluate: dataset has unlabeled items");
      truth[static_cast<size_t>(start + i)] = *item.label;
      const data::ImageTensor resized =
          data::resize_bilinear(item.image, bundle.config.image_h, bundle.config.image_w);
      std::memcpy(images.data() + i * stride, resized.pixels().data(),
                  static_cast<size_t>(stride) * sizeof(float));
    }
    const TensorF features = bundle.encode(images, /*training=*/false);
    const TensorF logits = bundle.classify(features, /*training=*/false);
    for (int64_t i = 0; i < count; ++i) {
      const float* row = logits.data() + i * class_count;
      double mx = row[0];
      for (int c = 1; c < class_count; ++c) mx = std::max(mx, static_cast<double>(row[c]));
      double denom = 0.0;
      for (int c = 0; c < class_count; ++c) denom += std::exp(static_cast<double>(row[c]) - mx);
      for (int c = 0; c < class_count; ++c) {
        scores(start + i, static_cast<int64_t>(c)) =
            std::exp(static_cast<double>(row[c]) - mx) / denom;
      }
    }
  }

  PredictionSet preds = PredictionSet::from_scores(std::move(scores), std::move(truth));

  MetricsReport report;
  report.run_name = options.run_name;
  report.metadata = options.metadata;
  report.class_count = class_count;
  report.task = class_count == 2 ? "binary" : "multiclass";
  auto [per_class, average] = per_class_accuracy(preds);
  report.per_class_accuracy = std::move(per_class);
  report.average_accuracy = average;
  report.overall_accuracy = overall_accuracy(preds);
  if (class_count == 2) {
    std::tie(report.precision, report.recall, report.f1) =
        precision_recall_f1(preds, options.positive_class);
    std::vector<double> pos_scores(static_cast<size_t>(preds.size()));
    for (int64_t i = 0; i < preds.size(); ++i) {
      pos_scores[static_cast<size_t>(i)] = preds.scores(i, static_cast<int64_t>(1));
    }
    std::vector<int> bin_truth = preds.truth;
    report.roc_auc = roc_auc(pos_scores, bin_truth);
  } else {
    std::tie(report.precision, report.recall, report.f1) = macro_precision_recall_f1(preds);
  }
  if (predictions) *predictions = std::move(preds);
  return report;
}

MetricsReport evaluate_bundle(nn::ModelBundleF& bundle, const data::Dataset& dataset,
                              const EvalOptions& options) {
  return evaluate_bundle(bundle, dataset, options, nullptr);
}

MetricsReport evaluate(const fs::path& checkpoint_dir, const data::Dataset& dataset,
                       const EvalOptions& options) {
  if (!nn::is_checkpoint_dir(checkpoint_dir)) {
    throw CheckpointError("checkpoint not found: " + checkpoint_dir.string());
  }
  nn::ModelBundleF bundle = nn::load_checkpoint(checkpoint_dir);
  return evaluate_bundle(bundle, dataset, options);
}

std::string format_accuracy_with_delta(double accuracy, double delta, bool is_baseline) {
  char buf[64];
  if (is_baseline) {
    std::snprintf(buf, sizeof(buf), "%.2f (-)", accuracy);
  } else {
    std::snprintf(buf, sizeof(buf), "%.2f (%+.2f)", accuracy, delta);
  }
  return buf;
}

ComparisonTable compare_runs(const std::vector<MetricsReport>& reports,
                             const std::string& baseline_name) {
  if (reports.empty()) throw InvalidInput("compare_runs: no reports");
  const std::string& task = reports.front().task;
  for (const auto& r : reports) {
    if (r.task != task || r.class_count != reports.front().class_count) {
      throw InvalidInput("compare_runs: reports do not share a task");
    }
  }
  auto accuracy_of = [&](const MetricsReport& r) {
    return task == "binary" ? r.overall_accuracy : r.average_accuracy;
  };

  const MetricsReport* baseline = nullptr;
  for (const auto& r : reports) {
    if (r.run_name == baseline_name) baseline = &r;
  }
  if (!baseline) throw ConfigError("compare_runs: baseline '" + baseline_name + "' not found");
  const double base_acc = accuracy_of(*baseline);

  ComparisonTable table;
  table.baseline_name = baseline_name;
  for (const auto& r : reports) {
    ComparisonRow row;
    row.name = r.run_name;
    row.accuracy = accuracy_of(r);
    row.delta = row.accuracy - base_acc;
    row.is_baseline = r.run_name == baseline_name;
    row.report = r;
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) {
                     return a.accuracy > b.accuracy;
                   });
  return table;
}

std::string ComparisonTable::to_text() const {
  size_t name_w = 4;
  for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
  std::ostringstream os;
  const bool binary = !rows.empty() && rows.front().report.task == "binary";
  os << std::string(name_w, ' ') << "  ";
  if (binary) os << "precision  recall     f1         roc-auc    ";
  os << "accuracy\n";
  for (const auto& r : rows) {
    os << r.name << std::string(name_w - r.name.size(), ' ') << "  ";
    if (!r.has_metrics) {
      os << "(no metrics)\n";
      continue;
    }
    char buf[64];
    if (binary) {
      std::snprintf(buf, sizeof(buf), "%-9.2f  ", r.report.precision);
      os << buf;
      std::snprintf(buf, sizeof(buf), "%-9.2f  ", r.report.recall);
      os << buf;
      std::snprintf(buf, sizeof(buf), "%-9.2f  ", r.report.f1);
      os << buf;
      std::snprintf(buf, sizeof(buf), "%-9.2f  ", r.report.roc_auc.value_or(0.0));
      os << buf;
    }
    os << format_accuracy_with_delta(r.accuracy, r.delta, r.is_baseline) << "\n";
  }
  return os.str();
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream os;
  os << "run,accuracy,delta_vs_baseline,precision,recall,f1,roc_auc\n";
  for (const auto& r : rows) {
    os << r.name << ",";
    if (r.has_metrics) {
      os << r.accuracy << "," << (r.is_baseline ? 0.0 : r.delta) << "," << r.report.precision
         << "," << r.report.recall << "," << r.report.f1 << ","
         << (r.report.roc_auc ? std::to_string(*r.report.roc_auc) : "");
    } else {
      os << ",,,,,";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace mixssl::eval
