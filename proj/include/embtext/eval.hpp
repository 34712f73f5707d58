#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "embtext/classifier.hpp"
#include "embtext/corpus.hpp"
#include "embtext/error.hpp"
#include "embtext/rng.hpp"

namespace embtext {

// ---------------------------------------------------------------------------
// Labeled dataset used by the evaluation harness
// ---------------------------------------------------------------------------

struct Dataset {
  std::vector<std::vector<std::string>> docs;
  std::vector<int> labels;  // indices into label_set
  LabelSet label_set;

  std::size_t size() const { return docs.size(); }

  static Dataset from(const std::vector<LabeledDoc>& labeled,
                      const std::optional<LabelSet>& label_set = {}) {
    Dataset ds;
    ds.label_set = label_set ? *label_set : LabelSet::from_docs(labeled);
    for (const auto& d : labeled) {
      ds.docs.push_back(d.tokens);
      ds.labels.push_back(ds.label_set.index_of(d.label));
    }
    return ds;
  }

  std::vector<LabeledDoc> to_labeled(std::span<const std::size_t> indices) const {
    std::vector<LabeledDoc> out;
    out.reserve(indices.size());
    for (std::size_t i : indices)
      out.push_back({label_set.names[static_cast<std::size_t>(labels[i])], docs[i]});
    return out;
  }
};

// ---------------------------------------------------------------------------
// Fold plans
// ---------------------------------------------------------------------------

struct FoldPlan {
  int k = 5;
  std::uint64_t seed = 0;
  bool stratified = true;
  std::vector<std::int32_t> assignment;  // doc index -> fold in [0, k)

  std::vector<std::size_t> train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] != fold) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] == fold) out.push_back(i);
    return out;
  }
};

// Within each class, indices are shuffled by the seed and dealt round-robin,
// so per-class fold sizes differ by at most one. The same plan must be
// reused for every model under comparison.
inline FoldPlan stratified_kfold(const std::vector<int>& labels, int k,
                                 std::uint64_t seed, bool stratified = true) {
  if (k < 2) throw DataError("cross-validation needs k >= 2");
  if (labels.empty()) throw DataError("cannot build folds for an empty dataset");
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.stratified = stratified;
  plan.assignment.assign(labels.size(), 0);
  Rng rng(seed);

  if (!stratified) {
    if (labels.size() < static_cast<std::size_t>(k))
      throw DataError("dataset smaller than fold count");
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t pos = 0; pos < order.size(); ++pos)
      plan.assignment[order[pos]] = static_cast<std::int32_t>(pos % static_cast<std::size_t>(k));
    return plan;
  }

  int n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) members.push_back(i);
    if (members.size() < static_cast<std::size_t>(k))
      throw DataError("class " + std::to_string(c) + " has " +
                      std::to_string(members.size()) + " members, fewer than k=" +
                      std::to_string(k));
    rng.shuffle(members);
    for (std::size_t pos = 0; pos < members.size(); ++pos)
      plan.assignment[members[pos]] =
          static_cast<std::int32_t>(pos % static_cast<std::size_t>(k));
  }
  return plan;
}

// ---------------------------------------------------------------------------
// ROC AUC (Mann-Whitney with 0.5 tie credit)
// ---------------------------------------------------------------------------

inline double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw DataError("roc_auc needs matching non-empty scores and labels");
  std::size_t pos = 0;
  for (int l : labels) pos += l ? 1 : 0;
  std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0)
    throw DataError("roc_auc undefined: needs at least one positive and one negative");

  // rank-sum with average ranks over tied groups; exact in doubles because
  // every intermediate value is a multiple of 0.5 well below 2^53
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t)
      if (labels[order[t]]) rank_sum_pos += avg_rank;
    i = j;
  }
  double p = static_cast<double>(pos);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

// A trained model reduced to its scoring function: tokens -> per-class
// probabilities in label-set order.
using Predictor = std::function<std::vector<double>(const std::vector<std::string>&)>;
using TrainerFactory = std::function<Predictor(const Dataset& train)>;

struct CVReport {
  std::vector<std::string> class_names;
  std::vector<std::vector<double>> auc;  // [class][fold]

  int folds() const { return auc.empty() ? 0 : static_cast<int>(auc[0].size()); }
  double mean(std::size_t c) const {
    const auto& row = auc[c];
    double s = 0.0;
    for (double x : row) s += x;
    return s / static_cast<double>(row.size());
  }
  double min(std::size_t c) const { return *std::min_element(auc[c].begin(), auc[c].end()); }
  double max(std::size_t c) const { return *std::max_element(auc[c].begin(), auc[c].end()); }
};

// Per fold: train on the complement, score the held-out docs, and compute
// one-vs-rest AUC per class from that class's predicted probability.
inline CVReport cross_validate(const TrainerFactory& factory, const Dataset& data,
                               const FoldPlan& plan) {
  if (plan.assignment.size() != data.size())
    throw DataError("fold plan does not match dataset size");
  CVReport report;
  report.class_names = data.label_set.names;
  report.auc.assign(data.label_set.size(), std::vector<double>(static_cast<std::size_t>(plan.k), 0.0));

  for (int fold = 0; fold < plan.k; ++fold) {
    std::vector<std::size_t> train_idx = plan.train_indices(fold);
    std::vector<std::size_t> test_idx = plan.test_indices(fold);
    Dataset train;
    train.label_set = data.label_set;
    for (std::size_t i : train_idx) {
      train.docs.push_back(data.docs[i]);
      train.labels.push_back(data.labels[i]);
    }
    Predictor predictor;
    try {
      predictor = factory(train);
    } catch (const std::exception& e) {
      throw DataError("fold " + std::to_string(fold) + ": " + e.what());
    }
    std::vector<std::vector<double>> probs(test_idx.size());
    for (std::size_t t = 0; t < test_idx.size(); ++t)
      probs[t] = predictor(data.docs[test_idx[t]]);

    for (std::size_t c = 0; c < data.label_set.size(); ++c) {
      std::vector<double> scores(test_idx.size());
      std::vector<int> binary(test_idx.size());
      for (std::size_t t = 0; t < test_idx.size(); ++t) {
        scores[t] = probs[t][c];
        binary[t] = data.labels[test_idx[t]] == static_cast<int>(c) ? 1 : 0;
      }
      report.auc[c][static_cast<std::size_t>(fold)] = roc_auc(scores, binary);
    }
  }
  return report;
}

// Per-document predicted probabilities on one fold's held-out docs, for every
// named model, under one shared plan.
struct FoldPredictions {
  int fold = 0;
  std::vector<std::size_t> doc_ids;  // dataset indices of held-out docs
  std::vector<std::string> model_names;
  std::vector<std::vector<std::vector<double>>> probs;  // [model][doc][class]
};

inline FoldPredictions collect_fold_predictions(
    const std::vector<std::pair<std::string, TrainerFactory>>& models,
    const Dataset& data, const FoldPlan& plan, int fold) {
  if (fold < 0 || fold >= plan.k) throw DataError("fold index out of range");
  FoldPredictions out;
  out.fold = fold;
  out.doc_ids = plan.test_indices(fold);
  std::vector<std::size_t> train_idx = plan.train_indices(fold);
  Dataset train;
  train.label_set = data.label_set;
  for (std::size_t i : train_idx) {
    train.docs.push_back(data.docs[i]);
    train.labels.push_back(data.labels[i]);
  }
  for (const auto& [name, factory] : models) {
    Predictor predictor = factory(train);
    std::vector<std::vector<double>> probs(out.doc_ids.size());
    for (std::size_t t = 0; t < out.doc_ids.size(); ++t)
      probs[t] = predictor(data.docs[out.doc_ids[t]]);
    out.model_names.push_back(name);
    out.probs.push_back(std::move(probs));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

// Percent with one decimal, rounded half-up on the decimal value; the tiny
// epsilon keeps decimal halves (e.g. 0.8855) from landing just below the
// boundary after binary storage.
inline std::string format_percent(double value) {
  double scaled = std::floor(value * 1000.0 + 0.5 + 1e-9) / 10.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", scaled);
  return buf;
}

// Table cell: mean then [min, max], e.g. "96.1% [95.6, 96.9]".
inline std::string format_auc_cell(double mean, double min, double max) {
  return format_percent(mean) + "% [" + format_percent(min) + ", " +
         format_percent(max) + "]";
}

// One row per model, one column per class.
inline std::string render_report(
    const std::vector<std::pair<std::string, CVReport>>& models) {
  if (models.empty()) return "";
  const auto& classes = models.front().second.class_names;
  std::vector<std::size_t> widths;
  widths.push_back(5);  // "Model"
  for (const auto& [name, report] : models) widths[0] = std::max(widths[0], name.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::size_t w = std::string("AUC ").size() + classes[c].size();
    for (const auto& [name, report] : models)
      w = std::max(w, format_auc_cell(report.mean(c), report.min(c), report.max(c)).size());
    widths.push_back(w);
  }
  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  std::string out = pad("Model", widths[0]);
  for (std::size_t c = 0; c < classes.size(); ++c)
    out += "  " + pad("AUC " + classes[c], widths[c + 1]);
  out += '\n';
  for (const auto& [name, report] : models) {
    out += pad(name, widths[0]);
    for (std::size_t c = 0; c < classes.size(); ++c)
      out += "  " + pad(format_auc_cell(report.mean(c), report.min(c), report.max(c)),
                        widths[c + 1]);
    out += '\n';
  }
  return out;
}

// Long format: model,class,fold,auc
inline std::string report_long_csv(
    const std::vector<std::pair<std::string, CVReport>>& models) {
  std::string out = "model,class,fold,auc\n";
  char buf[64];
  for (const auto& [name, report] : models)
    for (std::size_t c = 0; c < report.class_names.size(); ++c)
      for (int f = 0; f < report.folds(); ++f) {
        std::snprintf(buf, sizeof buf, "%.17g", report.auc[c][static_cast<std::size_t>(f)]);
        out += name + "," + report.class_names[c] + "," + std::to_string(f) + "," + buf + "\n";
      }
  return out;
}

inline std::string report_summary_csv(
    const std::vector<std::pair<std::string, CVReport>>& models) {
  std::string out = "model,class,mean_auc,min_auc,max_auc\n";
  char buf[128];
  for (const auto& [name, report] : models)
    for (std::size_t c = 0; c < report.class_names.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", report.mean(c), report.min(c),
                    report.max(c));
      out += name + "," + report.class_names[c] + "," + buf + "\n";
    }
  return out;
}

}  // namespace embtext
