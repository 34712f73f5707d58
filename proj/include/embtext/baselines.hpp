#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "embtext/corpus.hpp"
#include "embtext/error.hpp"
#include "embtext/losses.hpp"

namespace embtext {

// Sparse feature vector: (token id, value) pairs sorted by id.
using SparseVec = std::vector<std::pair<std::int32_t, double>>;

inline SparseVec term_counts(const std::vector<std::string>& tokens,
                             const Vocabulary& vocab) {
  std::map<std::int32_t, double> acc;
  for (const auto& tok : tokens) {
    std::int32_t id = vocab.id(tok);
    if (id >= 0) acc[id] += 1.0;
  }
  return {acc.begin(), acc.end()};
}

// ---------------------------------------------------------------------------
// tf-idf
// ---------------------------------------------------------------------------

enum class TfIdfScope { entire_corpus, train_only };

// Smoothed idf: idf(t) = ln((1 + N) / (1 + df(t))) + 1, strictly positive.
// fit_scope records which protocol produced the weights: entire_corpus fits
// over combined train and test documents, train_only is the leakage-free
// alternative.
class TfIdfModel {
 public:
  static TfIdfModel fit(const std::vector<std::vector<std::string>>& docs,
                        TfIdfScope scope);

  SparseVec transform(const std::vector<std::string>& tokens) const {
    SparseVec counts = term_counts(tokens, vocab_);
    for (auto& [id, value] : counts) value *= idf_[static_cast<std::size_t>(id)];
    return counts;
  }

  const Vocabulary& vocab() const { return vocab_; }
  double idf(std::int32_t id) const { return idf_[static_cast<std::size_t>(id)]; }
  TfIdfScope fit_scope() const { return scope_; }

 private:
  Vocabulary vocab_;
  std::vector<double> idf_;
  TfIdfScope scope_ = TfIdfScope::entire_corpus;
};

inline TfIdfModel TfIdfModel::fit(const std::vector<std::vector<std::string>>& docs,
                                  TfIdfScope scope) {
  if (docs.empty()) throw DataError("tf-idf fit needs a non-empty corpus");
  TfIdfModel model;
  model.scope_ = scope;
  model.vocab_ = Vocabulary::build(docs, 1);
  std::vector<std::int64_t> df(model.vocab_.size(), 0);
  for (const auto& doc : docs) {
    std::vector<std::int32_t> ids = model.vocab_.encode(doc);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::int32_t id : ids) ++df[static_cast<std::size_t>(id)];
  }
  const double n = static_cast<double>(docs.size());
  model.idf_.resize(model.vocab_.size());
  for (std::size_t t = 0; t < model.idf_.size(); ++t)
    model.idf_[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[t]))) + 1.0;
  return model;
}

// ---------------------------------------------------------------------------
// Multinomial naive Bayes with Laplace smoothing (alpha = 1) over raw counts
// ---------------------------------------------------------------------------

class NaiveBayesModel {
 public:
  static NaiveBayesModel train(const std::vector<SparseVec>& docs,
                               const std::vector<int>& labels, std::size_t n_classes,
                               std::size_t vocab_size) {
    if (docs.empty() || docs.size() != labels.size())
      throw DataError("naive Bayes needs matching non-empty docs and labels");
    NaiveBayesModel model;
    model.log_likelihood_.assign(n_classes, std::vector<double>(vocab_size));
    std::vector<double> class_docs(n_classes, 0.0);
    std::vector<std::vector<double>> counts(n_classes, std::vector<double>(vocab_size, 0.0));
    std::vector<double> totals(n_classes, 0.0);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      int y = labels[i];
      if (y < 0 || static_cast<std::size_t>(y) >= n_classes)
        throw DataError("label index out of range");
      class_docs[static_cast<std::size_t>(y)] += 1.0;
      for (const auto& [id, value] : docs[i]) {
        counts[static_cast<std::size_t>(y)][static_cast<std::size_t>(id)] += value;
        totals[static_cast<std::size_t>(y)] += value;
      }
    }
    model.log_prior_.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (class_docs[c] == 0.0)
        throw DataError("naive Bayes needs at least one document per class");
      model.log_prior_[c] = std::log(class_docs[c] / static_cast<double>(docs.size()));
      double denom = totals[c] + static_cast<double>(vocab_size);
      for (std::size_t t = 0; t < vocab_size; ++t)
        model.log_likelihood_[c][t] = std::log((counts[c][t] + 1.0) / denom);
    }
    return model;
  }

  // Posterior over classes; an empty document yields the priors.
  std::vector<double> predict(const SparseVec& doc) const {
    std::vector<double> scores(log_prior_);
    for (std::size_t c = 0; c < scores.size(); ++c)
      for (const auto& [id, value] : doc)
        scores[c] += value * log_likelihood_[c][static_cast<std::size_t>(id)];
    return softmax(scores);
  }

  const std::vector<double>& log_prior() const { return log_prior_; }
  const std::vector<std::vector<double>>& log_likelihood() const { return log_likelihood_; }

 private:
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> log_likelihood_;
};

// ---------------------------------------------------------------------------
// L2-regularized multinomial logistic regression on tf-idf features.
// MAP estimate under a Gaussian prior: loss = sum_i CE_i + (lambda/2)||W||^2.
// ---------------------------------------------------------------------------

struct LogRegConfig {
  double l2_lambda = 1.0;
  int epochs = 500;
  double lr = 0.5;            // step size on the mean-scaled gradient
  double grad_tol = 1e-5;     // stop when ||grad||_inf of the full loss < tol
};

class LogRegModel {
 public:
  static LogRegModel train(const std::vector<SparseVec>& docs,
                           const std::vector<int>& labels, std::size_t n_classes,
                           std::size_t vocab_size, const LogRegConfig& cfg = {});

  std::vector<double> predict(const SparseVec& doc) const {
    std::vector<double> logits(weights_.size(), 0.0);
    for (std::size_t c = 0; c < weights_.size(); ++c)
      for (const auto& [id, value] : doc)
        logits[c] += weights_[c][static_cast<std::size_t>(id)] * value;
    return softmax(logits);
  }

  const std::vector<std::vector<double>>& weights() const { return weights_; }
  double l2_lambda() const { return l2_lambda_; }

 private:
  std::vector<std::vector<double>> weights_;  // K x V
  double l2_lambda_ = 1.0;
};

// Full loss and gradient at W; shared by training and the gradient tests.
inline double logreg_loss_grad(const std::vector<std::vector<double>>& w,
                               const std::vector<SparseVec>& docs,
                               const std::vector<int>& labels, double l2_lambda,
                               std::vector<std::vector<double>>* grad_out) {
  const std::size_t k = w.size();
  const std::size_t v = w[0].size();
  double loss = 0.0;
  if (grad_out) {
    grad_out->assign(k, std::vector<double>(v, 0.0));
  }
  std::vector<double> logits(k);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::fill(logits.begin(), logits.end(), 0.0);
    for (std::size_t c = 0; c < k; ++c)
      for (const auto& [id, value] : docs[i])
        logits[c] += w[c][static_cast<std::size_t>(id)] * value;
    std::vector<double> p = softmax(logits);
    loss += -std::log(std::max(p[static_cast<std::size_t>(labels[i])], 1e-300));
    if (grad_out) {
      for (std::size_t c = 0; c < k; ++c) {
        double err = p[c] - (static_cast<int>(c) == labels[i] ? 1.0 : 0.0);
        for (const auto& [id, value] : docs[i])
          (*grad_out)[c][static_cast<std::size_t>(id)] += err * value;
      }
    }
  }
  double sq = 0.0;
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t t = 0; t < v; ++t) {
      sq += w[c][t] * w[c][t];
      if (grad_out) (*grad_out)[c][t] += l2_lambda * w[c][t];
    }
  return loss + 0.5 * l2_lambda * sq;
}

inline LogRegModel LogRegModel::train(const std::vector<SparseVec>& docs,
                                      const std::vector<int>& labels,
                                      std::size_t n_classes, std::size_t vocab_size,
                                      const LogRegConfig& cfg) {
  if (docs.empty() || docs.size() != labels.size())
    throw DataError("logistic regression needs matching non-empty docs and labels");
  std::vector<bool> seen(n_classes, false);
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes)
      throw DataError("label index out of range");
    seen[static_cast<std::size_t>(y)] = true;
  }
  for (std::size_t c = 0; c < n_classes; ++c)
    if (!seen[c]) throw DataError("logistic regression needs at least one document per class");

  LogRegModel model;
  model.l2_lambda_ = cfg.l2_lambda;
  model.weights_.assign(n_classes, std::vector<double>(vocab_size, 0.0));
  const double inv_n = 1.0 / static_cast<double>(docs.size());

  std::vector<std::vector<double>> grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss = logreg_loss_grad(model.weights_, docs, labels, cfg.l2_lambda, &grad);
    if (!std::isfinite(loss))
      throw NumericError("logistic regression diverged: non-finite loss at epoch " +
                         std::to_string(epoch));
    double max_grad = 0.0;
    for (const auto& row : grad)
      for (double g : row) max_grad = std::max(max_grad, std::abs(g));
    if (max_grad < cfg.grad_tol) break;
    for (std::size_t c = 0; c < n_classes; ++c)
      for (std::size_t t = 0; t < vocab_size; ++t)
        model.weights_[c][t] -= cfg.lr * inv_n * grad[c][t];
  }
  return model;
}

}  // namespace embtext
