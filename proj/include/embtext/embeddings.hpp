#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "embtext/corpus.hpp"
#include "embtext/error.hpp"
#include "embtext/huffman.hpp"
#include "embtext/matrix.hpp"
#include "embtext/rng.hpp"
#include "embtext/sampling.hpp"
#include "embtext/subword.hpp"
#include "embtext/vecio.hpp"

namespace embtext {

enum class ModelType { cbow, skipgram };
enum class LossType { hierarchical_softmax, negative_sampling };

struct EmbeddingConfig {
  ModelType model = ModelType::skipgram;
  LossType loss = LossType::negative_sampling;
  int dim = 200;
  int window = 5;
  int epochs = 5;
  double lr0 = 0.0;     // 0 = default: 0.025 skip-gram, 0.05 CBOW
  double lr_min = 0.0;  // 0 = default: 1e-4 * lr0
  int negatives = 5;
  double subsample_t = 1e-3;  // <= 0 disables subsampling during training
  std::size_t table_size = 10'000'000;
  bool use_subwords = false;
  NGramConfig ngrams;
  int workers = 1;
  std::uint64_t seed = 1;

  double resolved_lr0() const {
    if (lr0 > 0.0) return lr0;
    return model == ModelType::cbow ? 0.05 : 0.025;
  }
  double resolved_lr_min() const { return lr_min > 0.0 ? lr_min : 1e-4 * resolved_lr0(); }

  void validate() const {
    if (dim < 1) throw DataError("embedding dim must be >= 1");
    if (window < 1) throw DataError("context window must be >= 1");
    if (epochs < 1) throw DataError("epochs must be >= 1");
    if (workers < 1) throw DataError("workers must be >= 1");
    if (loss == LossType::negative_sampling && negatives < 1)
      throw DataError("negative sampling needs negatives >= 1");
    if (!(resolved_lr0() > resolved_lr_min() && resolved_lr_min() > 0.0))
      throw DataError("learning rates must satisfy lr0 > lr_min > 0");
    if (use_subwords) ngrams.validate();
  }
};

struct TrainProgress {
  int epoch = 0;           // 0-based, reported at epoch end
  std::int64_t tokens = 0; // tokens processed so far
  double lr = 0.0;         // learning rate after those tokens
  double loss = 0.0;       // mean sampled loss over the epoch
};

using TrainLogger = std::function<void(const TrainProgress&)>;

// Encoded corpus: one id sequence per document, out-of-vocabulary dropped.
using Corpus = std::vector<std::vector<std::int32_t>>;

inline Corpus encode_corpus(const std::vector<std::vector<std::string>>& docs,
                            const Vocabulary& vocab) {
  Corpus out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(vocab.encode(doc));
  return out;
}

struct EmbeddingModel {
  EmbeddingConfig config;
  Vocabulary vocab;
  Matrix input;   // (V + B) x dim; rows 0..V-1 words, V.. subword buckets
  Matrix output;  // V-1 x dim for hierarchical softmax, V x dim for negative sampling

  // Per word id: the matrix rows composing its vector (own row first, then
  // n-gram buckets). Single-entry rows when subwords are disabled.
  std::vector<std::vector<std::int32_t>> word_rows;

  std::size_t bucket_count() const {
    return config.use_subwords ? static_cast<std::size_t>(config.ngrams.buckets) : 0;
  }

  // Composed vector of an in-vocabulary word.
  std::vector<float> word_vector(std::int32_t id) const {
    return mean_of_rows(input, word_rows[static_cast<std::size_t>(id)]);
  }

  // Vector for any word: vocabulary lookup, or subword imputation when
  // enabled. Throws for out-of-vocabulary words without subwords.
  std::vector<float> vector_for(std::string_view word) const {
    std::int32_t id = vocab.id(word);
    if (id >= 0) return word_vector(id);
    if (!config.use_subwords)
      throw DataError("unknown word without subword fallback: " + std::string(word));
    return compose_vector(input, vocab, word, config.ngrams);
  }
};

namespace detail {

inline float sigmoidf(float x) { return 1.0f / (1.0f + std::exp(-x)); }

struct EmbTrainState {
  const Corpus* corpus;
  const Vocabulary* vocab;
  EmbeddingConfig cfg;
  Matrix* input;
  Matrix* output;
  const std::vector<std::vector<std::int32_t>>* word_rows;
  const HuffmanCoding* huffman = nullptr;
  const UnigramTable* table = nullptr;
  std::vector<double> keep_prob;  // per word id; empty when subsampling off

  std::int64_t scheduled = 0;
  std::atomic<std::int64_t> processed{0};
  double lr0 = 0.0, lr_min = 0.0;
};

// One worker's pass over its shard (docs with index % workers == worker).
// Single-worker runs are bit-reproducible; multi-worker runs update shared
// matrices without locks and are only statistically reproducible.
inline void run_embedding_worker(EmbTrainState& st, int worker, int workers,
                                 const TrainLogger& logger) {
  const int dim = st.cfg.dim;
  const std::size_t udim = static_cast<std::size_t>(dim);
  Rng rng(st.cfg.seed * 0x9e3779b9ull + static_cast<std::uint64_t>(worker) * 0xda3e39cb94b95bdbull);
  std::vector<float> hidden(udim), neu1e(udim);
  std::vector<std::int32_t> sent;
  std::uint64_t track_counter = 0;

  // accumulate loss for every 16th center word; diagnostics only
  auto tracked = [&]() { return (track_counter++ & 15u) == 0; };

  // objective terms for one center word given hidden vector v; returns the
  // (optionally tracked) loss and fills neu1e with the accumulated hidden
  // gradient step
  auto train_targets = [&](std::int32_t center, const float* v, float lr,
                           bool track) -> double {
    double loss = 0.0;
    std::fill(neu1e.begin(), neu1e.end(), 0.0f);
    if (st.cfg.loss == LossType::negative_sampling) {
      for (int k = 0; k <= st.cfg.negatives; ++k) {
        std::int32_t target;
        float label;
        if (k == 0) {
          target = center;
          label = 1.0f;
        } else {
          target = st.table->sample_excluding(rng, center);
          label = 0.0f;
        }
        float* u = st.output->row(static_cast<std::size_t>(target));
        float f = dot(u, v, udim);
        if (!std::isfinite(f))
          throw NumericError("non-finite activation during embedding training");
        float s = sigmoidf(f);
        float g = lr * (label - s);
        if (track)
          loss += label > 0.5f ? -std::log(std::max(1e-10f, s))
                               : -std::log(std::max(1e-10f, 1.0f - s));
        axpy(g, u, neu1e.data(), udim);
        axpy(g, v, u, udim);
      }
    } else {
      const auto& code = st.huffman->codes[static_cast<std::size_t>(center)];
      const auto& path = st.huffman->paths[static_cast<std::size_t>(center)];
      for (std::size_t j = 0; j < code.size(); ++j) {
        float* u = st.output->row(static_cast<std::size_t>(path[j]));
        float f = dot(u, v, udim);
        if (!std::isfinite(f))
          throw NumericError("non-finite activation during embedding training");
        float s = sigmoidf(f);
        float g = lr * (1.0f - static_cast<float>(code[j]) - s);
        if (track) {
          float p = code[j] ? 1.0f - s : s;
          loss += -std::log(std::max(1e-10f, p));
        }
        axpy(g, u, neu1e.data(), udim);
        axpy(g, v, u, udim);
      }
    }
    return loss;
  };

  // scale * neu1e into every row composing the word
  auto apply_to_word = [&](std::int32_t word, float scale) {
    const auto& rows = (*st.word_rows)[static_cast<std::size_t>(word)];
    float s = scale / static_cast<float>(rows.size());
    for (std::int32_t r : rows) axpy(s, neu1e.data(), st.input->row(static_cast<std::size_t>(r)), udim);
  };

  for (int epoch = 0; epoch < st.cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::int64_t epoch_loss_count = 0;
    double lr = st.lr0;

    for (std::size_t d = static_cast<std::size_t>(worker); d < st.corpus->size();
         d += static_cast<std::size_t>(workers)) {
      const auto& doc = (*st.corpus)[d];
      if (doc.empty()) continue;

      sent.clear();
      for (std::int32_t w : doc) {
        if (st.keep_prob.empty() ||
            rng.next_double() < st.keep_prob[static_cast<std::size_t>(w)])
          sent.push_back(w);
      }
      std::int64_t done =
          st.processed.fetch_add(static_cast<std::int64_t>(doc.size()),
                                 std::memory_order_relaxed) +
          static_cast<std::int64_t>(doc.size());
      lr = std::max(st.lr_min,
                    st.lr0 * (1.0 - static_cast<double>(done) /
                                        static_cast<double>(st.scheduled)));

      for (std::size_t i = 0; i < sent.size(); ++i) {
        const std::int32_t center = sent[i];
        const std::size_t b = 1 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(st.cfg.window)));
        const std::size_t lo = i >= b ? i - b : 0;
        const std::size_t hi = std::min(sent.size() - 1, i + b);
        const bool track = tracked();
        const float flr = static_cast<float>(lr);

        if (st.cfg.model == ModelType::cbow) {
          // hidden = mean over context words of their composed vectors
          std::size_t ctx = 0;
          for (std::size_t j = lo; j <= hi; ++j)
            if (j != i) ++ctx;
          if (ctx == 0) continue;
          std::fill(hidden.begin(), hidden.end(), 0.0f);
          for (std::size_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            const auto& rows = (*st.word_rows)[static_cast<std::size_t>(sent[j])];
            float s = 1.0f / (static_cast<float>(ctx) * static_cast<float>(rows.size()));
            for (std::int32_t r : rows)
              axpy(s, st.input->row(static_cast<std::size_t>(r)), hidden.data(), udim);
          }
          double l = train_targets(center, hidden.data(), flr, track);
          for (std::size_t j = lo; j <= hi; ++j)
            if (j != i) apply_to_word(sent[j], 1.0f);
          if (track) {
            epoch_loss += l;
            ++epoch_loss_count;
          }
        } else {
          // skip-gram: hidden = composed vector of one context word,
          // target = the center word
          for (std::size_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            const auto& rows = (*st.word_rows)[static_cast<std::size_t>(sent[j])];
            const float* v;
            if (rows.size() == 1) {
              v = st.input->row(static_cast<std::size_t>(rows[0]));
            } else {
              std::fill(hidden.begin(), hidden.end(), 0.0f);
              float s = 1.0f / static_cast<float>(rows.size());
              for (std::int32_t r : rows)
                axpy(s, st.input->row(static_cast<std::size_t>(r)), hidden.data(), udim);
              v = hidden.data();
            }
            double l = train_targets(center, v, flr, track);
            apply_to_word(sent[j], 1.0f);
            if (track) {
              epoch_loss += l;
              ++epoch_loss_count;
            }
          }
        }
      }
    }

    if (worker == 0 && logger) {
      TrainProgress p;
      p.epoch = epoch;
      p.tokens = st.processed.load(std::memory_order_relaxed);
      p.lr = lr;
      p.loss = epoch_loss_count ? epoch_loss / static_cast<double>(epoch_loss_count) : 0.0;
      logger(p);
    }
  }
}

}  // namespace detail

// Trains word vectors with SGD over the encoded corpus. Input vectors start
// uniform in (-0.5/dim, 0.5/dim), output vectors at zero; the learning rate
// decays linearly from lr0 to lr_min over epochs * corpus tokens; the
// effective window per center word is uniform in {1..window}.
inline EmbeddingModel train_embeddings(const Corpus& corpus, const Vocabulary& vocab,
                                       const EmbeddingConfig& cfg,
                                       const TrainLogger& logger = {}) {
  cfg.validate();
  std::int64_t corpus_tokens = 0;
  for (const auto& doc : corpus) corpus_tokens += static_cast<std::int64_t>(doc.size());
  if (corpus_tokens == 0) throw DataError("empty corpus: no in-vocabulary tokens to train on");

  EmbeddingModel model;
  model.config = cfg;
  model.vocab = vocab;
  const std::size_t v = vocab.size();
  const std::size_t buckets = model.bucket_count();

  model.word_rows.resize(v);
  for (std::size_t w = 0; w < v; ++w) {
    auto& rows = model.word_rows[w];
    rows.push_back(static_cast<std::int32_t>(w));
    if (cfg.use_subwords)
      for (std::int32_t r :
           ngram_rows(vocab.token(static_cast<std::int32_t>(w)), cfg.ngrams,
                      static_cast<std::int32_t>(v)))
        rows.push_back(r);
  }

  Rng init_rng(cfg.seed);
  model.input = Matrix(v + buckets, static_cast<std::size_t>(cfg.dim));
  float bound = 0.5f / static_cast<float>(cfg.dim);
  model.input.fill_uniform(init_rng, -bound, bound);

  std::optional<HuffmanCoding> huffman;
  std::optional<UnigramTable> table;
  if (cfg.loss == LossType::hierarchical_softmax) {
    huffman.emplace(build_huffman(vocab));
    model.output = Matrix(v - 1, static_cast<std::size_t>(cfg.dim));
  } else {
    table.emplace(vocab, 0.75, cfg.table_size);
    model.output = Matrix(v, static_cast<std::size_t>(cfg.dim));
  }

  detail::EmbTrainState st;
  st.corpus = &corpus;
  st.vocab = &vocab;
  st.cfg = cfg;
  st.input = &model.input;
  st.output = &model.output;
  st.word_rows = &model.word_rows;
  st.huffman = huffman ? &*huffman : nullptr;
  st.table = table ? &*table : nullptr;
  st.scheduled = corpus_tokens * cfg.epochs;
  st.lr0 = cfg.resolved_lr0();
  st.lr_min = cfg.resolved_lr_min();
  if (cfg.subsample_t > 0.0) {
    SubsampleConfig sub{cfg.subsample_t};
    st.keep_prob.resize(v);
    for (std::size_t w = 0; w < v; ++w)
      st.keep_prob[w] = keep_probability(vocab.count(static_cast<std::int32_t>(w)),
                                         vocab.total_tokens(), sub);
  }

  if (cfg.workers == 1) {
    detail::run_embedding_worker(st, 0, 1, logger);
  } else {
    std::vector<std::thread> threads;
    std::exception_ptr err;
    std::mutex err_mutex;
    for (int w = 0; w < cfg.workers; ++w)
      threads.emplace_back([&, w] {
        try {
          detail::run_embedding_worker(st, w, cfg.workers, logger);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      });
    for (auto& t : threads) t.join();
    if (err) std::rethrow_exception(err);
  }

  if (!model.input.all_finite() || !model.output.all_finite())
    throw NumericError("embedding training produced non-finite weights");
  return model;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::pair<std::string, float>> rank_by_cosine(
    const EmbeddingModel& model, std::span<const float> query,
    const std::vector<std::int32_t>& exclude, int k) {
  std::vector<std::pair<float, std::int32_t>> scored;
  scored.reserve(model.vocab.size());
  for (std::size_t w = 0; w < model.vocab.size(); ++w) {
    std::int32_t id = static_cast<std::int32_t>(w);
    bool skip = false;
    for (std::int32_t e : exclude) skip = skip || (e == id);
    if (skip) continue;
    std::vector<float> vec = model.word_vector(id);
    scored.emplace_back(static_cast<float>(cosine(query, vec)), id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;  // tie-break by word id
  });
  std::vector<std::pair<std::string, float>> out;
  for (std::size_t i = 0; i < scored.size() && i < static_cast<std::size_t>(k); ++i)
    out.emplace_back(model.vocab.token(scored[i].second), scored[i].first);
  return out;
}

}  // namespace detail

// k nearest vocabulary words by cosine similarity; the query word itself is
// excluded, ties broken by word id.
inline std::vector<std::pair<std::string, float>> nearest(const EmbeddingModel& model,
                                                          std::string_view word, int k) {
  std::vector<float> q = model.vector_for(word);
  std::vector<std::int32_t> exclude;
  if (std::int32_t id = model.vocab.id(word); id >= 0) exclude.push_back(id);
  return detail::rank_by_cosine(model, q, exclude, k);
}

// Ranks the vocabulary by cosine to (v_b - v_a + v_c), excluding a, b, c.
inline std::vector<std::pair<std::string, float>> analogy(const EmbeddingModel& model,
                                                          std::string_view a,
                                                          std::string_view b,
                                                          std::string_view c, int k) {
  std::vector<float> va = model.vector_for(a);
  std::vector<float> vb = model.vector_for(b);
  std::vector<float> vc = model.vector_for(c);
  std::vector<float> q(va.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = vb[i] - va[i] + vc[i];
  std::vector<std::int32_t> exclude;
  for (auto word : {a, b, c})
    if (std::int32_t id = model.vocab.id(word); id >= 0) exclude.push_back(id);
  return detail::rank_by_cosine(model, q, exclude, k);
}

// Composed word vectors as an interchange set (subword buckets folded in).
inline VectorSet export_vectors(const EmbeddingModel& model,
                                std::string source = "trained") {
  VectorSet set;
  set.source = std::move(source);
  set.tokens.reserve(model.vocab.size());
  set.vectors = Matrix(model.vocab.size(), static_cast<std::size_t>(model.config.dim));
  for (std::size_t w = 0; w < model.vocab.size(); ++w) {
    set.tokens.push_back(model.vocab.token(static_cast<std::int32_t>(w)));
    std::vector<float> vec = model.word_vector(static_cast<std::int32_t>(w));
    std::copy(vec.begin(), vec.end(), set.vectors.row(w));
  }
  return set;
}

}  // namespace embtext
