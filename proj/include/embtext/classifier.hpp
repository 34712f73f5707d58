#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "embtext/corpus.hpp"
#include "embtext/embeddings.hpp"
#include "embtext/error.hpp"
#include "embtext/losses.hpp"
#include "embtext/matrix.hpp"
#include "embtext/subword.hpp"
#include "embtext/vecio.hpp"

namespace embtext {

// Ordered class names; the order defines class indices everywhere.
struct LabelSet {
  std::vector<std::string> names;

  std::size_t size() const { return names.size(); }

  static LabelSet from_names(std::vector<std::string> names) {
    LabelSet set{std::move(names)};
    std::set<std::string> uniq(set.names.begin(), set.names.end());
    if (uniq.size() != set.names.size()) throw DataError("duplicate label names");
    if (set.names.size() < 2) throw DataError("label set needs at least 2 classes");
    return set;
  }

  // Sorted unique labels so the same documents always yield the same order.
  static LabelSet from_docs(const std::vector<LabeledDoc>& docs) {
    std::set<std::string> uniq;
    for (const auto& d : docs) uniq.insert(d.label);
    return from_names({uniq.begin(), uniq.end()});
  }

  int index_of(std::string_view name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) return static_cast<int>(k);
    throw DataError("unknown label: " + std::string(name));
  }
};

struct ClassifierConfig {
  int dim = 200;  // 0 = inherit from pretrained vectors
  double lr0 = 0.1;
  double lr_min = 0.0;  // 0 = default: 1e-4 * lr0
  int epochs = 25;
  int min_count = 1;
  bool use_subwords = false;
  NGramConfig ngrams;
  bool freeze_embeddings = false;
  std::uint64_t seed = 1;

  double resolved_lr_min() const { return lr_min > 0.0 ? lr_min : 1e-4 * lr0; }
};

// Word-vector initializer for a classifier: exact-match lookup plus, when the
// source has subword buckets, imputation for missing words.
struct Pretrained {
  std::size_t dim = 0;
  std::function<std::optional<std::vector<float>>(std::string_view)> lookup;

  static Pretrained from(const VectorSet& set) {
    auto index = std::make_shared<std::unordered_map<std::string, std::size_t>>();
    for (std::size_t i = 0; i < set.tokens.size(); ++i) index->emplace(set.tokens[i], i);
    auto vectors = std::make_shared<Matrix>(set.vectors);
    Pretrained p;
    p.dim = set.dim();
    p.lookup = [index, vectors](std::string_view word) -> std::optional<std::vector<float>> {
      auto it = index->find(std::string(word));
      if (it == index->end()) return std::nullopt;
      auto row = vectors->row_span(it->second);
      return std::vector<float>(row.begin(), row.end());
    };
    return p;
  }

  static Pretrained from(std::shared_ptr<const EmbeddingModel> model) {
    Pretrained p;
    p.dim = static_cast<std::size_t>(model->config.dim);
    p.lookup = [model](std::string_view word) -> std::optional<std::vector<float>> {
      if (model->vocab.contains(word)) return model->vector_for(word);
      if (!model->config.use_subwords) return std::nullopt;
      return model->vector_for(word);  // subword imputation
    };
    return p;
  }
};

// Averaged-embedding linear classifier: mean of composed token vectors feeds
// a K x dim softmax layer with no bias term.
class TextClassifier {
 public:
  LabelSet labels;
  Vocabulary vocab;
  ClassifierConfig config;
  PreprocessConfig preprocess;
  Matrix embedding;  // (V + B) x dim
  Matrix output;     // K x dim

  std::size_t bucket_count() const {
    return config.use_subwords ? static_cast<std::size_t>(config.ngrams.buckets) : 0;
  }

  // Row lists composing each token's vector; out-of-vocabulary tokens
  // without subwords yield no rows and are skipped.
  std::vector<std::int32_t> token_rows(std::string_view token) const {
    std::vector<std::int32_t> rows;
    std::int32_t id = vocab.id(token);
    if (id >= 0) rows.push_back(id);
    if (config.use_subwords) {
      auto extra = ngram_rows(token, config.ngrams, static_cast<std::int32_t>(vocab.size()));
      rows.insert(rows.end(), extra.begin(), extra.end());
    }
    return rows;
  }

  // Mean of the composed vectors of all contributing tokens; an empty
  // contribution set yields the zero vector.
  std::vector<float> hidden(const std::vector<std::string>& tokens) const {
    std::vector<float> h(embedding.cols(), 0.0f);
    std::size_t contributors = 0;
    for (const auto& tok : tokens) {
      std::int32_t id = vocab.id(tok);
      if (id < 0 && !config.use_subwords) continue;  // skipped, not counted
      ++contributors;
      std::vector<std::int32_t> rows = token_rows(tok);
      if (rows.empty()) continue;  // zero composed vector still counts
      float s = 1.0f / static_cast<float>(rows.size());
      for (std::int32_t r : rows)
        axpy(s, embedding.row(static_cast<std::size_t>(r)), h.data(), embedding.cols());
    }
    if (contributors > 1) {
      float inv = 1.0f / static_cast<float>(contributors);
      for (float& x : h) x *= inv;
    }
    return h;
  }

  // Probability distribution over the label set; sums to 1 within 1e-6.
  std::vector<double> predict(const std::vector<std::string>& tokens) const {
    return predict_hidden(hidden(tokens));
  }

  std::vector<double> predict_hidden(const std::vector<float>& h) const {
    std::vector<double> logits(labels.size(), 0.0);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      double z = 0.0;
      const float* w = output.row(k);
      for (std::size_t i = 0; i < h.size(); ++i) z += static_cast<double>(w[i]) * h[i];
      logits[k] = z;
    }
    return softmax(logits);
  }

  void save(const std::filesystem::path& path) const;
  static TextClassifier load(const std::filesystem::path& path);
};

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

// Supervised training with softmax cross-entropy, no bias, linear learning
// rate decay. Deterministic for a fixed seed. Pretrained rows are copied
// exactly; words the pretrained source cannot resolve keep their uniform
// small-random initialization. freeze_embeddings restricts updates to the
// output matrix.
inline TextClassifier train_classifier(const std::vector<LabeledDoc>& docs,
                                       const ClassifierConfig& cfg_in,
                                       const std::optional<Pretrained>& pretrained = {},
                                       const std::optional<LabelSet>& label_set = {},
                                       const TrainLogger& logger = {}) {
  if (docs.empty()) throw DataError("empty training set");
  ClassifierConfig cfg = cfg_in;
  if (cfg.dim == 0) {
    if (!pretrained) throw DataError("dim = 0 requires pretrained vectors to inherit from");
    cfg.dim = static_cast<int>(pretrained->dim);
  }
  if (cfg.dim < 1) throw DataError("classifier dim must be >= 1");
  if (pretrained && pretrained->dim != static_cast<std::size_t>(cfg.dim))
    throw DataError("pretrained vector dimension " + std::to_string(pretrained->dim) +
                    " does not match classifier dim " + std::to_string(cfg.dim));
  if (cfg.use_subwords) cfg.ngrams.validate();

  TextClassifier model;
  model.config = cfg;
  model.labels = label_set ? *label_set : LabelSet::from_docs(docs);

  std::vector<int> targets(docs.size());
  std::vector<std::vector<std::string>> token_docs(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    targets[i] = model.labels.index_of(docs[i].label);  // throws on unknown label
    token_docs[i] = docs[i].tokens;
  }
  model.vocab = Vocabulary::build(token_docs, cfg.min_count);

  const std::size_t v = model.vocab.size();
  const std::size_t buckets = model.bucket_count();
  const std::size_t dim = static_cast<std::size_t>(cfg.dim);
  const std::size_t k = model.labels.size();

  Rng rng(cfg.seed);
  model.embedding = Matrix(v + buckets, dim);
  float bound = 0.5f / static_cast<float>(cfg.dim);
  model.embedding.fill_uniform(rng, -bound, bound);
  model.output = Matrix(k, dim);  // zero: untrained model predicts uniform 1/K

  if (pretrained) {
    for (std::size_t w = 0; w < v; ++w) {
      if (auto vec = pretrained->lookup(model.vocab.token(static_cast<std::int32_t>(w))))
        std::copy(vec->begin(), vec->end(), model.embedding.row(w));
    }
  }

  // encode once: per doc, the contributing tokens' row lists
  struct EncodedDoc {
    std::vector<std::vector<std::int32_t>> token_rows;
    std::int64_t raw_tokens = 0;
  };
  std::vector<EncodedDoc> encoded(docs.size());
  std::int64_t total_tokens = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    encoded[i].raw_tokens = static_cast<std::int64_t>(docs[i].tokens.size());
    total_tokens += encoded[i].raw_tokens;
    for (const auto& tok : docs[i].tokens) {
      std::int32_t id = model.vocab.id(tok);
      if (id < 0 && !cfg.use_subwords) continue;
      encoded[i].token_rows.push_back(model.token_rows(tok));
    }
  }
  if (total_tokens == 0) throw DataError("training documents contain no tokens");

  const double lr0 = cfg.lr0;
  const double lr_min = cfg.resolved_lr_min();
  const std::int64_t scheduled = total_tokens * cfg.epochs;
  std::int64_t processed = 0;

  std::vector<float> h(dim), ghidden(dim);
  std::vector<double> logits(k);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::int64_t epoch_docs = 0;
    double lr = lr0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      processed += encoded[i].raw_tokens;
      lr = std::max(lr_min, lr0 * (1.0 - static_cast<double>(processed) /
                                             static_cast<double>(scheduled)));
      const auto& rows_per_token = encoded[i].token_rows;
      const std::size_t t = rows_per_token.size();
      if (t == 0) continue;

      std::fill(h.begin(), h.end(), 0.0f);
      for (const auto& rows : rows_per_token) {
        if (rows.empty()) continue;
        float s = 1.0f / (static_cast<float>(t) * static_cast<float>(rows.size()));
        for (std::int32_t r : rows)
          axpy(s, model.embedding.row(static_cast<std::size_t>(r)), h.data(), dim);
      }

      for (std::size_t c = 0; c < k; ++c) {
        double z = 0.0;
        const float* w = model.output.row(c);
        for (std::size_t d = 0; d < dim; ++d) z += static_cast<double>(w[d]) * h[d];
        if (!std::isfinite(z))
          throw NumericError("non-finite logit during classifier training");
        logits[c] = z;
      }
      std::vector<double> p = softmax(logits);
      epoch_loss += -std::log(std::max(p[static_cast<std::size_t>(targets[i])], 1e-300));
      ++epoch_docs;

      // hidden gradient from pre-update output rows, then the row updates
      std::fill(ghidden.begin(), ghidden.end(), 0.0f);
      for (std::size_t c = 0; c < k; ++c) {
        float err = static_cast<float>(p[c] - (static_cast<int>(c) == targets[i] ? 1.0 : 0.0));
        axpy(err, model.output.row(c), ghidden.data(), dim);
      }
      for (std::size_t c = 0; c < k; ++c) {
        float err = static_cast<float>(p[c] - (static_cast<int>(c) == targets[i] ? 1.0 : 0.0));
        axpy(static_cast<float>(-lr) * err, h.data(), model.output.row(c), dim);
      }

      if (!cfg.freeze_embeddings) {
        for (const auto& rows : rows_per_token) {
          if (rows.empty()) continue;
          float s = static_cast<float>(-lr) /
                    (static_cast<float>(t) * static_cast<float>(rows.size()));
          for (std::int32_t r : rows)
            axpy(s, ghidden.data(), model.embedding.row(static_cast<std::size_t>(r)), dim);
        }
      }
    }
    if (logger) {
      TrainProgress prog;
      prog.epoch = epoch;
      prog.tokens = processed;
      prog.lr = lr;
      prog.loss = epoch_docs ? epoch_loss / static_cast<double>(epoch_docs) : 0.0;
      logger(prog);
    }
  }

  if (!model.embedding.all_finite() || !model.output.all_finite())
    throw NumericError("classifier training produced non-finite weights");
  return model;
}

// ---------------------------------------------------------------------------
// Model file: magic EMBCLS1\0, then little-endian u32 K, V, B, dim; K
// length-prefixed label names; the (V+B) x dim embedding matrix and K x dim
// output matrix as row-major float32. A token table (V length-prefixed
// strings + i64 counts) and a preprocessing/n-gram config block follow so a
// loaded file predicts standalone.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t x) {
  out.write(reinterpret_cast<const char*>(&x), 4);
}
inline void put_i64(std::ostream& out, std::int64_t x) {
  out.write(reinterpret_cast<const char*>(&x), 8);
}
inline void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
inline std::uint32_t get_u32(std::istream& in, const std::string& where) {
  std::uint32_t x = 0;
  if (!in.read(reinterpret_cast<char*>(&x), 4)) throw DataError(where + ": truncated");
  return x;
}
inline std::int64_t get_i64(std::istream& in, const std::string& where) {
  std::int64_t x = 0;
  if (!in.read(reinterpret_cast<char*>(&x), 8)) throw DataError(where + ": truncated");
  return x;
}
inline std::string get_string(std::istream& in, const std::string& where) {
  std::uint32_t len = get_u32(in, where);
  std::string s(len, '\0');
  if (!in.read(s.data(), len)) throw DataError(where + ": truncated");
  return s;
}
inline void put_matrix(std::ostream& out, const Matrix& m) {
  out.write(reinterpret_cast<const char*>(m.data().data()),
            static_cast<std::streamsize>(m.data().size() * sizeof(float)));
}
inline void get_matrix(std::istream& in, Matrix& m, const std::string& where) {
  if (!in.read(reinterpret_cast<char*>(m.data().data()),
               static_cast<std::streamsize>(m.data().size() * sizeof(float))))
    throw DataError(where + ": truncated matrix");
}

}  // namespace detail

inline void TextClassifier::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path.string());
  out.write("EMBCLS1\0", 8);
  detail::put_u32(out, static_cast<std::uint32_t>(labels.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(vocab.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(bucket_count()));
  detail::put_u32(out, static_cast<std::uint32_t>(config.dim));
  for (const auto& name : labels.names) detail::put_string(out, name);
  detail::put_matrix(out, embedding);
  detail::put_matrix(out, output);
  for (std::size_t w = 0; w < vocab.size(); ++w)
    detail::put_string(out, vocab.token(static_cast<std::int32_t>(w)));
  for (std::size_t w = 0; w < vocab.size(); ++w)
    detail::put_i64(out, vocab.count(static_cast<std::int32_t>(w)));
  out.put(preprocess.lowercase ? 1 : 0);
  out.put(preprocess.digit_policy == DigitPolicy::strip ? 1 : 0);
  out.put(config.use_subwords ? 1 : 0);
  detail::put_u32(out, static_cast<std::uint32_t>(config.ngrams.minn));
  detail::put_u32(out, static_cast<std::uint32_t>(config.ngrams.maxn));
  if (!out) throw DataError("write failed: " + path.string());
}

inline TextClassifier TextClassifier::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path.string());
  const std::string where = path.string();
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, "EMBCLS1\0", 8) != 0)
    throw DataError(where + ": not a classifier model file");
  std::uint32_t k = detail::get_u32(in, where);
  std::uint32_t v = detail::get_u32(in, where);
  std::uint32_t b = detail::get_u32(in, where);
  std::uint32_t dim = detail::get_u32(in, where);

  TextClassifier model;
  std::vector<std::string> names;
  for (std::uint32_t i = 0; i < k; ++i) names.push_back(detail::get_string(in, where));
  model.labels = LabelSet::from_names(std::move(names));
  model.embedding = Matrix(static_cast<std::size_t>(v) + b, dim);
  detail::get_matrix(in, model.embedding, where);
  model.output = Matrix(k, dim);
  detail::get_matrix(in, model.output, where);

  std::vector<std::string> tokens;
  for (std::uint32_t i = 0; i < v; ++i) tokens.push_back(detail::get_string(in, where));
  std::vector<std::int64_t> counts;
  for (std::uint32_t i = 0; i < v; ++i) counts.push_back(detail::get_i64(in, where));
  model.vocab = Vocabulary::from_ordered(std::move(tokens), std::move(counts));

  int lc = in.get(), ds = in.get(), sw = in.get();
  if (sw == std::char_traits<char>::eof()) throw DataError(where + ": truncated config");
  model.preprocess.lowercase = lc == 1;
  model.preprocess.digit_policy = ds == 1 ? DigitPolicy::strip : DigitPolicy::keep;
  model.config.use_subwords = sw == 1;
  model.config.dim = static_cast<int>(dim);
  model.config.ngrams.minn = static_cast<int>(detail::get_u32(in, where));
  model.config.ngrams.maxn = static_cast<int>(detail::get_u32(in, where));
  model.config.ngrams.buckets = static_cast<std::int32_t>(b > 0 ? b : 1);
  if (model.config.use_subwords && b == 0)
    throw DataError(where + ": subword model without bucket rows");
  return model;
}

}  // namespace embtext
