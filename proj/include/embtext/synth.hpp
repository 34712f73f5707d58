#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "embtext/corpus.hpp"
#include "embtext/error.hpp"
#include "embtext/rng.hpp"

namespace embtext {

// ---------------------------------------------------------------------------
// Keyword-class corpus: a shared background vocabulary with Zipf-distributed
// usage plus one small uniform lexicon per class mixed in at a fixed rate.
// Deterministic per seed. Defaults produce the desk-scale benchmark task:
// 3 classes x 200 labeled docs of 30-80 tokens over a 1,000-token background
// with 30-token class lexicons at 15%, plus a 50,000-doc unlabeled pretraining
// corpus from the same process.
// ---------------------------------------------------------------------------

struct SynthConfig {
  int classes = 3;
  int docs_per_class = 200;
  int len_min = 30;
  int len_max = 80;
  int background_vocab = 1000;
  int lexicon_size = 30;
  double lexicon_rate = 0.15;
  int pretrain_docs = 50000;
  double zipf_s = 1.0;  // background skew; class lexicons draw uniformly
  // token prefixes; change them to build a disjoint-topic corpus
  std::string background_prefix = "bg";
  std::string class_prefix = "c";

  std::string class_name(int k) const {
    if (classes == 3) {
      static const char* names[] = {"T0", "T1T2", "T3T4"};
      return names[k];
    }
    return "C" + std::to_string(k);
  }
};

namespace detail {

class ZipfSampler {
 public:
  ZipfSampler(int n, double s) : cum_(static_cast<std::size_t>(n)) {
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      z += 1.0 / std::pow(static_cast<double>(i + 1), s);
      cum_[static_cast<std::size_t>(i)] = z;
    }
    for (double& c : cum_) c /= z;
  }

  int sample(Rng& rng) const {
    double u = rng.next_double();
    auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) --it;
    return static_cast<int>(it - cum_.begin());
  }

 private:
  std::vector<double> cum_;
};

inline std::string padded(const std::string& prefix, int i, int width = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix.c_str(), width, i);
  return buf;
}

inline std::vector<std::string> synth_doc(const SynthConfig& cfg, int cls, Rng& rng,
                                          const ZipfSampler& zipf) {
  int len = cfg.len_min + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>(cfg.len_max - cfg.len_min + 1)));
  std::vector<std::string> doc;
  doc.reserve(static_cast<std::size_t>(len));
  for (int t = 0; t < len; ++t) {
    if (rng.next_double() < cfg.lexicon_rate) {
      int w = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.lexicon_size)));
      doc.push_back(padded(cfg.class_prefix + std::to_string(cls) + "w", w, 2));
    } else {
      doc.push_back(padded(cfg.background_prefix, zipf.sample(rng)));
    }
  }
  return doc;
}

}  // namespace detail

inline std::vector<LabeledDoc> make_labeled_corpus(const SynthConfig& cfg,
                                                   std::uint64_t seed) {
  if (cfg.classes < 2) throw DataError("synthetic corpus needs at least 2 classes");
  detail::ZipfSampler zipf(cfg.background_vocab, cfg.zipf_s);
  Rng rng(seed);
  std::vector<LabeledDoc> docs;
  docs.reserve(static_cast<std::size_t>(cfg.classes * cfg.docs_per_class));
  for (int k = 0; k < cfg.classes; ++k)
    for (int d = 0; d < cfg.docs_per_class; ++d)
      docs.push_back({cfg.class_name(k), detail::synth_doc(cfg, k, rng, zipf)});
  return docs;
}

// Unlabeled pretraining corpus from the same generative process: each doc
// draws a class uniformly, then its label is dropped.
inline std::vector<std::vector<std::string>> make_pretrain_corpus(const SynthConfig& cfg,
                                                                  std::uint64_t seed) {
  detail::ZipfSampler zipf(cfg.background_vocab, cfg.zipf_s);
  Rng rng(seed);
  std::vector<std::vector<std::string>> docs;
  docs.reserve(static_cast<std::size_t>(cfg.pretrain_docs));
  for (int d = 0; d < cfg.pretrain_docs; ++d) {
    int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.classes)));
    docs.push_back(detail::synth_doc(cfg, k, rng, zipf));
  }
  return docs;
}

// Disjoint-topic twin of a config: same process, non-overlapping vocabulary.
inline SynthConfig disjoint_topic(SynthConfig cfg) {
  cfg.background_prefix = "xx";
  cfg.class_prefix = "q";
  return cfg;
}

// ---------------------------------------------------------------------------
// Morphology corpus: word families share a stem (so subword n-grams overlap)
// and appear in family-specific contexts (so their vectors cluster).
// ---------------------------------------------------------------------------

struct MorphologyConfig {
  int stems = 30;
  std::vector<std::string> suffixes = {"", "ing", "ed", "er", "s"};
  int docs = 2500;
  int pairs_per_doc = 4;     // (function word, family word) pairs
  int function_words = 25;
};

struct MorphologyCorpus {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::vector<std::string>> families;  // [stem][suffix] word forms
};

inline MorphologyCorpus make_morphology_corpus(const MorphologyConfig& cfg,
                                               std::uint64_t seed) {
  Rng rng(seed);
  auto random_word = [&](int len_lo, int len_hi) {
    int len = len_lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(len_hi - len_lo + 1)));
    std::string w;
    for (int i = 0; i < len; ++i)
      w.push_back(static_cast<char>('a' + rng.below(26)));
    return w;
  };

  MorphologyCorpus corpus;
  std::unordered_map<std::string, bool> used;
  std::vector<std::string> stems;
  while (static_cast<int>(stems.size()) < cfg.stems) {
    std::string s = random_word(5, 7);
    if (!used.emplace(s, true).second) continue;
    stems.push_back(s);
  }
  std::vector<std::string> function_words;
  while (static_cast<int>(function_words.size()) < cfg.function_words) {
    std::string s = random_word(3, 4);
    if (!used.emplace(s, true).second) continue;
    function_words.push_back(s);
  }
  for (const auto& stem : stems) {
    std::vector<std::string> family;
    for (const auto& suffix : cfg.suffixes) family.push_back(stem + suffix);
    corpus.families.push_back(std::move(family));
  }

  for (int d = 0; d < cfg.docs; ++d) {
    std::size_t fam = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(cfg.stems)));
    std::vector<std::string> doc;
    for (int p = 0; p < cfg.pairs_per_doc; ++p) {
      doc.push_back(function_words[static_cast<std::size_t>(
          rng.below(static_cast<std::uint64_t>(cfg.function_words)))]);
      doc.push_back(corpus.families[fam][static_cast<std::size_t>(
          rng.below(corpus.families[fam].size()))]);
    }
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Capital-of corpus: templated sentences pairing place tokens so that the
// country->city offset is consistent across pairs.
// ---------------------------------------------------------------------------

struct AnalogyCorpus {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::pair<std::string, std::string>> pairs;  // (country, city)
};

inline AnalogyCorpus make_analogy_corpus(int n_pairs, int n_docs, std::uint64_t seed) {
  AnalogyCorpus corpus;
  for (int i = 0; i < n_pairs; ++i)
    corpus.pairs.emplace_back(detail::padded("nation", i, 2), detail::padded("city", i, 2));

  Rng rng(seed);
  for (int d = 0; d < n_docs; ++d) {
    const auto& [country, city] =
        corpus.pairs[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n_pairs)))];
    switch (rng.below(4)) {
      case 0: corpus.docs.push_back({"the", "capital", "of", country, "is", city}); break;
      case 1: corpus.docs.push_back({city, "is", "the", "capital", "of", country}); break;
      case 2: corpus.docs.push_back({"people", "from", country, "visit", city, "often"}); break;
      default: corpus.docs.push_back({city, "lies", "within", country, "borders"}); break;
    }
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Synonym corpus: two tokens used in identical context distributions.
// ---------------------------------------------------------------------------

struct SynonymCorpus {
  std::vector<std::vector<std::string>> docs;
  std::string word_a = "syna";
  std::string word_b = "synb";
};

inline SynonymCorpus make_synonym_corpus(int n_docs, int n_fillers, std::uint64_t seed) {
  SynonymCorpus corpus;
  Rng rng(seed);
  for (int d = 0; d < n_docs; ++d) {
    std::vector<std::string> doc;
    auto filler = [&] {
      return detail::padded("w", static_cast<int>(rng.below(static_cast<std::uint64_t>(n_fillers))), 2);
    };
    for (int i = 0; i < 3; ++i) doc.push_back(filler());
    doc.push_back(rng.next_double() < 0.5 ? corpus.word_a : corpus.word_b);
    for (int i = 0; i < 3; ++i) doc.push_back(filler());
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace embtext
