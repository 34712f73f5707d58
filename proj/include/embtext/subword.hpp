#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "embtext/corpus.hpp"
#include "embtext/error.hpp"
#include "embtext/matrix.hpp"

namespace embtext {

struct NGramConfig {
  int minn = 3;
  int maxn = 6;
  std::int32_t buckets = 2'000'000;

  void validate() const {
    if (minn < 1 || minn > maxn) throw DataError("ngram config requires 1 <= minn <= maxn");
    if (buckets < 1) throw DataError("ngram bucket count must be >= 1");
  }
};

// Character n-grams of the boundary-wrapped word "<word>", lengths counted
// in codepoints, emitted shortest-first then left-to-right. The full wrapped
// word itself is excluded; it is represented by the word's vocabulary row.
inline std::vector<std::string> extract_ngrams(std::string_view word,
                                               const NGramConfig& cfg) {
  std::string wrapped;
  wrapped.reserve(word.size() + 2);
  wrapped.push_back('<');
  wrapped.append(word);
  wrapped.push_back('>');

  // codepoint boundaries (byte offsets, including end)
  std::vector<std::size_t> bounds;
  std::size_t i = 0;
  while (i < wrapped.size()) {
    bounds.push_back(i);
    detail::decode_utf8(wrapped, i);
  }
  bounds.push_back(wrapped.size());
  const std::size_t len = bounds.size() - 1;

  std::vector<std::string> out;
  for (int n = cfg.minn; n <= cfg.maxn; ++n) {
    std::size_t un = static_cast<std::size_t>(n);
    if (un > len) break;
    for (std::size_t start = 0; start + un <= len; ++start) {
      if (start == 0 && un == len) continue;  // the wrapped word itself
      out.emplace_back(wrapped.substr(bounds[start], bounds[start + un] - bounds[start]));
    }
  }
  return out;
}

// FNV-1a over UTF-8 bytes, the usual hashing-trick choice for subword buckets.
inline std::uint32_t fnv1a32(std::string_view bytes) {
  std::uint32_t h = 2166136261u;
  for (char c : bytes) {
    h ^= static_cast<std::uint32_t>(static_cast<unsigned char>(c));
    h *= 16777619u;
  }
  return h;
}

inline std::int32_t bucket(std::string_view ngram, const NGramConfig& cfg) {
  return static_cast<std::int32_t>(fnv1a32(ngram) %
                                   static_cast<std::uint32_t>(cfg.buckets));
}

// Matrix row indices for a word's n-gram buckets; bucket b lives at row
// first_bucket_row + b.
inline std::vector<std::int32_t> ngram_rows(std::string_view word,
                                            const NGramConfig& cfg,
                                            std::int32_t first_bucket_row) {
  std::vector<std::int32_t> rows;
  for (const auto& g : extract_ngrams(word, cfg))
    rows.push_back(first_bucket_row + bucket(g, cfg));
  return rows;
}

// Word vector composed from subword units over a (V + B) x dim matrix whose
// rows 0..V-1 are word vectors and rows V..V+B-1 are hash buckets.
// In-vocabulary: mean of the word's own row and its n-gram bucket rows.
// Out-of-vocabulary: mean of the bucket rows alone; with no n-grams at all
// the result is the zero vector (no information).
inline std::vector<float> compose_vector(const Matrix& vectors,
                                         const Vocabulary& vocab,
                                         std::string_view word,
                                         const NGramConfig& cfg) {
  const std::int32_t v = static_cast<std::int32_t>(vocab.size());
  std::vector<std::int32_t> rows;
  std::int32_t id = vocab.id(word);
  if (id >= 0) rows.push_back(id);
  for (std::int32_t r : ngram_rows(word, cfg, v)) rows.push_back(r);
  return mean_of_rows(vectors, rows);
}

}  // namespace embtext
