#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "embtext/error.hpp"

namespace embtext {

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

enum class DigitPolicy { keep, strip };

// Punctuation is always stripped: every non-alphanumeric, non-whitespace
// codepoint becomes a token boundary. Lowercasing applies to ASCII letters
// only; accent folding is out of scope.
struct PreprocessConfig {
  bool lowercase = true;
  DigitPolicy digit_policy = DigitPolicy::keep;
};

namespace detail {

// Decode one UTF-8 codepoint starting at s[i]; returns the codepoint and
// advances i. Malformed sequences decode as U+FFFD one byte at a time.
inline std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
  unsigned char c0 = static_cast<unsigned char>(s[i]);
  if (c0 < 0x80) {
    ++i;
    return c0;
  }
  int len = 0;
  std::uint32_t cp = 0;
  if ((c0 & 0xE0) == 0xC0) {
    len = 2;
    cp = c0 & 0x1F;
  } else if ((c0 & 0xF0) == 0xE0) {
    len = 3;
    cp = c0 & 0x0F;
  } else if ((c0 & 0xF8) == 0xF0) {
    len = 4;
    cp = c0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + static_cast<std::size_t>(len) > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    unsigned char ck = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
    if ((ck & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (ck & 0x3F);
  }
  i += static_cast<std::size_t>(len);
  return cp;
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Non-ASCII codepoints count as word characters except common punctuation
// and space blocks. Full Unicode category data is out of scope here.
inline bool is_unicode_punct_or_space(std::uint32_t cp) {
  if (cp == 0x00A0) return true;                    // no-break space
  if (cp >= 0x00A1 && cp <= 0x00BF) return true;    // Latin-1 punct/symbols
  if (cp == 0x00D7 || cp == 0x00F7) return true;    // multiply/divide signs
  if (cp >= 0x2000 && cp <= 0x206F) return true;    // general punctuation
  if (cp >= 0x3000 && cp <= 0x303F) return true;    // CJK punctuation
  if (cp == 0xFFFD) return true;                    // replacement char
  return false;
}

}  // namespace detail

// Splits UTF-8 text on whitespace and punctuation. Total function: any input
// yields a (possibly empty) token list, and re-tokenizing the joined output
// reproduces it.
inline std::vector<std::string> tokenize(std::string_view text,
                                         const PreprocessConfig& cfg = {}) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    std::uint32_t cp = detail::decode_utf8(text, i);
    if (cp < 0x80) {
      char c = static_cast<char>(cp);
      if (c >= 'A' && c <= 'Z') {
        cur.push_back(cfg.lowercase ? static_cast<char>(c - 'A' + 'a') : c);
      } else if (c >= 'a' && c <= 'z') {
        cur.push_back(c);
      } else if (c >= '0' && c <= '9') {
        if (cfg.digit_policy == DigitPolicy::keep)
          cur.push_back(c);
        else
          flush();
      } else {
        flush();  // whitespace and ASCII punctuation both delimit
      }
    } else if (detail::is_unicode_punct_or_space(cp)) {
      flush();
    } else {
      detail::append_utf8(cur, cp);
    }
  }
  flush();
  return tokens;
}

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

// Immutable after construction. Ids are contiguous in [0, V), assigned by
// descending count with lexicographic tie-break so builds are reproducible.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary build(const std::vector<std::vector<std::string>>& docs,
                          std::int64_t min_count) {
    std::unordered_map<std::string, std::int64_t> counts;
    std::int64_t raw_total = 0;
    for (const auto& doc : docs)
      for (const auto& tok : doc) {
        ++counts[tok];
        ++raw_total;
      }
    return from_counts(counts, raw_total, min_count);
  }

  static Vocabulary build(const std::vector<std::string>& tokens,
                          std::int64_t min_count) {
    std::unordered_map<std::string, std::int64_t> counts;
    for (const auto& tok : tokens) ++counts[tok];
    return from_counts(counts, static_cast<std::int64_t>(tokens.size()), min_count);
  }

  // Reconstructs a vocabulary whose ids follow the given token order, e.g.
  // when loading a persisted model. Counts must already be in id order.
  static Vocabulary from_ordered(std::vector<std::string> tokens,
                                 std::vector<std::int64_t> counts,
                                 std::int64_t min_count = 1) {
    if (tokens.empty() || tokens.size() != counts.size())
      throw DataError("ordered vocabulary needs matching non-empty token/count lists");
    Vocabulary v;
    v.tokens_ = std::move(tokens);
    v.counts_ = std::move(counts);
    v.min_count_ = min_count;
    for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
      if (!v.index_.emplace(v.tokens_[i], static_cast<std::int32_t>(i)).second)
        throw DataError("duplicate token in ordered vocabulary: " + v.tokens_[i]);
      v.total_tokens_ += v.counts_[i];
    }
    v.raw_total_ = v.total_tokens_;
    return v;
  }

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::int32_t id) const { return tokens_[static_cast<std::size_t>(id)]; }
  std::int64_t count(std::int32_t id) const { return counts_[static_cast<std::size_t>(id)]; }
  std::int64_t total_tokens() const { return total_tokens_; }
  std::int64_t raw_total() const { return raw_total_; }
  std::int64_t min_count() const { return min_count_; }

  // -1 when the token is out of vocabulary.
  std::int32_t id(std::string_view tok) const {
    auto it = index_.find(std::string(tok));
    return it == index_.end() ? -1 : it->second;
  }

  bool contains(std::string_view tok) const { return id(tok) >= 0; }

  // Drops out-of-vocabulary tokens.
  std::vector<std::int32_t> encode(const std::vector<std::string>& tokens) const {
    std::vector<std::int32_t> ids;
    ids.reserve(tokens.size());
    for (const auto& tok : tokens) {
      std::int32_t w = id(tok);
      if (w >= 0) ids.push_back(w);
    }
    return ids;
  }

 private:
  static Vocabulary from_counts(const std::unordered_map<std::string, std::int64_t>& counts,
                                std::int64_t raw_total, std::int64_t min_count) {
    if (min_count < 1) throw DataError("vocabulary min_count must be >= 1");
    std::vector<std::pair<std::string, std::int64_t>> kept;
    kept.reserve(counts.size());
    for (const auto& [tok, c] : counts)
      if (c >= min_count) kept.emplace_back(tok, c);
    if (kept.empty())
      throw DataError("empty vocabulary: no token reached min_count=" +
                      std::to_string(min_count));
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    Vocabulary v;
    v.min_count_ = min_count;
    v.raw_total_ = raw_total;
    v.tokens_.reserve(kept.size());
    v.counts_.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      v.tokens_.push_back(kept[i].first);
      v.counts_.push_back(kept[i].second);
      v.index_.emplace(kept[i].first, static_cast<std::int32_t>(i));
      v.total_tokens_ += kept[i].second;
    }
    return v;
  }

  std::vector<std::string> tokens_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, std::int32_t> index_;
  std::int64_t total_tokens_ = 0;
  std::int64_t raw_total_ = 0;
  std::int64_t min_count_ = 0;
};

// ---------------------------------------------------------------------------
// Frequent-word subsampling
// ---------------------------------------------------------------------------

struct SubsampleConfig {
  double t = 1e-3;  // threshold frequency; <= 0 discards everything
};

// Probability of keeping a token with the given corpus frequency:
// keep = min(1, sqrt(t/f) + t/f) with f = count/total. Monotonically
// non-increasing in f.
inline double keep_probability(std::int64_t count, std::int64_t total,
                               const SubsampleConfig& cfg) {
  assert(count >= 1 && total >= count);
  if (cfg.t <= 0.0) return 0.0;
  double f = static_cast<double>(count) / static_cast<double>(total);
  double r = cfg.t / f;
  return std::min(1.0, std::sqrt(r) + r);
}

// ---------------------------------------------------------------------------
// File input
// ---------------------------------------------------------------------------

struct LabeledDoc {
  std::string label;
  std::vector<std::string> tokens;
};

// One document per line, UTF-8 plain text.
inline std::vector<std::vector<std::string>> read_corpus_file(
    const std::filesystem::path& path, const PreprocessConfig& cfg = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path.string());
  std::vector<std::vector<std::string>> docs;
  std::string line;
  while (std::getline(in, line)) docs.push_back(tokenize(line, cfg));
  return docs;
}

// One document per line, prefixed `__label__<NAME> ` (single space).
inline std::vector<LabeledDoc> read_labeled_file(const std::filesystem::path& path,
                                                 const PreprocessConfig& cfg = {}) {
  static constexpr std::string_view kPrefix = "__label__";
  std::ifstream in(path);
  if (!in) throw DataError("cannot open labeled file: " + path.string());
  std::vector<LabeledDoc> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind(kPrefix, 0) != 0)
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": missing __label__ prefix");
    std::size_t sp = line.find(' ', kPrefix.size());
    if (sp == std::string::npos || sp == kPrefix.size())
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": malformed label line");
    LabeledDoc doc;
    doc.label = line.substr(kPrefix.size(), sp - kPrefix.size());
    doc.tokens = tokenize(std::string_view(line).substr(sp + 1), cfg);
    docs.push_back(std::move(doc));
  }
  return docs;
}

inline void write_labeled_file(const std::vector<LabeledDoc>& docs,
                               const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write labeled file: " + path.string());
  for (const auto& doc : docs) {
    out << "__label__" << doc.label;
    for (const auto& tok : doc.tokens) out << ' ' << tok;
    out << '\n';
  }
}

inline void write_corpus_file(const std::vector<std::vector<std::string>>& docs,
                              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write corpus file: " + path.string());
  for (const auto& doc : docs) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (i) out << ' ';
      out << doc[i];
    }
    out << '\n';
  }
}

}  // namespace embtext
