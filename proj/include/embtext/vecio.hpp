#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "embtext/corpus.hpp"
#include "embtext/error.hpp"
#include "embtext/matrix.hpp"
#include "embtext/subword.hpp"

namespace embtext {

static_assert(std::endian::native == std::endian::little,
              "binary vector format assumes a little-endian host");

// An ordered token list with one float32 row per token. The interchange
// representation for off-the-shelf and exported embeddings.
struct VectorSet {
  std::vector<std::string> tokens;
  Matrix vectors;
  std::string source;

  std::size_t size() const { return tokens.size(); }
  std::size_t dim() const { return vectors.cols(); }

  void validate() const {
    if (tokens.size() != vectors.rows())
      throw DataError("vector set token count does not match matrix rows");
    std::unordered_set<std::string_view> seen;
    for (const auto& t : tokens)
      if (!seen.insert(t).second) throw DataError("duplicate token in vector set: " + t);
  }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> parse_header(const std::string& line,
                                                        const std::string& where) {
  std::size_t v = 0, d = 0;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  auto r1 = std::from_chars(p, end, v);
  if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ')
    throw DataError(where + ": malformed header, expected '<V> <dim>'");
  auto r2 = std::from_chars(r1.ptr + 1, end, d);
  if (r2.ec != std::errc{})
    throw DataError(where + ": malformed header, expected '<V> <dim>'");
  if (v == 0 || d == 0) throw DataError(where + ": header must declare V >= 1 and dim >= 1");
  return {v, d};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Text format: first line "<V> <dim>", then V lines "<token> <f1> ... <fdim>",
// space separated, UTF-8, LF endings. Writer emits 6 significant digits.
// ---------------------------------------------------------------------------

inline VectorSet read_text_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vector file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  auto [v, dim] = detail::parse_header(line, path.string());

  VectorSet set;
  set.source = path.filename().string();
  set.tokens.reserve(v);
  set.vectors = Matrix(v, dim);
  std::unordered_set<std::string> seen;

  for (std::size_t i = 0; i < v; ++i) {
    if (!std::getline(in, line))
      throw DataError(path.string() + ": truncated, expected " + std::to_string(v) +
                      " rows, got " + std::to_string(i));
    const std::string where = path.string() + ":" + std::to_string(i + 2);
    std::size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0) throw DataError(where + ": missing token or values");
    std::string tok = line.substr(0, sp);
    if (!seen.insert(tok).second) throw DataError(where + ": duplicate token '" + tok + "'");

    float* row = set.vectors.row(i);
    const char* p = line.data() + sp;
    const char* end = line.data() + line.size();
    std::size_t got = 0;
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      if (got == dim) throw DataError(where + ": expected " + std::to_string(dim) + " values, got more");
      float val;
      auto r = std::from_chars(p, end, val);
      if (r.ec != std::errc{}) throw DataError(where + ": bad float literal");
      if (!std::isfinite(val)) throw DataError(where + ": non-finite value");
      row[got++] = val;
      p = r.ptr;
    }
    if (got != dim)
      throw DataError(where + ": expected " + std::to_string(dim) + " values, got " +
                      std::to_string(got));
    set.tokens.push_back(std::move(tok));
  }
  return set;
}

inline void write_text_vectors(const VectorSet& set, const std::filesystem::path& path) {
  set.validate();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write vector file: " + path.string());
  out << set.size() << ' ' << set.dim() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < set.size(); ++i) {
    out << set.tokens[i];
    const float* row = set.vectors.row(i);
    for (std::size_t j = 0; j < set.dim(); ++j) {
      std::snprintf(buf, sizeof buf, " %.6g", static_cast<double>(row[j]));
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Binary format: ASCII header "<V> <dim>\n"; per token, the token bytes, one
// space, dim little-endian IEEE-754 float32, then a newline (tolerated when
// absent on read). Round-trips bit-exactly.
// ---------------------------------------------------------------------------

inline VectorSet read_binary_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vector file: " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw DataError(path.string() + ": empty file");
  auto [v, dim] = detail::parse_header(header, path.string());

  VectorSet set;
  set.source = path.filename().string();
  set.tokens.reserve(v);
  set.vectors = Matrix(v, dim);
  std::unordered_set<std::string> seen;

  for (std::size_t i = 0; i < v; ++i) {
    std::string tok;
    int c;
    while ((c = in.get()) != std::char_traits<char>::eof() && c == '\n') {
    }  // skip record separators
    while (c != std::char_traits<char>::eof() && c != ' ') {
      tok.push_back(static_cast<char>(c));
      c = in.get();
    }
    if (c == std::char_traits<char>::eof())
      throw DataError(path.string() + ": truncated at row " + std::to_string(i));
    if (tok.empty()) throw DataError(path.string() + ": empty token at row " + std::to_string(i));
    if (!seen.insert(tok).second)
      throw DataError(path.string() + ": duplicate token '" + tok + "'");
    in.read(reinterpret_cast<char*>(set.vectors.row(i)),
            static_cast<std::streamsize>(dim * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(dim * sizeof(float)))
      throw DataError(path.string() + ": truncated at row " + std::to_string(i));
    set.tokens.push_back(std::move(tok));
  }
  return set;
}

inline void write_binary_vectors(const VectorSet& set, const std::filesystem::path& path) {
  set.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vector file: " + path.string());
  out << set.size() << ' ' << set.dim() << '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    out << set.tokens[i] << ' ';
    out.write(reinterpret_cast<const char*>(set.vectors.row(i)),
              static_cast<std::streamsize>(set.dim() * sizeof(float)));
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Alignment of a vector set onto a vocabulary
// ---------------------------------------------------------------------------

enum class OovPolicy { skip, zero, subword_impute };

// Bucket rows backing subword imputation during alignment: rows
// [first_bucket_row, first_bucket_row + cfg.buckets) of *table.
struct SubwordSource {
  const Matrix* table = nullptr;
  std::int32_t first_bucket_row = 0;
  NGramConfig cfg;
};

struct AlignResult {
  Matrix rows;                 // V x dim, vocabulary order
  std::vector<bool> present;   // exact-match flag per vocabulary id
  double coverage = 0.0;       // |vocab tokens matched| / V
};

// Copies matching rows verbatim (no normalization of the set's tokens) and
// fills misses per policy. skip leaves the row zero and marks it absent;
// zero writes a zero row; subword_impute composes from bucket rows when a
// subword source is supplied, else falls back to zero.
inline AlignResult align(const VectorSet& set, const Vocabulary& vocab,
                         OovPolicy policy,
                         const std::optional<SubwordSource>& subwords = {}) {
  set.validate();
  const std::size_t v = vocab.size();
  AlignResult result;
  result.rows = Matrix(v, set.dim());
  result.present.assign(v, false);

  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) index.emplace(set.tokens[i], i);

  std::size_t matched = 0;
  for (std::size_t w = 0; w < v; ++w) {
    const std::string& tok = vocab.token(static_cast<std::int32_t>(w));
    auto it = index.find(tok);
    if (it != index.end()) {
      std::memcpy(result.rows.row(w), set.vectors.row(it->second),
                  set.dim() * sizeof(float));
      result.present[w] = true;
      ++matched;
      continue;
    }
    if (policy == OovPolicy::subword_impute && subwords && subwords->table) {
      if (subwords->table->cols() != set.dim())
        throw DataError("subword source dimension does not match vector set");
      std::vector<std::int32_t> rows =
          ngram_rows(tok, subwords->cfg, subwords->first_bucket_row);
      std::vector<float> composed = mean_of_rows(*subwords->table, rows);
      std::memcpy(result.rows.row(w), composed.data(), set.dim() * sizeof(float));
    }
    // zero and subword_impute rows count as usable data; skip marks the row
    // absent so downstream means ignore it
    if (policy != OovPolicy::skip) result.present[w] = true;
  }
  result.coverage = static_cast<double>(matched) / static_cast<double>(v);
  return result;
}

}  // namespace embtext
