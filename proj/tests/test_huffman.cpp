#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>

#include "embtext/huffman.hpp"
#include "embtext/rng.hpp"

#include "oracles.hpp"

using namespace embtext;

namespace {

Vocabulary vocab_with_counts(const std::vector<std::int64_t>& counts) {
  // token names chosen so count-descending order matches the given order
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::int64_t c = 0; c < counts[i]; ++c)
      tokens.push_back("w" + std::to_string(i));
  return Vocabulary::build(tokens, 1);
}

std::int64_t weighted_length(const Vocabulary& v, const HuffmanCoding& coding) {
  std::int64_t total = 0;
  for (std::size_t w = 0; w < v.size(); ++w)
    total += v.count(static_cast<std::int32_t>(w)) *
             static_cast<std::int64_t>(coding.codes[w].size());
  return total;
}

bool prefix_free(const HuffmanCoding& coding) {
  std::set<std::string> codes;
  for (const auto& code : coding.codes) {
    std::string s;
    for (auto b : code) s.push_back(b ? '1' : '0');
    codes.insert(s);
  }
  if (codes.size() != coding.codes.size()) return false;
  for (auto it = codes.begin(); it != codes.end(); ++it) {
    auto next = std::next(it);
    if (next != codes.end() && next->rfind(*it, 0) == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("huffman code lengths for a 3-symbol vocabulary") {
  Vocabulary v = vocab_with_counts({5, 2, 1});
  HuffmanCoding coding = build_huffman(v);
  std::map<std::string, std::size_t> lengths;
  for (std::size_t w = 0; w < v.size(); ++w)
    lengths[v.token(static_cast<std::int32_t>(w))] = coding.codes[w].size();
  CHECK(lengths["w0"] == 1);
  CHECK(lengths["w1"] == 2);
  CHECK(lengths["w2"] == 2);
  CHECK(weighted_length(v, coding) == 11);
  CHECK(weighted_length(v, coding) == oracles::optimal_prefix_code_length({5, 2, 1}));
}

TEST_CASE("two equal symbols get single-bit codes") {
  Vocabulary v = vocab_with_counts({1, 1});
  HuffmanCoding coding = build_huffman(v);
  REQUIRE(coding.codes[0].size() == 1);
  REQUIRE(coding.codes[1].size() == 1);
  CHECK(coding.codes[0][0] != coding.codes[1][0]);
  CHECK(coding.internal_count == 1);
}

TEST_CASE("single-word vocabulary is an error") {
  Vocabulary v = vocab_with_counts({3});
  CHECK_THROWS_AS(build_huffman(v), DataError);
}

TEST_CASE("huffman matches exhaustive optimum on random small vocabularies") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(rng.below(7));  // 2..8 symbols
    std::vector<std::int64_t> counts;
    for (std::size_t i = 0; i < n; ++i)
      counts.push_back(1 + static_cast<std::int64_t>(rng.below(50)));
    Vocabulary v = vocab_with_counts(counts);
    HuffmanCoding coding = build_huffman(v);
    std::vector<std::int64_t> sorted_counts;
    for (std::size_t w = 0; w < v.size(); ++w)
      sorted_counts.push_back(v.count(static_cast<std::int32_t>(w)));
    CHECK(weighted_length(v, coding) == oracles::optimal_prefix_code_length(sorted_counts));
    CHECK(prefix_free(coding));
  }
}

TEST_CASE("structural properties on a large vocabulary") {
  Rng rng(7);
  std::vector<std::int64_t> counts;
  for (int i = 0; i < 10'000; ++i) counts.push_back(1 + static_cast<std::int64_t>(rng.below(100)));

  // building through token replication would be slow; construct directly
  std::vector<std::string> tokens;
  std::vector<std::int64_t> ordered = counts;
  std::sort(ordered.begin(), ordered.end(), std::greater<>());
  for (std::size_t i = 0; i < ordered.size(); ++i) tokens.push_back("t" + std::to_string(i));
  Vocabulary v = Vocabulary::from_ordered(std::move(tokens), std::move(ordered));

  HuffmanCoding coding = build_huffman(v);
  CHECK(coding.internal_count == v.size() - 1);
  CHECK(prefix_free(coding));

  // Kraft equality, exact in integer units of 2^-maxlen
  std::size_t maxlen = 0;
  for (const auto& code : coding.codes) maxlen = std::max(maxlen, code.size());
  REQUIRE(maxlen <= 62);
  std::uint64_t sum = 0;
  for (const auto& code : coding.codes) sum += 1ULL << (maxlen - code.size());
  CHECK(sum == (1ULL << maxlen));

  // path length equals code length; internal ids in range
  for (std::size_t w = 0; w < v.size(); ++w) {
    REQUIRE(coding.paths[w].size() == coding.codes[w].size());
    for (std::int32_t node : coding.paths[w]) {
      REQUIRE(node >= 0);
      REQUIRE(static_cast<std::size_t>(node) < coding.internal_count);
    }
  }

  // strictly more frequent words never get longer codes (equal counts may
  // split either way)
  for (std::size_t w = 1; w < v.size(); ++w) {
    if (v.count(static_cast<std::int32_t>(w - 1)) > v.count(static_cast<std::int32_t>(w)))
      CHECK(coding.codes[w - 1].size() <= coding.codes[w].size());
  }
}
