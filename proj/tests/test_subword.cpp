#include <catch2/catch_amalgamated.hpp>

#include "embtext/rng.hpp"
#include "embtext/subword.hpp"

using namespace embtext;

TEST_CASE("ngram extraction matches hand enumeration") {
  NGramConfig cfg3;
  cfg3.minn = 3;
  cfg3.maxn = 3;
  CHECK(extract_ngrams("where", cfg3) ==
        std::vector<std::string>{"<wh", "whe", "her", "ere", "re>"});

  NGramConfig cfg36;
  cfg36.minn = 3;
  cfg36.maxn = 6;
  // "<a>" has length 3 but equals the wrapped word, which is excluded
  CHECK(extract_ngrams("a", cfg36) == std::vector<std::string>{});
  // length-3 substrings of "<ab>"; the full wrapped word (length 4) is excluded
  CHECK(extract_ngrams("ab", cfg36) == std::vector<std::string>{"<ab", "ab>"});
}

TEST_CASE("ngram extraction counts codepoints, not bytes") {
  NGramConfig cfg;
  cfg.minn = 3;
  cfg.maxn = 3;
  // "océ" wraps to "<océ>" = 5 codepoints
  auto grams = extract_ngrams("oc\xc3\xa9", cfg);
  CHECK(grams == std::vector<std::string>{"<oc", "oc\xc3\xa9", "c\xc3\xa9>"});
}

TEST_CASE("bucket hashing is deterministic and in range") {
  NGramConfig cfg;
  cfg.buckets = 1000;
  CHECK(bucket("abc", cfg) == bucket("abc", cfg));
  for (const char* g : {"<wh", "whe", "her", "ere", "re>", "xyz"}) {
    auto b = bucket(g, cfg);
    CHECK(b >= 0);
    CHECK(b < cfg.buckets);
  }
  NGramConfig one;
  one.buckets = 1;
  CHECK(bucket("anything", one) == 0);
  CHECK(bucket("<wh", one) == 0);
}

TEST_CASE("fnv1a reference values") {
  // standard FNV-1a 32-bit test vectors
  CHECK(fnv1a32("") == 2166136261u);
  CHECK(fnv1a32("a") == 0xe40c292cu);
  CHECK(fnv1a32("foobar") == 0xbf9cf968u);
}

TEST_CASE("compose vector mean semantics") {
  NGramConfig cfg;
  cfg.minn = 3;
  cfg.maxn = 3;
  cfg.buckets = 64;

  Vocabulary vocab = Vocabulary::build(std::vector<std::string>{"where", "where", "other"}, 1);
  const std::size_t v = vocab.size();
  const std::size_t dim = 4;
  Matrix m(v + static_cast<std::size_t>(cfg.buckets), dim);

  SECTION("in-vocab word with zero bucket rows scales its own row") {
    std::int32_t id = vocab.id("where");
    for (std::size_t j = 0; j < dim; ++j) m.row(static_cast<std::size_t>(id))[j] = 10.0f;
    auto composed = compose_vector(m, vocab, "where", cfg);
    // own row + 5 zero n-gram rows -> r / 6
    for (std::size_t j = 0; j < dim; ++j)
      CHECK_THAT(composed[j], Catch::Matchers::WithinRel(10.0f / 6.0f, 1e-6f));
  }

  SECTION("oov word composes from bucket rows alone") {
    auto rows = ngram_rows("query", cfg, static_cast<std::int32_t>(v));
    REQUIRE(!rows.empty());
    for (std::int32_t r : rows)
      for (std::size_t j = 0; j < dim; ++j) m.row(static_cast<std::size_t>(r))[j] += 2.0f;
    auto composed = compose_vector(m, vocab, "query", cfg);
    auto expected = mean_of_rows(m, rows);
    CHECK(composed == expected);
  }

  SECTION("oov word with zero ngrams gives the zero vector") {
    auto composed = compose_vector(m, vocab, "a", cfg);
    for (float x : composed) CHECK(x == 0.0f);
  }
}

TEST_CASE("identical ngram multisets and vocab status compose identically") {
  // under unigrams, "ab" and "ba" wrap to the same codepoint multiset
  NGramConfig cfg;
  cfg.minn = 1;
  cfg.maxn = 1;
  cfg.buckets = 128;
  Vocabulary vocab = Vocabulary::build(std::vector<std::string>{"pad", "pad"}, 1);
  Matrix m(1 + 128, 3);
  Rng rng(5);
  m.fill_uniform(rng, -1.0f, 1.0f);
  auto va = compose_vector(m, vocab, "ab", cfg);
  auto vb = compose_vector(m, vocab, "ba", cfg);
  for (std::size_t j = 0; j < va.size(); ++j)
    CHECK_THAT(va[j], Catch::Matchers::WithinAbs(vb[j], 1e-6f));
}

TEST_CASE("compose vector is linear in the embedding matrix") {
  NGramConfig cfg;
  cfg.minn = 2;
  cfg.maxn = 4;
  cfg.buckets = 50;
  Vocabulary vocab = Vocabulary::build(std::vector<std::string>{"walk", "run"}, 1);
  Matrix m(2 + 50, 5);
  Rng rng(11);
  m.fill_uniform(rng, -1.0f, 1.0f);

  Matrix scaled = m;
  for (float& x : scaled.data()) x *= 3.0f;

  for (const char* word : {"walk", "walked", "x"}) {
    auto base = compose_vector(m, vocab, word, cfg);
    auto big = compose_vector(scaled, vocab, word, cfg);
    for (std::size_t j = 0; j < base.size(); ++j)
      CHECK_THAT(big[j], Catch::Matchers::WithinAbs(3.0f * base[j], 1e-5f));
  }
}
