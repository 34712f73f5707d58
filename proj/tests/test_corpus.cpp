#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "embtext/corpus.hpp"
#include "embtext/rng.hpp"

using namespace embtext;

TEST_CASE("tokenize strips punctuation and lowercases") {
  CHECK(tokenize("can't") == std::vector<std::string>{"can", "t"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("Meta-Analysis of 5 RCTs.") ==
        std::vector<std::string>{"meta", "analysis", "of", "5", "rcts"});
}

TEST_CASE("tokenize config options") {
  PreprocessConfig keep_case;
  keep_case.lowercase = false;
  CHECK(tokenize("Meta RCTs", keep_case) == std::vector<std::string>{"Meta", "RCTs"});

  PreprocessConfig strip_digits;
  strip_digits.digit_policy = DigitPolicy::strip;
  CHECK(tokenize("5 rcts in 2016", strip_digits) == std::vector<std::string>{"rcts", "in"});
  CHECK(tokenize("covid19", strip_digits) == std::vector<std::string>{"covid"});
}

TEST_CASE("tokenize keeps non-ascii word characters and strips unicode punctuation") {
  // e-acute kept as-is; em dash (U+2014) delimits
  CHECK(tokenize("caf\xc3\xa9 bar") == std::vector<std::string>{"caf\xc3\xa9", "bar"});
  CHECK(tokenize("alpha\xe2\x80\x94--beta") == std::vector<std::string>{"alpha", "beta"});
}

TEST_CASE("tokenize is idempotent over join") {
  PreprocessConfig cfg;
  auto join = [](const std::vector<std::string>& toks) {
    std::string s;
    for (const auto& t : toks) {
      if (!s.empty()) s += ' ';
      s += t;
    }
    return s;
  };
  for (const char* text :
       {"Hello, world!", "a--b c_d", "Meta-Analysis of 5 RCTs.", "", "  x  ",
        "mixed CASE and 123 digits", "caf\xc3\xa9\xe2\x80\x94" "bar"}) {
    auto once = tokenize(text, cfg);
    CHECK(tokenize(join(once), cfg) == once);
  }
}

TEST_CASE("vocabulary assigns ids by count then lexicographic order") {
  std::vector<std::string> tokens{"a", "a", "b"};
  Vocabulary v = Vocabulary::build(tokens, 1);
  REQUIRE(v.size() == 2);
  CHECK(v.id("a") == 0);
  CHECK(v.id("b") == 1);
  CHECK(v.count(0) == 2);
  CHECK(v.count(1) == 1);
  CHECK(v.total_tokens() == 3);
  CHECK(v.raw_total() == 3);

  Vocabulary pruned = Vocabulary::build(tokens, 2);
  REQUIRE(pruned.size() == 1);
  CHECK(pruned.id("a") == 0);
  CHECK(pruned.total_tokens() == 2);
  CHECK(pruned.raw_total() == 3);

  // tie on count 1 resolved lexicographically
  Vocabulary tied = Vocabulary::build(std::vector<std::string>{"b", "a"}, 1);
  CHECK(tied.id("a") == 0);
  CHECK(tied.id("b") == 1);
}

TEST_CASE("vocabulary ids are exactly 0..V-1") {
  std::vector<std::string> tokens;
  Rng rng(7);
  for (int i = 0; i < 500; ++i)
    tokens.push_back("tok" + std::to_string(rng.below(80)));
  Vocabulary v = Vocabulary::build(tokens, 1);
  std::vector<bool> seen(v.size(), false);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::int32_t id = v.id(v.token(static_cast<std::int32_t>(i)));
    REQUIRE(id >= 0);
    REQUIRE(static_cast<std::size_t>(id) < v.size());
    seen[static_cast<std::size_t>(id)] = true;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("empty vocabulary is an error") {
  CHECK_THROWS_AS(Vocabulary::build(std::vector<std::string>{}, 1), DataError);
  CHECK_THROWS_AS(Vocabulary::build(std::vector<std::string>{"a", "b"}, 5), DataError);
}

TEST_CASE("keep probability boundary cases") {
  SubsampleConfig cfg;
  cfg.t = 1e-3;
  // f == t: sqrt(1) + 1 clamps to 1
  CHECK(keep_probability(1, 1000, cfg) == 1.0);
  SubsampleConfig zero;
  zero.t = 0.0;
  CHECK(keep_probability(10, 100, zero) == 0.0);
  // f = 100 t: sqrt(0.01) + 0.01 = 0.11
  cfg.t = 1e-3;
  CHECK_THAT(keep_probability(100, 1000, cfg), Catch::Matchers::WithinAbs(0.11, 1e-12));
}

TEST_CASE("keep probability is monotone non-increasing in frequency") {
  SubsampleConfig cfg;
  cfg.t = 1e-3;
  double prev = 1.0;
  for (std::int64_t count = 1; count <= 1000; count += 7) {
    double p = keep_probability(count, 1000, cfg);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
}

TEST_CASE("empirical discard rate matches analytic keep probability") {
  SubsampleConfig cfg;
  cfg.t = 1e-3;
  Rng rng(123);
  for (auto [count, total] : std::vector<std::pair<std::int64_t, std::int64_t>>{
           {50, 1000}, {200, 1000}, {5, 1000}}) {
    double p = keep_probability(count, total, cfg);
    std::int64_t kept = 0;
    const int draws = 1'000'000;
    for (int i = 0; i < draws; ++i)
      if (rng.next_double() < p) ++kept;
    double empirical = static_cast<double>(kept) / draws;
    CHECK_THAT(empirical, Catch::Matchers::WithinAbs(p, 0.01));
  }
}

TEST_CASE("labeled file round trip") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "embtext_test_labeled.txt";
  std::vector<LabeledDoc> docs{{"T0", {"the", "study", "of", "mice"}},
                               {"T1T2", {"a", "small", "trial"}}};
  write_labeled_file(docs, path);
  auto loaded = read_labeled_file(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].label == "T0");
  CHECK(loaded[0].tokens == docs[0].tokens);
  CHECK(loaded[1].label == "T1T2");
  fs::remove(path);
}

TEST_CASE("labeled file rejects missing prefix") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "embtext_test_badlabel.txt";
  {
    std::ofstream out(path);
    out << "no label here\n";
  }
  CHECK_THROWS_AS(read_labeled_file(path), DataError);
  fs::remove(path);
}
