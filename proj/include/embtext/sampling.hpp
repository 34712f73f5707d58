#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "embtext/corpus.hpp"
#include "embtext/error.hpp"
#include "embtext/rng.hpp"

namespace embtext {

// Negative-sampling table: word id sampling probability proportional to
// count^power, realized to within 1/table_size quantization.
class UnigramTable {
 public:
  explicit UnigramTable(const Vocabulary& vocab, double power = 0.75,
                        std::size_t table_size = 10'000'000) {
    const std::size_t v = vocab.size();
    if (v < 2) throw DataError("unigram table needs a vocabulary of at least 2 words");
    if (table_size < v)
      throw DataError("unigram table smaller than the vocabulary");

    std::vector<double> cum(v);
    double z = 0.0;
    for (std::size_t i = 0; i < v; ++i) {
      z += std::pow(static_cast<double>(vocab.count(static_cast<std::int32_t>(i))), power);
      cum[i] = z;
    }

    table_.resize(table_size);
    std::size_t word = 0;
    for (std::size_t a = 0; a < table_size; ++a) {
      double target = (static_cast<double>(a) + 0.5) / static_cast<double>(table_size) * z;
      while (word + 1 < v && cum[word] < target) ++word;
      table_[a] = static_cast<std::int32_t>(word);
    }

    // every in-vocabulary word must be reachable
    std::vector<bool> seen(v, false);
    for (std::int32_t id : table_) seen[static_cast<std::size_t>(id)] = true;
    for (std::size_t i = 0; i < v; ++i)
      if (!seen[i])
        throw DataError("unigram table too small to cover word id " + std::to_string(i));
  }

  std::size_t size() const { return table_.size(); }

  std::int32_t sample(Rng& rng) const {
    return table_[static_cast<std::size_t>(rng.below(table_.size()))];
  }

  // Rejection loop for negatives that collide with the positive target.
  std::int32_t sample_excluding(Rng& rng, std::int32_t exclude) const {
    std::int32_t w;
    do {
      w = sample(rng);
    } while (w == exclude);
    return w;
  }

 private:
  std::vector<std::int32_t> table_;
};

}  // namespace embtext
