#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "embtext/corpus.hpp"
#include "embtext/error.hpp"

namespace embtext {

// Prefix-free binary codes over the vocabulary plus, per word, the sequence
// of internal tree nodes from the root to the word's parent. Internal nodes
// are numbered 0..V-2 in creation order; the hierarchical-softmax output
// matrix is indexed by these ids.
struct HuffmanCoding {
  std::vector<std::vector<std::uint8_t>> codes;   // per word id, bits (0 = left)
  std::vector<std::vector<std::int32_t>> paths;   // per word id, internal node ids
  std::size_t internal_count = 0;                 // V - 1
};

// Standard Huffman construction over word counts. Tie-break: among
// equal-weight candidates the earlier-created node merges first; the first
// of the two popped nodes becomes the left child (bit 0).
inline HuffmanCoding build_huffman(const Vocabulary& vocab) {
  const std::size_t v = vocab.size();
  if (v < 2) throw DataError("huffman tree needs a vocabulary of at least 2 words");

  struct Node {
    std::int64_t weight;
    std::int32_t parent = -1;
    std::uint8_t bit = 0;
  };
  std::vector<Node> nodes;
  nodes.reserve(2 * v - 1);
  for (std::size_t i = 0; i < v; ++i)
    nodes.push_back({vocab.count(static_cast<std::int32_t>(i))});

  // (weight, creation index); creation index doubles as the node id.
  using Entry = std::pair<std::int64_t, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t i = 0; i < v; ++i)
    heap.push({nodes[i].weight, static_cast<std::int32_t>(i)});

  while (heap.size() > 1) {
    auto [wl, left] = heap.top();
    heap.pop();
    auto [wr, right] = heap.top();
    heap.pop();
    std::int32_t merged = static_cast<std::int32_t>(nodes.size());
    nodes.push_back({wl + wr});
    nodes[static_cast<std::size_t>(left)].parent = merged;
    nodes[static_cast<std::size_t>(left)].bit = 0;
    nodes[static_cast<std::size_t>(right)].parent = merged;
    nodes[static_cast<std::size_t>(right)].bit = 1;
    heap.push({wl + wr, merged});
  }

  HuffmanCoding coding;
  coding.internal_count = v - 1;
  coding.codes.resize(v);
  coding.paths.resize(v);
  for (std::size_t w = 0; w < v; ++w) {
    std::vector<std::uint8_t> code;
    std::vector<std::int32_t> path;
    for (std::int32_t n = static_cast<std::int32_t>(w); nodes[static_cast<std::size_t>(n)].parent >= 0;
         n = nodes[static_cast<std::size_t>(n)].parent) {
      code.push_back(nodes[static_cast<std::size_t>(n)].bit);
      // internal node id = creation order among internal nodes
      path.push_back(nodes[static_cast<std::size_t>(n)].parent - static_cast<std::int32_t>(v));
    }
    coding.codes[w].assign(code.rbegin(), code.rend());
    coding.paths[w].assign(path.rbegin(), path.rend());
  }
  return coding;
}

}  // namespace embtext
