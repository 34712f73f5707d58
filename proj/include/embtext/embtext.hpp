#pragma once

// Umbrella header for the embtext library: word-embedding training (CBOW and
// skip-gram with hierarchical softmax or negative sampling, optional subword
// n-grams), embedding-averaging text classifiers, bag-of-words baselines, and
// a cross-validation / model-comparison harness.

#include "embtext/baselines.hpp"
#include "embtext/classifier.hpp"
#include "embtext/compare.hpp"
#include "embtext/corpus.hpp"
#include "embtext/embeddings.hpp"
#include "embtext/error.hpp"
#include "embtext/eval.hpp"
#include "embtext/huffman.hpp"
#include "embtext/losses.hpp"
#include "embtext/matrix.hpp"
#include "embtext/rng.hpp"
#include "embtext/sampling.hpp"
#include "embtext/subword.hpp"
#include "embtext/synth.hpp"
#include "embtext/vecio.hpp"
