#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library code paths they check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace oracles {

// ROC AUC by brute-force pair counting with 0.5 tie credit.
inline double brute_force_auc(std::span<const double> scores, std::span<const int> labels) {
  double num = 0.0;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j])
        num += 1.0;
      else if (scores[i] == scores[j])
        num += 0.5;
    }
  }
  return num / static_cast<double>(pairs);
}

// Minimum weighted code length over all full prefix codes on the given
// counts, by exhaustive enumeration of non-decreasing code-length vectors
// satisfying Kraft equality. Counts are matched to lengths greedily
// (largest count, shortest code), which is optimal for a fixed multiset.
// Feasible for n <= 8.
inline std::int64_t optimal_prefix_code_length(std::vector<std::int64_t> counts) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  const int n = static_cast<int>(counts.size());
  const int max_len = n - 1;
  // Kraft units: one unit = 2^-(max_len); a length-l code consumes 2^(max_len - l).
  const std::int64_t total_units = 1LL << max_len;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<int> lengths(static_cast<std::size_t>(n));

  std::function<void(int, int, std::int64_t, std::int64_t)> rec =
      [&](int idx, int min_len, std::int64_t units_left, std::int64_t cost) {
        if (cost >= best) return;
        if (idx == n) {
          if (units_left == 0) best = cost;
          return;
        }
        int remaining = n - idx;
        for (int l = min_len; l <= max_len; ++l) {
          std::int64_t use = 1LL << (max_len - l);
          // every remaining symbol needs at least one unit
          if (units_left - use < remaining - 1) continue;
          lengths[static_cast<std::size_t>(idx)] = l;
          rec(idx + 1, l, units_left - use,
              cost + counts[static_cast<std::size_t>(idx)] * l);
        }
      };
  rec(0, 1, total_units, 0);
  return best;
}

// Central finite differences of a scalar function of a parameter vector.
inline std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
    double h = 1e-4) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double orig = x[i];
    x[i] = orig + h;
    double fp = f(x);
    x[i] = orig - h;
    double fm = f(x);
    x[i] = orig;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

inline double max_relative_error(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace oracles
