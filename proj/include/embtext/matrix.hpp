#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "embtext/rng.hpp"

namespace embtext {

// Dense row-major float32 matrix. Weight storage for every model in the
// library; rows are word/bucket/class vectors.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  float* row(std::size_t i) { return data_.data() + i * cols_; }
  const float* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::span<float> row_span(std::size_t i) { return {row(i), cols_}; }
  std::span<const float> row_span(std::size_t i) const { return {row(i), cols_}; }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  void fill_uniform(Rng& rng, float lo, float hi) {
    for (float& x : data_) x = rng.uniformf(lo, hi);
  }

  bool all_finite() const {
    for (float x : data_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

inline float dot(const float* a, const float* b, std::size_t n) {
  float s = 0.0f;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// y += a * x
inline void axpy(float a, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

inline double norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

// Cosine similarity; zero vectors compare as 0.
inline double cosine(std::span<const float> a, std::span<const float> b) {
  double num = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return num / (std::sqrt(na) * std::sqrt(nb));
}

// Mean of a set of matrix rows; empty set yields the zero vector.
inline std::vector<float> mean_of_rows(const Matrix& m,
                                       std::span<const std::int32_t> row_ids) {
  std::vector<float> out(m.cols(), 0.0f);
  if (row_ids.empty()) return out;
  for (std::int32_t r : row_ids) axpy(1.0f, m.row(static_cast<std::size_t>(r)), out.data(), m.cols());
  float inv = 1.0f / static_cast<float>(row_ids.size());
  for (float& x : out) x *= inv;
  return out;
}

}  // namespace embtext
