#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace embtext {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---------------------------------------------------------------------------
// Negative-sampling unit: one (output vector u, hidden vector v, label) pair.
// loss = -label*log(sigmoid(u.v)) - (1-label)*log(sigmoid(-u.v))
// ---------------------------------------------------------------------------

inline double ns_pair_loss(std::span<const double> u, std::span<const double> v,
                           int label) {
  double x = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) x += u[i] * v[i];
  // log(sigmoid(x)) written as -log1p(exp(-x)) for stability
  auto log_sigmoid = [](double t) { return -std::log1p(std::exp(-t)); };
  return label ? -log_sigmoid(x) : -log_sigmoid(-x);
}

// dL/du and dL/dv; both equal (sigmoid(u.v) - label) times the other vector.
inline void ns_pair_grad(std::span<const double> u, std::span<const double> v,
                         int label, std::span<double> grad_u,
                         std::span<double> grad_v) {
  double x = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) x += u[i] * v[i];
  double err = sigmoid(x) - static_cast<double>(label);
  for (std::size_t i = 0; i < u.size(); ++i) {
    grad_u[i] = err * v[i];
    grad_v[i] = err * u[i];
  }
}

// ---------------------------------------------------------------------------
// Hierarchical-softmax unit: loss along one Huffman path.
// Per node j with code bit b_j: loss_j = -log(sigmoid((1 - 2*b_j) * u_j.v)),
// so the SGD step g = lr*(1 - b_j - sigmoid(u_j.v)) is exactly -lr * dL/d(u_j.v).
// ---------------------------------------------------------------------------

inline double hs_path_loss(std::span<const std::vector<double>> node_vectors,
                           std::span<const std::uint8_t> code,
                           std::span<const double> v) {
  double loss = 0.0;
  for (std::size_t j = 0; j < code.size(); ++j) {
    double x = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) x += node_vectors[j][i] * v[i];
    double sign = code[j] ? -1.0 : 1.0;
    loss += std::log1p(std::exp(-sign * x));
  }
  return loss;
}

inline void hs_path_grad(std::span<const std::vector<double>> node_vectors,
                         std::span<const std::uint8_t> code,
                         std::span<const double> v,
                         std::span<std::vector<double>> grad_nodes,
                         std::span<double> grad_v) {
  for (double& g : grad_v) g = 0.0;
  for (std::size_t j = 0; j < code.size(); ++j) {
    double x = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) x += node_vectors[j][i] * v[i];
    double err = sigmoid(x) - (1.0 - static_cast<double>(code[j]));
    for (std::size_t i = 0; i < v.size(); ++i) {
      grad_nodes[j][i] = err * v[i];
      grad_v[i] += err * node_vectors[j][i];
    }
  }
}

// ---------------------------------------------------------------------------
// Softmax cross-entropy over K classes, no bias term.
// ---------------------------------------------------------------------------

inline std::vector<double> softmax(std::span<const double> logits) {
  double mx = logits[0];
  for (double x : logits) mx = std::max(mx, x);
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    p[k] = std::exp(logits[k] - mx);
    z += p[k];
  }
  for (double& x : p) x /= z;
  return p;
}

// logits_k = weights[k].hidden over K rows.
inline std::vector<double> linear_softmax(std::span<const std::vector<double>> weights,
                                          std::span<const double> hidden) {
  std::vector<double> logits(weights.size(), 0.0);
  for (std::size_t k = 0; k < weights.size(); ++k)
    for (std::size_t i = 0; i < hidden.size(); ++i)
      logits[k] += weights[k][i] * hidden[i];
  return softmax(logits);
}

inline double softmax_xent_loss(std::span<const std::vector<double>> weights,
                                std::span<const double> hidden, int target) {
  std::vector<double> p = linear_softmax(weights, hidden);
  return -std::log(std::max(p[static_cast<std::size_t>(target)], 1e-300));
}

// dL/dW_k = (p_k - y_k) * hidden, dL/dhidden = sum_k (p_k - y_k) * W_k
inline void softmax_xent_grad(std::span<const std::vector<double>> weights,
                              std::span<const double> hidden, int target,
                              std::span<std::vector<double>> grad_w,
                              std::span<double> grad_hidden) {
  std::vector<double> p = linear_softmax(weights, hidden);
  for (double& g : grad_hidden) g = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    double err = p[k] - (static_cast<int>(k) == target ? 1.0 : 0.0);
    for (std::size_t i = 0; i < hidden.size(); ++i) {
      grad_w[k][i] = err * hidden[i];
      grad_hidden[i] += err * weights[k][i];
    }
  }
}

}  // namespace embtext
