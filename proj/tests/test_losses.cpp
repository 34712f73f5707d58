#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "embtext/losses.hpp"
#include "embtext/rng.hpp"

#include "oracles.hpp"

using namespace embtext;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

}  // namespace

TEST_CASE("sigmoid basics") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK_THAT(sigmoid(2.0) + sigmoid(-2.0), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("negative sampling gradient matches finite differences") {
  Rng rng(101);
  const std::size_t dim = 8;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> u = random_vec(rng, dim);
    std::vector<double> v = random_vec(rng, dim);
    int label = trial % 2;

    std::vector<double> gu(dim), gv(dim);
    ns_pair_grad(u, v, label, gu, gv);

    auto loss_of_u = [&](const std::vector<double>& uu) { return ns_pair_loss(uu, v, label); };
    auto loss_of_v = [&](const std::vector<double>& vv) { return ns_pair_loss(u, vv, label); };
    auto fd_u = oracles::finite_difference_gradient(loss_of_u, u);
    auto fd_v = oracles::finite_difference_gradient(loss_of_v, v);
    CHECK(oracles::max_relative_error(gu, fd_u) < 1e-4);
    CHECK(oracles::max_relative_error(gv, fd_v) < 1e-4);
  }
}

TEST_CASE("first positive update with zero output vector") {
  // sigma(0) = 0.5: dL/dv = (0.5 - 1) * u = 0 when u = 0, while
  // dL/du = -0.5 * v moves u toward v
  const std::size_t dim = 4;
  std::vector<double> u(dim, 0.0);
  std::vector<double> v{1.0, -2.0, 3.0, 0.5};
  std::vector<double> gu(dim), gv(dim);
  ns_pair_grad(u, v, 1, gu, gv);
  for (std::size_t i = 0; i < dim; ++i) {
    CHECK(gv[i] == 0.0);
    CHECK_THAT(gu[i], Catch::Matchers::WithinAbs(-0.5 * v[i], 1e-12));
  }
}

TEST_CASE("hierarchical softmax gradient matches finite differences") {
  Rng rng(202);
  const std::size_t dim = 8;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t path_len = 1 + static_cast<std::size_t>(rng.below(5));
    std::vector<std::vector<double>> nodes;
    std::vector<std::uint8_t> code;
    for (std::size_t j = 0; j < path_len; ++j) {
      nodes.push_back(random_vec(rng, dim));
      code.push_back(static_cast<std::uint8_t>(rng.below(2)));
    }
    std::vector<double> v = random_vec(rng, dim);

    std::vector<std::vector<double>> grad_nodes(path_len, std::vector<double>(dim));
    std::vector<double> grad_v(dim);
    hs_path_grad(nodes, code, v, grad_nodes, grad_v);

    auto loss_of_v = [&](const std::vector<double>& vv) { return hs_path_loss(nodes, code, vv); };
    auto fd_v = oracles::finite_difference_gradient(loss_of_v, v);
    CHECK(oracles::max_relative_error(grad_v, fd_v) < 1e-4);

    for (std::size_t j = 0; j < path_len; ++j) {
      auto loss_of_node = [&](const std::vector<double>& nn) {
        auto copy = nodes;
        copy[j] = nn;
        return hs_path_loss(copy, code, v);
      };
      auto fd_n = oracles::finite_difference_gradient(loss_of_node, nodes[j]);
      CHECK(oracles::max_relative_error(grad_nodes[j], fd_n) < 1e-4);
    }
  }
}

TEST_CASE("softmax cross-entropy gradient matches finite differences") {
  Rng rng(303);
  const std::size_t dim = 8, k = 3;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> w;
    for (std::size_t c = 0; c < k; ++c) w.push_back(random_vec(rng, dim));
    std::vector<double> h = random_vec(rng, dim);
    int target = static_cast<int>(rng.below(k));

    std::vector<std::vector<double>> gw(k, std::vector<double>(dim));
    std::vector<double> gh(dim);
    softmax_xent_grad(w, h, target, gw, gh);

    auto loss_of_h = [&](const std::vector<double>& hh) {
      return softmax_xent_loss(w, hh, target);
    };
    auto fd_h = oracles::finite_difference_gradient(loss_of_h, h);
    CHECK(oracles::max_relative_error(gh, fd_h) < 1e-4);

    for (std::size_t c = 0; c < k; ++c) {
      auto loss_of_w = [&](const std::vector<double>& ww) {
        auto copy = w;
        copy[c] = ww;
        return softmax_xent_loss(copy, h, target);
      };
      auto fd_w = oracles::finite_difference_gradient(loss_of_w, w[c]);
      CHECK(oracles::max_relative_error(gw[c], fd_w) < 1e-4);
    }
  }
}

TEST_CASE("softmax of zeros is uniform") {
  std::vector<double> logits(3, 0.0);
  auto p = softmax(logits);
  for (double x : p) CHECK_THAT(x, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-15));
}
