#include <cmath>
#include <numbers>

#include "gibbscert/config.hpp"

namespace gibbscert {

namespace {

RuleConfig lazy(double eps) {
  RuleConfig r;
  r.kind = "lazy";
  r.epsilon = eps;
  return r;
}

ModelConfig two_coin() {
  ModelConfig c;
  c.name = "two-coin";
  c.kind = ModelKind::product;
  c.sizes = {2, 2};
  c.product = {{0.5, 0.5}, {0.5, 0.5}};
  c.approx_default = lazy(0.2);
  c.selection_alt = {0.75, 0.25};
  return c;
}

ModelConfig three_coin_block() {
  ModelConfig c;
  c.name = "three-coin-block";
  c.kind = ModelKind::product;
  c.sizes = {2, 2, 2};
  c.product = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
  c.approx_default = lazy(0.3);
  c.blocks = {{2, 1}};
  return c;
}

ModelConfig two_point_slice() {
  ModelConfig c;
  c.name = "two-point-slice";
  c.kind = ModelKind::slice;
  c.slice_m = {2, 1};
  // Level 0 is {0, 1}; level 1 is the single state {0}, where every kernel is exact.
  c.level_rules = {lazy(0.5), RuleConfig{}};
  c.t = {2, 4, 8, 16};
  return c;
}

// Discretized spike-and-slab regression: beta_1, beta_2 on {-2..2}, inclusion flags
// z_1, z_2, inclusion probability q on {0.2, 0.5, 0.8}; coordinates in that order.
ModelConfig spike_slab_toy() {
  ModelConfig c;
  c.name = "spike-slab-toy";
  c.kind = ModelKind::weights;
  c.sizes = {5, 5, 2, 2, 3};
  const double x[4][2] = {{1.0, 0.5}, {0.8, -0.3}, {-0.2, 1.0}, {0.4, 0.9}};
  const double y[4] = {1.2, 0.7, 0.9, 1.5};
  const double q_grid[3] = {0.2, 0.5, 0.8};
  const double spike_sd = 0.5, slab_sd = 2.0;
  auto normal = [](double v, double sd) {
    return std::exp(-0.5 * v * v / (sd * sd)) / (sd * std::sqrt(2 * std::numbers::pi));
  };
  for (int q = 0; q < 3; ++q)
    for (int z2 = 0; z2 < 2; ++z2)
      for (int z1 = 0; z1 < 2; ++z1)
        for (int b2 = 0; b2 < 5; ++b2)
          for (int b1 = 0; b1 < 5; ++b1) {
            const double beta[2] = {b1 - 2.0, b2 - 2.0};
            const int z[2] = {z1, z2};
            double w = 1.0 / 3;
            for (int i = 0; i < 4; ++i) w *= normal(y[i] - x[i][0] * beta[0] - x[i][1] * beta[1], 1.0);
            for (int j = 0; j < 2; ++j) {
              w *= normal(beta[j], z[j] ? slab_sd : spike_sd);
              w *= z[j] ? q_grid[q] : 1 - q_grid[q];
            }
            c.weights.push_back(w);
          }
  c.approx_overrides[0].kind = "metropolis_rw";
  c.approx_overrides[1].kind = "metropolis_rw";
  c.suites = {"random-scan", "supplement"};
  return c;
}

ModelConfig random_demo() {
  ModelConfig c;
  c.name = "random";
  c.kind = ModelKind::random;
  c.sizes = {3, 2, 2};
  c.random_seed = 7;
  c.approx_default.kind = "random_explicit";
  c.approx_default.seed = 11;
  c.selection_alt = {0.5, 0.3, 0.2};
  c.seed = 1;
  return c;
}

}  // namespace

std::vector<std::string> list_demos() {
  return {"two-coin", "three-coin-block", "two-point-slice", "spike-slab-toy", "random"};
}

ModelConfig demo_config(const std::string& name) {
  if (name == "two-coin") return canonicalize(two_coin());
  if (name == "three-coin-block") return canonicalize(three_coin_block());
  if (name == "two-point-slice") return canonicalize(two_point_slice());
  if (name == "spike-slab-toy") return canonicalize(spike_slab_toy());
  if (name == "random") return canonicalize(random_demo());
  throw Error(ErrorCode::InvalidArgument, "unknown demo '" + name + "'");
}

}  // namespace gibbscert
