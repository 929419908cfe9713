#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gibbscert/approximator.hpp"

namespace gibbscert {

// Slice sampler for an unnormalized density m on a finite set.
//
// With distinct values 0 = v_0 < v_1 < ... < v_K = max m, the auxiliary height z is uniform
// on (0, m(y)) and the level set G_z = {y : m(y) > z} is constant on each interval
// (v_k, v_{k+1}], so every z-integral is an exact finite sum over levels. Levels are indexed
// 0..K-1 here: level k covers (v_k, v_{k+1}] and has level set {y : m(y) > v_k}.
class SliceModel {
 public:
  SliceModel() = default;
  // Throws NonPositiveWeight unless every weight is finite and > 0.
  explicit SliceModel(std::vector<double> weights);

  std::size_t states() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  // v_0 = 0, v_1, ..., v_K.
  const std::vector<double>& levels() const { return levels_; }
  std::size_t level_count() const { return level_sets_.size(); }
  const std::vector<std::size_t>& level_set(std::size_t k) const { return level_sets_.at(k); }
  double interval_length(std::size_t k) const { return levels_.at(k + 1) - levels_.at(k); }

  // Probability that the height drawn from y falls in level k: |(v_k, v_{k+1}] cap (0, m(y))| / m(y).
  double level_weight(std::size_t y, std::size_t k) const;

  // Target M_1, proportional to the weights.
  Dist target() const;

  // Per-level kernel on G_k (ordered by state index); must be reversible w.r.t. uniform.
  void set_level_kernel(std::size_t k, Kernel q);
  // Builds each level's kernel from a rule against the uniform law on G_k.
  // Rules are one per level, or a single rule for every level.
  void set_level_rules(const std::vector<ApproximatorRule>& rules);
  const std::optional<Kernel>& level_kernel(std::size_t k) const { return level_kernels_.at(k); }
  bool has_level_kernels() const;

 private:
  std::vector<double> weights_;
  std::vector<double> levels_;
  std::vector<std::vector<std::size_t>> level_sets_;
  std::vector<std::optional<Kernel>> level_kernels_;
};

// S(y, y') = (1/m(y)) sum_k |(v_k, v_{k+1}] cap (0, m(y))| 1{y' in G_k} / |G_k|.
Pair slice_exact(const SliceModel& model);

// S^(y, y') = (1/m(y)) sum_k |(v_k, v_{k+1}] cap (0, m(y))| Q_k(y, y'), with Q_k extended by
// the identity off G_k. Throws MissingLevelKernel when a level has no kernel.
Pair slice_hybrid(const SliceModel& model);

// The same S^ with every Q_k raised to the t-th power.
Pair slice_hybrid_t(const SliceModel& model, int t);

// Uniform law on G_k.
Dist level_target(const SliceModel& model, std::size_t k);

}  // namespace gibbscert
