#include "gibbscert/slice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gibbscert {

SliceModel::SliceModel(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorCode::NonPositiveWeight, "slice model has no states");
  for (std::size_t y = 0; y < weights_.size(); ++y)
    if (!std::isfinite(weights_[y]) || !(weights_[y] > 0))
      throw Error(ErrorCode::NonPositiveWeight,
                  "slice weight " + std::to_string(y) + " must be positive and finite");

  std::vector<double> distinct = weights_;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  levels_.push_back(0.0);
  levels_.insert(levels_.end(), distinct.begin(), distinct.end());

  level_sets_.resize(distinct.size());
  for (std::size_t k = 0; k < distinct.size(); ++k)
    for (std::size_t y = 0; y < weights_.size(); ++y)
      if (weights_[y] > levels_[k]) level_sets_[k].push_back(y);
  level_kernels_.resize(distinct.size());
}

double SliceModel::level_weight(std::size_t y, std::size_t k) const {
  const double top = std::min(levels_.at(k + 1), weights_.at(y));
  const double len = top - levels_[k];
  return len > 0 ? len / weights_[y] : 0.0;
}

Dist SliceModel::target() const {
  Vec w(static_cast<Index>(weights_.size()));
  for (std::size_t y = 0; y < weights_.size(); ++y) w[static_cast<Index>(y)] = weights_[y];
  return Dist(std::move(w));
}

Dist level_target(const SliceModel& model, std::size_t k) {
  return Dist::uniform(static_cast<Index>(model.level_set(k).size()));
}

void SliceModel::set_level_kernel(std::size_t k, Kernel q) {
  if (k >= level_count()) throw Error(ErrorCode::InvalidArgument, "level index out of range");
  if (static_cast<std::size_t>(q.size()) != level_sets_[k].size())
    throw Error(ErrorCode::DimensionMismatch,
                "level " + std::to_string(k) + " kernel must be " +
                    std::to_string(level_sets_[k].size()) + "x" +
                    std::to_string(level_sets_[k].size()));
  check_reversibility(q, level_target(*this, k));
  level_kernels_[k] = std::move(q);
}

void SliceModel::set_level_rules(const std::vector<ApproximatorRule>& rules) {
  if (rules.size() != 1 && rules.size() != level_count())
    throw Error(ErrorCode::InvalidSpec, "expected 1 or " + std::to_string(level_count()) +
                                            " level rules, got " + std::to_string(rules.size()));
  for (std::size_t k = 0; k < level_count(); ++k) {
    const auto& rule = rules.size() == 1 ? rules[0] : rules[k];
    set_level_kernel(k, rule_kernel(rule, level_target(*this, k), k));
  }
}

bool SliceModel::has_level_kernels() const {
  return std::all_of(level_kernels_.begin(), level_kernels_.end(),
                     [](const auto& q) { return q.has_value(); });
}

Pair slice_exact(const SliceModel& model) {
  const auto n = static_cast<Index>(model.states());
  Mat s = Mat::Zero(n, n);
  for (Index y = 0; y < n; ++y)
    for (std::size_t k = 0; k < model.level_count(); ++k) {
      const double w = model.level_weight(static_cast<std::size_t>(y), k);
      if (w == 0.0) continue;
      const auto& g = model.level_set(k);
      const double each = w / static_cast<double>(g.size());
      for (auto yp : g) s(y, static_cast<Index>(yp)) += each;
    }
  return check_reversibility(Kernel(std::move(s)), model.target());
}

Pair slice_hybrid_t(const SliceModel& model, int t) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  const auto n = static_cast<Index>(model.states());
  Mat s = Mat::Zero(n, n);
  for (std::size_t k = 0; k < model.level_count(); ++k) {
    const auto& q = model.level_kernel(k);
    if (!q) throw Error(ErrorCode::MissingLevelKernel, "level " + std::to_string(k) + " has no kernel");
    const Mat qt = t == 1 ? q->matrix() : t_step(*q, t).matrix();
    const auto& g = model.level_set(k);
    std::vector<Index> pos(static_cast<std::size_t>(n), -1);
    for (std::size_t a = 0; a < g.size(); ++a) pos[g[a]] = static_cast<Index>(a);
    for (Index y = 0; y < n; ++y) {
      const double w = model.level_weight(static_cast<std::size_t>(y), k);
      if (w == 0.0) continue;
      const Index a = pos[static_cast<std::size_t>(y)];
      if (a < 0) {
        s(y, y) += w;
        continue;
      }
      for (std::size_t b = 0; b < g.size(); ++b) s(y, static_cast<Index>(g[b])) += w * qt(a, static_cast<Index>(b));
    }
  }
  return check_reversibility(Kernel(std::move(s), 1e-10), model.target());
}

Pair slice_hybrid(const SliceModel& model) { return slice_hybrid_t(model, 1); }

}  // namespace gibbscert
