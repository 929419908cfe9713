#include "gibbscert/random_models.hpp"

#include <algorithm>

namespace gibbscert {

JointDistribution random_joint(std::vector<std::size_t> sizes, SplitMix64& rng,
                               double zero_fraction) {
  ProductSpace space(std::move(sizes));
  const auto n = static_cast<Index>(space.total());
  Vec w(n);
  for (Index x = 0; x < n; ++x) w[x] = rng.uniform(0.05, 1.0);
  if (zero_fraction > 0) {
    const Index keep = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    for (Index x = 0; x < n; ++x)
      if (x != keep && rng.uniform() < zero_fraction) w[x] = 0;
  }
  return JointDistribution(std::move(space), Dist(std::move(w)));
}

Mat random_reversible_kernel(const Dist& target, SplitMix64& rng) {
  const Index n = target.size();
  Mat W = Mat::Zero(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      if (target[a] > 0 && target[b] > 0) W(a, b) = W(b, a) = rng.uniform(0.0, 1.0);
  double c = 0;
  for (Index a = 0; a < n; ++a)
    if (target[a] > 0) c = std::max(c, W.row(a).sum() / target[a]);
  // Occasionally leave slack on every row so some kernels are lazier.
  c *= rng.uniform() < 0.5 ? 1.0 : rng.uniform(1.0, 3.0);
  Mat K = Mat::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    if (c > 0 && target[a] > 0)
      for (Index b = 0; b < n; ++b)
        if (b != a) K(a, b) = W(a, b) / (target[a] * c);
    K(a, a) = std::max(0.0, 1.0 - K.row(a).sum());
  }
  return K;
}

ApproximatorSpec random_explicit_spec(const JointDistribution& joint, SplitMix64& rng) {
  ApproximatorSpec spec;
  for (std::size_t i = 0; i < joint.dims(); ++i) {
    std::map<std::size_t, Mat> table;
    const std::size_t block[] = {i};
    const std::size_t configs = joint.total() / joint.space().size(i);
    for (std::size_t y = 0; y < configs; ++y) {
      if (!(slice_mass(joint, block, y) > 0)) continue;
      table[y] = random_reversible_kernel(conditional(joint, i, y), rng);
    }
    spec.overrides[i] = ApproximatorRule::explicit_matrix(std::move(table));
  }
  return spec;
}

SelectionProbs random_selection(std::size_t n, SplitMix64& rng) {
  std::vector<double> p(n);
  for (auto& v : p) v = rng.uniform(0.1, 1.0);
  return SelectionProbs(std::move(p));
}

}  // namespace gibbscert
