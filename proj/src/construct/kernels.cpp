#include "gibbscert/kernels.hpp"

#include <string>

namespace gibbscert {

std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  for (;;) {
    out.push_back(pick);
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

void accumulate_block_update(
    const JointDistribution& joint, std::span<const std::size_t> block, double weight, Mat& out,
    const std::function<Mat(std::size_t, const Dist&)>& kernel_for) {
  const auto& space = joint.space();
  const auto inside = space.offsets(block);
  const auto outside = space.offsets(space.complement(block));
  const Index d = static_cast<Index>(inside.size());
  for (std::size_t y = 0; y < outside.size(); ++y) {
    Vec w(d);
    for (Index a = 0; a < d; ++a)
      w[a] = joint.weights()[static_cast<Index>(inside[static_cast<std::size_t>(a)] + outside[y])];
    if (!(w.sum() > 0)) {
      for (Index a = 0; a < d; ++a) {
        const auto x = static_cast<Index>(inside[static_cast<std::size_t>(a)] + outside[y]);
        out(x, x) += weight;
      }
      continue;
    }
    const Mat q = kernel_for(y, Dist(w));
    for (Index a = 0; a < d; ++a) {
      const auto x = static_cast<Index>(inside[static_cast<std::size_t>(a)] + outside[y]);
      for (Index b = 0; b < d; ++b) {
        if (q(a, b) == 0.0) continue;
        out(x, static_cast<Index>(inside[static_cast<std::size_t>(b)] + outside[y])) += weight * q(a, b);
      }
    }
  }
}

namespace {

void require_selection(const JointDistribution& joint, const SelectionProbs& p) {
  if (p.size() != joint.dims())
    throw Error(ErrorCode::DimensionMismatch, "selection probabilities have " +
                                                  std::to_string(p.size()) + " entries for " +
                                                  std::to_string(joint.dims()) + " coordinates");
}

void require_two_block(const JointDistribution& joint) {
  if (joint.dims() != 2)
    throw Error(ErrorCode::NotTwoBlock,
                "data augmentation needs exactly 2 coordinates, got " + std::to_string(joint.dims()));
}

Mat independence_rows(const Dist& pi) { return Vec::Ones(pi.size()) * pi.weights().transpose(); }

}  // namespace

Pair exact_random_scan(const JointDistribution& joint, const SelectionProbs& p) {
  require_selection(joint, p);
  const auto n = static_cast<Index>(joint.total());
  Mat t = Mat::Zero(n, n);
  for (std::size_t i = 0; i < joint.dims(); ++i) {
    if (p[i] == 0.0) continue;
    const std::size_t block[] = {i};
    accumulate_block_update(joint, block, p[i], t,
                            [](std::size_t, const Dist& pi) { return independence_rows(pi); });
  }
  return check_reversibility(Kernel(std::move(t)), joint.weights());
}

Pair hybrid_random_scan(const JointDistribution& joint, const SelectionProbs& p,
                        const ApproximatorSpec& spec) {
  require_selection(joint, p);
  const auto n = static_cast<Index>(joint.total());
  Mat t = Mat::Zero(n, n);
  for (std::size_t i = 0; i < joint.dims(); ++i) {
    if (p[i] == 0.0) continue;
    const std::size_t block[] = {i};
    accumulate_block_update(joint, block, p[i], t, [&](std::size_t y, const Dist& pi) {
      return check_reversibility(rule_kernel(spec.rule_for(i), pi, y), pi).kernel().matrix();
    });
  }
  return check_reversibility(Kernel(std::move(t)), joint.weights());
}

Pair block_random_scan(const JointDistribution& joint, std::size_t ell) {
  const std::size_t n = joint.dims();
  if (ell < 1 || ell + 1 > n)
    throw Error(ErrorCode::InvalidBlockSize, "block size " + std::to_string(ell) +
                                                 " must lie in [1, " + std::to_string(n) + " - 1]");
  const auto total = static_cast<Index>(joint.total());
  Mat t = Mat::Zero(total, total);
  const auto blocks = subsets_of_size(n, ell);
  const double weight = 1.0 / static_cast<double>(blocks.size());
  for (const auto& block : blocks)
    accumulate_block_update(joint, block, weight, t,
                            [](std::size_t, const Dist& pi) { return independence_rows(pi); });
  return check_reversibility(Kernel(std::move(t)), joint.weights());
}

Pair inner_block_kernel(const JointDistribution& joint, std::span<const std::size_t> block,
                        std::size_t y, std::size_t m) {
  if (m < 1 || m >= block.size())
    throw Error(ErrorCode::InvalidBlockSize, "inner block size " + std::to_string(m) +
                                                 " must lie in [1, " +
                                                 std::to_string(block.size()) + " - 1]");
  return block_random_scan(conditional_joint(joint, block, y), m);
}

Pair da_exact(const JointDistribution& joint) {
  require_two_block(joint);
  const std::size_t first[] = {0};
  const Dist m1 = marginal(joint, first);
  const auto d1 = static_cast<Index>(joint.space().size(0));
  const auto d2 = joint.space().size(1);
  std::vector<Dist> given_z(d2);
  std::vector<bool> has_z(d2, false);
  for (std::size_t z = 0; z < d2; ++z) {
    const std::size_t block[] = {0};
    if (slice_mass(joint, block, z) > 0) {
      given_z[z] = conditional(joint, 0, z);
      has_z[z] = true;
    }
  }
  Mat s = Mat::Zero(d1, d1);
  for (Index y = 0; y < d1; ++y) {
    if (!(m1[y] > 0)) {
      s(y, y) = 1.0;
      continue;
    }
    const Dist pz = conditional(joint, 1, static_cast<std::size_t>(y));
    for (std::size_t z = 0; z < d2; ++z) {
      const double wz = pz[static_cast<Index>(z)];
      if (wz > 0) s.row(y) += wz * given_z[z].weights().transpose();
    }
  }
  return check_reversibility(Kernel(std::move(s)), m1);
}

Pair da_hybrid_t(const JointDistribution& joint, const ApproximatorSpec& spec, int t) {
  require_two_block(joint);
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  const std::size_t first[] = {0};
  const Dist m1 = marginal(joint, first);
  const auto d1 = static_cast<Index>(joint.space().size(0));
  const auto d2 = joint.space().size(1);
  std::vector<Mat> q(d2);
  for (std::size_t z = 0; z < d2; ++z) {
    const std::size_t block[] = {0};
    if (!(slice_mass(joint, block, z) > 0)) continue;
    const Pair qz = make_approximator(joint, spec, 0, z);
    q[z] = t == 1 ? qz.kernel().matrix() : t_step(qz.kernel(), t).matrix();
  }
  Mat s = Mat::Zero(d1, d1);
  for (Index y = 0; y < d1; ++y) {
    if (!(m1[y] > 0)) {
      s(y, y) = 1.0;
      continue;
    }
    const Dist pz = conditional(joint, 1, static_cast<std::size_t>(y));
    for (std::size_t z = 0; z < d2; ++z) {
      const double wz = pz[static_cast<Index>(z)];
      if (wz > 0) s.row(y) += wz * q[z].row(y);
    }
  }
  return check_reversibility(Kernel(std::move(s), 1e-10), m1);
}

Pair da_hybrid(const JointDistribution& joint, const ApproximatorSpec& spec) {
  return da_hybrid_t(joint, spec, 1);
}

}  // namespace gibbscert
