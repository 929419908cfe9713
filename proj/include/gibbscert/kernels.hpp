#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gibbscert/approximator.hpp"

namespace gibbscert {

// Every builder returns a pair verified reversible at 1e-10 against its designated target:
// the joint for the random-scan families, the first-coordinate marginal for the two-block
// (data augmentation) families. Rows of zero-mass states whose conditioning slice is null
// hold still, so they never leave the null set.

// T(x, x') = sum_i p_i pi_{i,x_{-i}}(x'_i) 1{x'_{-i} = x_{-i}}.
Pair exact_random_scan(const JointDistribution& joint, const SelectionProbs& p);

// T^(x, x') = sum_i p_i Q_{i,x_{-i}}(x_i, x'_i) 1{x'_{-i} = x_{-i}}.
Pair hybrid_random_scan(const JointDistribution& joint, const SelectionProbs& p,
                        const ApproximatorSpec& spec);

// Uniformly chosen block of `ell` coordinates redrawn from its joint conditional.
// Requires 1 <= ell <= n-1.
Pair block_random_scan(const JointDistribution& joint, std::size_t ell);

// Q_{block,y}: the ell-coordinate conditional pi_{block,y} explored by a random scan that
// redraws m of its coordinates at a time. Requires 1 <= m < |block|.
Pair inner_block_kernel(const JointDistribution& joint, std::span<const std::size_t> block,
                        std::size_t y, std::size_t m);

// S(y, y') = sum_z pi_{2,y}(z) pi_{1,z}(y') on the first coordinate. Requires n = 2.
Pair da_exact(const JointDistribution& joint);

// S^(y, y') = sum_z pi_{2,y}(z) Q_{1,z}(y, y'), Q from spec.rule_for(0).
Pair da_hybrid(const JointDistribution& joint, const ApproximatorSpec& spec);

// S^_t(y, y') = sum_z pi_{2,y}(z) Q_{1,z}^t(y, y').
Pair da_hybrid_t(const JointDistribution& joint, const ApproximatorSpec& spec, int t);

// Adds weight * Q_y(x_B, x'_B) (x_{-B} held fixed) to `out` for every configuration y of
// the complement of `block`; Q_y comes from `kernel_for(y, pi_{B,y})` when the slice has
// mass, otherwise the rows hold still.
void accumulate_block_update(
    const JointDistribution& joint, std::span<const std::size_t> block, double weight, Mat& out,
    const std::function<Mat(std::size_t y, const Dist& conditional)>& kernel_for);

// All size-k subsets of {0..n-1}, lexicographic.
std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k);

double binomial(std::size_t n, std::size_t k);

}  // namespace gibbscert
