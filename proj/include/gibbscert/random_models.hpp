#pragma once

#include <cstdint>
#include <vector>

#include "gibbscert/approximator.hpp"
#include "gibbscert/rng.hpp"

namespace gibbscert {

// Seeded model generators for sweeps and the `random` config section.

// Weights uniform on [0.05, 1); with `zero_fraction` > 0 that share of states gets mass 0
// (at least one state keeps mass).
JointDistribution random_joint(std::vector<std::size_t> sizes, SplitMix64& rng,
                               double zero_fraction = 0.0);

// A random kernel reversible w.r.t. `target`: symmetric positive flows W between supported
// states, K(a, b) = W(a, b) / (target(a) c) off the diagonal with c the largest row total,
// remainder on the diagonal. Null states hold still. Often not psd.
Mat random_reversible_kernel(const Dist& target, SplitMix64& rng);

// Explicit-matrix rules for every coordinate and every supported conditioning configuration.
ApproximatorSpec random_explicit_spec(const JointDistribution& joint, SplitMix64& rng);

// Strictly positive selection probabilities.
SelectionProbs random_selection(std::size_t n, SplitMix64& rng);

}  // namespace gibbscert
