#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gibbscert/product_space.hpp"
#include "gibbscert/spectral.hpp"

namespace gibbscert {

using Vec = Vector<double>;
using Mat = Matrix<double>;
using Dist = ProbVec<double>;
using Kernel = StochasticKernel<double>;
using Pair = ReversiblePair<double>;
using Summary = SpectralSummary<double>;

class JointDistribution {
 public:
  JointDistribution() = default;
  JointDistribution(ProductSpace space, Dist weights);

  const ProductSpace& space() const { return space_; }
  const Dist& weights() const { return weights_; }
  std::size_t dims() const { return space_.dims(); }
  std::size_t total() const { return space_.total(); }

 private:
  ProductSpace space_;
  Dist weights_;
};

// Unnormalized mass of the slice {x : x_{-block} = y}; y indexes subspace(complement(block)).
double slice_mass(const JointDistribution& joint, std::span<const std::size_t> block, std::size_t y);

// Conditional law of x_block given x_{-block} = y, over subspace(block).
// Throws NullConditioningEvent when the slice has zero mass.
Dist conditional(const JointDistribution& joint, std::span<const std::size_t> block, std::size_t y);
Dist conditional(const JointDistribution& joint, std::size_t i, std::size_t y);

// The same conditional, as a joint over the block's own product space.
JointDistribution conditional_joint(const JointDistribution& joint,
                                    std::span<const std::size_t> block, std::size_t y);

// Law of x_keep over subspace(keep); keep must be non-empty.
Dist marginal(const JointDistribution& joint, std::span<const std::size_t> keep);

class SelectionProbs {
 public:
  SelectionProbs() = default;
  // Normalizes; entries must be non-negative with a positive sum.
  explicit SelectionProbs(std::vector<double> p);
  static SelectionProbs uniform(std::size_t n);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }
  bool is_uniform(double tol = 1e-12) const;

 private:
  std::vector<double> p_;
};

}  // namespace gibbscert
