#include "gibbscert/joint.hpp"

#include <cmath>
#include <string>

namespace gibbscert {

JointDistribution::JointDistribution(ProductSpace space, Dist weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (static_cast<std::size_t>(weights_.size()) != space_.total())
    throw Error(ErrorCode::DimensionMismatch,
                "joint has " + std::to_string(weights_.size()) + " weights, expected " +
                    std::to_string(space_.total()));
}

double slice_mass(const JointDistribution& joint, std::span<const std::size_t> block,
                  std::size_t y) {
  const auto& space = joint.space();
  const auto rest = space.complement(block);
  const auto inside = space.offsets(block);
  const auto outside = space.offsets(rest);
  if (y >= outside.size()) throw Error(ErrorCode::InvalidArgument, "conditioning configuration out of range");
  double mass = 0;
  for (auto a : inside) mass += joint.weights()[static_cast<Index>(a + outside[y])];
  return mass;
}

Dist conditional(const JointDistribution& joint, std::span<const std::size_t> block,
                 std::size_t y) {
  const auto& space = joint.space();
  const auto rest = space.complement(block);
  const auto inside = space.offsets(block);
  const auto outside = space.offsets(rest);
  if (y >= outside.size()) throw Error(ErrorCode::InvalidArgument, "conditioning configuration out of range");
  Vec w(static_cast<Index>(inside.size()));
  for (std::size_t a = 0; a < inside.size(); ++a)
    w[static_cast<Index>(a)] = joint.weights()[static_cast<Index>(inside[a] + outside[y])];
  if (!(w.sum() > 0))
    throw Error(ErrorCode::NullConditioningEvent,
                "conditioning configuration " + std::to_string(y) + " has zero mass");
  return Dist(std::move(w));
}

Dist conditional(const JointDistribution& joint, std::size_t i, std::size_t y) {
  const std::size_t block[] = {i};
  return conditional(joint, block, y);
}

JointDistribution conditional_joint(const JointDistribution& joint,
                                    std::span<const std::size_t> block, std::size_t y) {
  return JointDistribution(joint.space().subspace(block), conditional(joint, block, y));
}

Dist marginal(const JointDistribution& joint, std::span<const std::size_t> keep) {
  if (keep.empty()) throw Error(ErrorCode::InvalidArgument, "marginal needs at least one coordinate");
  const auto& space = joint.space();
  const auto inside = space.offsets(keep);
  const auto outside = space.offsets(space.complement(keep));
  Vec w = Vec::Zero(static_cast<Index>(inside.size()));
  for (std::size_t a = 0; a < inside.size(); ++a)
    for (auto b : outside) w[static_cast<Index>(a)] += joint.weights()[static_cast<Index>(inside[a] + b)];
  return Dist(std::move(w));
}

SelectionProbs::SelectionProbs(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw Error(ErrorCode::InvalidArgument, "selection probabilities are empty");
  double total = 0;
  for (double v : p_) {
    if (!std::isfinite(v) || v < 0)
      throw Error(ErrorCode::InvalidArgument, "selection probabilities must be non-negative");
    total += v;
  }
  if (!(total > 0)) throw Error(ErrorCode::InvalidArgument, "selection probabilities sum to zero");
  for (double& v : p_) v /= total;
}

SelectionProbs SelectionProbs::uniform(std::size_t n) {
  return SelectionProbs(std::vector<double>(n, 1.0));
}

bool SelectionProbs::is_uniform(double tol) const {
  const double u = 1.0 / static_cast<double>(p_.size());
  for (double v : p_)
    if (std::abs(v - u) > tol) return false;
  return true;
}

}  // namespace gibbscert
