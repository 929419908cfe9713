#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "gibbscert/joint.hpp"

namespace gibbscert {

// How a conditional draw from pi is replaced by one step of a kernel Q reversible w.r.t. pi.
//   exact            Q(z, .) = pi
//   lazy             Q = eps I + (1 - eps) pi
//   metropolis_rw    proposal uniform on the 2r index offsets {-r..-1, 1..r}; out-of-range
//                    proposals and rejections stay put; acceptance min(1, pi(x')/pi(x))
//   metropolis_indep proposal q (uniform when unset); acceptance min(1, pi(x')q(x) / pi(x)q(x'))
//   explicit_matrix  a user kernel per conditioning configuration y
struct ApproximatorRule {
  enum class Kind { exact, lazy, metropolis_rw, metropolis_indep, explicit_matrix };

  Kind kind = Kind::exact;
  double epsilon = 0.0;
  std::size_t radius = 1;
  std::optional<std::vector<double>> proposal;
  std::map<std::size_t, Mat> matrices;

  static ApproximatorRule exact() { return {}; }
  static ApproximatorRule lazy(double eps) {
    ApproximatorRule r;
    r.kind = Kind::lazy;
    r.epsilon = eps;
    return r;
  }
  static ApproximatorRule metropolis_rw(std::size_t radius) {
    ApproximatorRule r;
    r.kind = Kind::metropolis_rw;
    r.radius = radius;
    return r;
  }
  static ApproximatorRule metropolis_indep(std::optional<std::vector<double>> proposal = {}) {
    ApproximatorRule r;
    r.kind = Kind::metropolis_indep;
    r.proposal = std::move(proposal);
    return r;
  }
  static ApproximatorRule explicit_matrix(std::map<std::size_t, Mat> table) {
    ApproximatorRule r;
    r.kind = Kind::explicit_matrix;
    r.matrices = std::move(table);
    return r;
  }
};

const char* to_string(ApproximatorRule::Kind kind);

struct ApproximatorSpec {
  ApproximatorRule default_rule;
  std::map<std::size_t, ApproximatorRule> overrides;

  static ApproximatorSpec all(ApproximatorRule rule) { return {std::move(rule), {}}; }

  const ApproximatorRule& rule_for(std::size_t coordinate) const {
    auto it = overrides.find(coordinate);
    return it == overrides.end() ? default_rule : it->second;
  }
};

// The kernel a rule produces against `target`. `key` selects the explicit matrix.
// Throws InvalidSpec for malformed rules.
Kernel rule_kernel(const ApproximatorRule& rule, const Dist& target, std::size_t key = 0);

// Q_{i,y}, verified reversible w.r.t. the conditional pi_{i,y} at 1e-10.
Pair make_approximator(const JointDistribution& joint, const ApproximatorSpec& spec,
                       std::size_t i, std::size_t y);

}  // namespace gibbscert
