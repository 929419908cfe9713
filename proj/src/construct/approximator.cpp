#include "gibbscert/approximator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gibbscert {

const char* to_string(ApproximatorRule::Kind kind) {
  switch (kind) {
    case ApproximatorRule::Kind::exact: return "exact";
    case ApproximatorRule::Kind::lazy: return "lazy";
    case ApproximatorRule::Kind::metropolis_rw: return "metropolis_rw";
    case ApproximatorRule::Kind::metropolis_indep: return "metropolis_indep";
    case ApproximatorRule::Kind::explicit_matrix: return "explicit";
  }
  return "exact";
}

namespace {

// Fills the diagonal so every row sums to one.
void close_rows(Mat& q) {
  for (Index x = 0; x < q.rows(); ++x) {
    q(x, x) = 0;
    q(x, x) = std::max(0.0, 1.0 - q.row(x).sum());
  }
}

Mat metropolis_rw(const Vec& pi, std::size_t radius) {
  const Index n = pi.size();
  const Index r = static_cast<Index>(radius);
  const double proposal = 1.0 / static_cast<double>(2 * r);
  Mat q = Mat::Zero(n, n);
  for (Index x = 0; x < n; ++x)
    for (Index y = std::max<Index>(0, x - r); y <= std::min<Index>(n - 1, x + r); ++y) {
      if (y == x) continue;
      const double accept = pi[x] > 0 ? std::min(1.0, pi[y] / pi[x]) : 1.0;
      q(x, y) = proposal * accept;
    }
  close_rows(q);
  return q;
}

Mat metropolis_indep(const Vec& pi, const Vec& prop) {
  const Index n = pi.size();
  Mat q = Mat::Zero(n, n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      if (y == x || prop[y] <= 0) continue;
      const double num = pi[y] * prop[x];
      const double den = pi[x] * prop[y];
      const double accept = den > 0 ? std::min(1.0, num / den) : 1.0;
      q(x, y) = prop[y] * accept;
    }
  close_rows(q);
  return q;
}

}  // namespace

Kernel rule_kernel(const ApproximatorRule& rule, const Dist& target, std::size_t key) {
  const Vec& pi = target.weights();
  const Index n = pi.size();
  switch (rule.kind) {
    case ApproximatorRule::Kind::exact:
      return Kernel::independence(target);
    case ApproximatorRule::Kind::lazy: {
      if (!(rule.epsilon >= 0.0 && rule.epsilon <= 1.0))
        throw Error(ErrorCode::InvalidSpec, "lazy epsilon must lie in [0, 1]");
      Mat q = (1.0 - rule.epsilon) * (Vec::Ones(n) * pi.transpose());
      q.diagonal().array() += rule.epsilon;
      return Kernel(std::move(q));
    }
    case ApproximatorRule::Kind::metropolis_rw:
      if (rule.radius < 1) throw Error(ErrorCode::InvalidSpec, "random-walk radius must be >= 1");
      return Kernel(metropolis_rw(pi, rule.radius));
    case ApproximatorRule::Kind::metropolis_indep: {
      Vec prop = Vec::Ones(n);
      if (rule.proposal) {
        if (static_cast<Index>(rule.proposal->size()) != n)
          throw Error(ErrorCode::InvalidSpec, "independence proposal has " +
                                                  std::to_string(rule.proposal->size()) +
                                                  " entries, expected " + std::to_string(n));
        for (Index i = 0; i < n; ++i) {
          prop[i] = (*rule.proposal)[static_cast<std::size_t>(i)];
          if (!std::isfinite(prop[i]) || prop[i] < 0)
            throw Error(ErrorCode::InvalidSpec, "independence proposal must be non-negative");
        }
      }
      if (!(prop.sum() > 0)) throw Error(ErrorCode::InvalidSpec, "independence proposal is zero");
      prop /= prop.sum();
      return Kernel(metropolis_indep(pi, prop));
    }
    case ApproximatorRule::Kind::explicit_matrix: {
      auto it = rule.matrices.find(key);
      if (it == rule.matrices.end())
        throw Error(ErrorCode::InvalidSpec,
                    "no explicit matrix for configuration " + std::to_string(key));
      if (it->second.rows() != n || it->second.cols() != n)
        throw Error(ErrorCode::InvalidSpec, "explicit matrix for configuration " +
                                                std::to_string(key) + " must be " +
                                                std::to_string(n) + "x" + std::to_string(n));
      try {
        return Kernel(it->second, 1e-10);
      } catch (const Error& e) {
        throw Error(ErrorCode::InvalidSpec, e.what());
      }
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown approximator rule");
}

Pair make_approximator(const JointDistribution& joint, const ApproximatorSpec& spec,
                       std::size_t i, std::size_t y) {
  Dist target = conditional(joint, i, y);
  Kernel q = rule_kernel(spec.rule_for(i), target, y);
  return check_reversibility(q, target);
}

}  // namespace gibbscert
