#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "detail.hpp"
#include "gibbscert/rng.hpp"

namespace gibbscert {

namespace detail {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string t_suffix(int t) { return ".t" + std::to_string(t); }

Mat battery(std::initializer_list<const Summary*> summaries, const Dist& w,
            const CheckOptions& opts) {
  Index cols = 0;
  for (const auto* s : summaries) cols += s->eigenfunctions.cols();
  Mat out(w.size(), cols + static_cast<Index>(opts.trials));
  Index c = 0;
  for (const auto* s : summaries) {
    out.middleCols(c, s->eigenfunctions.cols()) = s->eigenfunctions;
    c += s->eigenfunctions.cols();
  }
  const Mat extra = test_battery(Summary{}, w, opts.trials, opts.seed);
  out.conservativeResize(Eigen::NoChange, c + extra.cols());
  out.rightCols(extra.cols()) = extra;
  return out;
}

Vec asymptotic_variances(const Pair& rev, const Summary& summary, const Mat& centered) {
  if (!(summary.operator_norm < 1 - 1e-12))
    throw Error(ErrorCode::NoSpectralGap, "operator norm " + num(summary.operator_norm));
  const auto& w = rev.stationary();
  const auto& sup = summary.support;
  const Index m = static_cast<Index>(sup.size());
  Mat M(m, m), F(m, centered.cols());
  Vec ws(m);
  for (Index a = 0; a < m; ++a) {
    ws[a] = w[sup[static_cast<std::size_t>(a)]];
    F.row(a) = centered.row(sup[static_cast<std::size_t>(a)]);
  }
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b)
      M(a, b) = (a == b ? 1.0 : 0.0) - rev.kernel()(sup[static_cast<std::size_t>(a)], sup[static_cast<std::size_t>(b)]) + ws[b];
  const Mat G = M.partialPivLu().solve(F);
  Vec out(centered.cols());
  for (Index j = 0; j < centered.cols(); ++j) {
    const double fg = (ws.array() * F.col(j).array() * G.col(j).array()).sum();
    const double ff = (ws.array() * F.col(j).array().square()).sum();
    out[j] = 2 * fg - ff;
  }
  return out;
}

Vec norms_sq(const Dist& w, const Mat& functions) {
  return (functions.array().square().colwise() * w.weights().array()).colwise().sum().transpose();
}

BoundReport worst_of(const std::string& name, const Vec& lhs, const Vec& rhs, double tol,
                     bool relative) {
  if (lhs.size() == 0) return certify_leq(name, 0.0, 0.0, tol, "no mean-zero test functions");
  Index worst = 0;
  double worst_scaled = 0;
  for (Index j = 0; j < lhs.size(); ++j) {
    const double scale = relative ? std::max(1.0, std::abs(rhs[j])) : 1.0;
    const double s = (rhs[j] - lhs[j]) / scale;
    if (j == 0 || s < worst_scaled) {
      worst_scaled = s;
      worst = j;
    }
  }
  const double scale = relative ? std::max(1.0, std::abs(rhs[worst])) : 1.0;
  return certify_leq(name, lhs[worst], rhs[worst], tol * scale, "f#" + std::to_string(worst));
}

}  // namespace detail

Mat test_battery(const Summary& summary, const Dist& w, std::size_t trials, std::uint64_t seed) {
  const Index n = w.size();
  const auto support = w.support(kNullMass);
  Mat out(n, summary.eigenfunctions.cols() + static_cast<Index>(trials));
  Index c = 0;
  for (Index k = 0; k < summary.eigenfunctions.cols(); ++k) out.col(c++) = summary.eigenfunctions.col(k);
  if (support.size() < 2) {
    out.conservativeResize(Eigen::NoChange, c);
    return out;
  }
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < trials; ++k) {
    Vec f = Vec::Zero(n);
    for (auto x : support) f[x] = rng.uniform(-1.0, 1.0);
    Vec f0 = center(w, f);
    for (Index x = 0; x < n; ++x)
      if (!(w[x] > kNullMass)) f0[x] = 0;
    const double nn = norm_sq(w, f0);
    if (!(nn > 1e-24)) continue;
    out.col(c++) = f0 / std::sqrt(nn);
  }
  out.conservativeResize(Eigen::NoChange, c);
  return out;
}

Vec dirichlet_forms(const Pair& rev, const Mat& functions) {
  const auto& w = rev.stationary().weights();
  const Mat Kf = rev.kernel().matrix() * functions;
  return ((functions.array().square() - functions.array() * Kf.array()).colwise() * w.array())
      .colwise()
      .sum()
      .transpose();
}

namespace {

ConditionalQuality quality_of(const Pair& q, bool exact) {
  ConditionalQuality out;
  if (exact) return out;
  const Summary s = spectral_summary(q);
  out.norm = s.operator_norm;
  out.ratio_min = 1 - s.lambda_max;
  out.ratio_max = 1 - s.lambda_min;
  out.psd = s.psd;
  return out;
}

}  // namespace

ApproxQuality approx_quality(const JointDistribution& joint, const ApproximatorSpec& spec,
                             std::span<const std::size_t> coordinates) {
  ApproxQuality out;
  bool first = true;
  for (auto i : coordinates) {
    if (i >= joint.dims()) throw Error(ErrorCode::InvalidArgument, "coordinate out of range");
    const std::size_t block[] = {i};
    const std::size_t configs = joint.total() / joint.space().size(i);
    const bool exact = spec.rule_for(i).kind == ApproximatorRule::Kind::exact;
    for (std::size_t y = 0; y < configs; ++y) {
      if (!(slice_mass(joint, block, y) > 0)) continue;
      const auto q = quality_of(make_approximator(joint, spec, i, y), exact);
      out.per_conditional[{i, y}] = q;
      if (first) {
        out.C = q.norm;
        out.c1 = q.ratio_min;
        out.c2 = q.ratio_max;
        first = false;
      } else {
        out.C = std::max(out.C, q.norm);
        out.c1 = std::min(out.c1, q.ratio_min);
        out.c2 = std::max(out.c2, q.ratio_max);
      }
      out.all_psd = out.all_psd && q.psd;
    }
  }
  return out;
}

ApproxQuality approx_quality(const JointDistribution& joint, const ApproximatorSpec& spec) {
  std::vector<std::size_t> all(joint.dims());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return approx_quality(joint, spec, all);
}

}  // namespace gibbscert
