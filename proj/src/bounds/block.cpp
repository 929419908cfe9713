#include <algorithm>

#include "detail.hpp"

namespace gibbscert {

using detail::num;

namespace {

void require_sizes(const JointDistribution& joint, std::size_t ell, std::size_t m) {
  const std::size_t n = joint.dims();
  if (!(m >= 1 && m < ell && ell + 1 <= n))
    throw Error(ErrorCode::InvalidBlockSize, "need 1 <= m < ell <= n - 1, got m = " +
                                                 std::to_string(m) + ", ell = " +
                                                 std::to_string(ell) + ", n = " + std::to_string(n));
}

}  // namespace

double block_c1(const JointDistribution& joint, std::size_t ell, std::size_t m) {
  require_sizes(joint, ell, m);
  double c1 = 1.0;
  for (const auto& block : subsets_of_size(joint.dims(), ell)) {
    const std::size_t configs = joint.space().subspace(joint.space().complement(block)).total();
    for (std::size_t y = 0; y < configs; ++y) {
      if (!(slice_mass(joint, block, y) > 0)) continue;
      const Summary s = spectral_summary(inner_block_kernel(joint, block, y, m));
      c1 = std::min(c1, 1 - s.lambda_max);
    }
  }
  return c1;
}

Reports check_block(const JointDistribution& joint, std::size_t ell, std::size_t m,
                    const CheckOptions& opts) {
  const double c1 = block_c1(joint, ell, m);
  const Pair big = block_random_scan(joint, ell);
  const Pair small = block_random_scan(joint, m);
  const Summary sb = spectral_summary(big);
  const Summary ss = spectral_summary(small);
  const std::string base = "block.l" + std::to_string(ell) + "m" + std::to_string(m);

  Reports out;
  out.push_back(certify_leq(base + ".gap_lower", c1 * sb.gap, ss.gap, opts.tol, "c1=" + num(c1)));
  out.push_back(certify_leq(base + ".gap_upper", ss.gap, sb.gap, opts.tol));

  const auto& w = joint.weights();
  const Mat fs = detail::battery({&sb, &ss}, w, opts);
  const Vec eb = dirichlet_forms(big, fs);
  const Vec es = dirichlet_forms(small, fs);
  out.push_back(detail::worst_of(base + ".dirichlet_lower", c1 * eb, es, opts.tol));
  out.push_back(detail::worst_of(base + ".dirichlet_upper", es, eb, opts.tol));

  const std::string vl = base + ".variance_lower", vu = base + ".variance_upper";
  if (!(ss.operator_norm < 1 - 1e-12) || !(c1 > 0)) {
    const std::string why = c1 > 0 ? "no spectral gap" : "c1 must be positive";
    out.push_back(hypothesis_unmet(vl, ss.operator_norm, 1.0, opts.tol, why));
    out.push_back(hypothesis_unmet(vu, ss.operator_norm, 1.0, opts.tol, why));
    return out;
  }
  const Vec vb = detail::asymptotic_variances(big, sb, fs);
  const Vec vs = detail::asymptotic_variances(small, ss, fs);
  const Vec nn = detail::norms_sq(w, fs);
  out.push_back(detail::worst_of(vl, vb, vs, opts.tol, true));
  out.push_back(detail::worst_of(vu, vs, vb / c1 + (1 / c1 - 1) * nn, opts.tol, true));
  return out;
}

}  // namespace gibbscert
