#include <algorithm>
#include <cmath>

#include "detail.hpp"

namespace gibbscert {

using detail::num;

namespace {

struct RandomScanPair {
  Pair exact, hybrid;
  Summary se, sh;
  ApproxQuality q;
};

RandomScanPair build(const JointDistribution& joint, const SelectionProbs& p,
                     const ApproximatorSpec& spec) {
  RandomScanPair r;
  r.exact = exact_random_scan(joint, p);
  r.hybrid = hybrid_random_scan(joint, p, spec);
  r.se = spectral_summary(r.exact);
  r.sh = spectral_summary(r.hybrid);
  r.q = approx_quality(joint, spec);
  return r;
}

void require_positive(const SelectionProbs& p, const char* which) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(p[i] > 0))
      throw Error(ErrorCode::ZeroSelectionProb,
                  std::string(which) + " selection probability " + std::to_string(i) + " is zero");
}

}  // namespace

Reports check_theorem_dirichlet(const JointDistribution& joint, const SelectionProbs& p,
                                const ApproximatorSpec& spec, const CheckOptions& opts) {
  const auto r = build(joint, p, spec);
  const Mat fs = detail::battery({&r.se, &r.sh}, joint.weights(), opts);
  const Vec e = dirichlet_forms(r.exact, fs);
  const Vec eh = dirichlet_forms(r.hybrid, fs);
  return {detail::worst_of("random_scan.dirichlet_lower", r.q.c1 * e, eh, opts.tol),
          detail::worst_of("random_scan.dirichlet_upper", eh, r.q.c2 * e, opts.tol)};
}

Reports check_corollary_gap(const JointDistribution& joint, const SelectionProbs& p,
                            const ApproximatorSpec& spec, const CheckOptions& opts) {
  const auto r = build(joint, p, spec);
  const double gap = r.se.gap, gap_h = r.sh.gap, C = r.q.C;
  Reports out;
  out.push_back(certify_leq("random_scan.gap_lower", (1 - C) * gap, gap_h, opts.tol,
                            "C=" + num(C)));
  if (r.q.all_psd)
    out.push_back(certify_leq("random_scan.gap_upper", gap_h, gap, opts.tol, "psd-tightened"));
  else
    out.push_back(certify_leq("random_scan.gap_upper", gap_h, (1 + C) * gap, opts.tol,
                              "C=" + num(C)));
  return out;
}

Reports check_corollary_variance(const JointDistribution& joint, const SelectionProbs& p,
                                 const ApproximatorSpec& spec, const Mat& functions,
                                 const CheckOptions& opts) {
  if (functions.rows() != static_cast<Index>(joint.total()))
    throw Error(ErrorCode::DimensionMismatch, "test functions must have " +
                                                  std::to_string(joint.total()) + " rows");
  const auto r = build(joint, p, spec);
  const double c1 = r.q.c1, c2 = r.q.c2;
  const auto unmet = [&](double lhs, double rhs, const std::string& why) {
    return Reports{hypothesis_unmet("random_scan.variance_lower", lhs, rhs, opts.tol, why),
                   hypothesis_unmet("random_scan.variance_upper", lhs, rhs, opts.tol, why)};
  };
  if (!(r.se.operator_norm < 1 - 1e-12)) return unmet(r.se.operator_norm, 1.0, "||T|| = 1");
  if (!(c1 > 0)) return unmet(0.0, c1, "c1 must be positive");
  if (!(c2 < 2)) return unmet(c2, 2.0, "c2 must be below 2");

  const auto& w = joint.weights();
  Mat centered(functions.rows(), functions.cols());
  for (Index j = 0; j < functions.cols(); ++j) centered.col(j) = center(w, functions.col(j));
  const Vec v = detail::asymptotic_variances(r.exact, r.se, centered);
  const Vec vh = detail::asymptotic_variances(r.hybrid, r.sh, centered);
  const Vec nn = detail::norms_sq(w, centered);
  const Vec lower = v / c2 + (1 / c2 - 1) * nn;
  const Vec upper = v / c1 + (1 / c1 - 1) * nn;
  return {detail::worst_of("random_scan.variance_lower", lower, vh, opts.tol, true),
          detail::worst_of("random_scan.variance_upper", vh, upper, opts.tol, true)};
}

Reports check_selection_probs(const JointDistribution& joint, const SelectionProbs& p,
                              const SelectionProbs& p_alt, const ApproximatorSpec& spec,
                              const CheckOptions& opts) {
  require_positive(p, "p");
  require_positive(p_alt, "p'");
  if (p.size() != p_alt.size())
    throw Error(ErrorCode::DimensionMismatch, "selection vectors differ in length");
  const auto r = build(joint, p, spec);
  const Summary se_alt = spectral_summary(exact_random_scan(joint, p_alt));
  const Summary sh_alt = spectral_summary(hybrid_random_scan(joint, p_alt, spec));
  const double C = r.q.C;

  // When gap T(p') = 0 every b works; both sides of the bound are then compared against 0.
  const double b = se_alt.gap > 0 ? r.se.gap / se_alt.gap : 1.0;
  double ratio = p[0] / p_alt[0];
  for (std::size_t i = 1; i < p.size(); ++i) ratio = std::min(ratio, p[i] / p_alt[i]);

  Reports out;
  out.push_back(certify_leq("selection.hybrid_lower", b * (1 - C) / (1 + C) * sh_alt.gap,
                            r.sh.gap, opts.tol, "b=" + num(b) + " C=" + num(C)));
  if (r.q.all_psd)
    out.push_back(certify_leq("selection.hybrid_lower_psd", b * (1 - C) * sh_alt.gap, r.sh.gap,
                              opts.tol, "b=" + num(b) + " C=" + num(C)));
  out.push_back(certify_leq("selection.min_ratio_exact", ratio * se_alt.gap, r.se.gap, opts.tol,
                            "min p/p'=" + num(ratio)));
  out.push_back(certify_leq("selection.min_ratio_hybrid", ratio * sh_alt.gap, r.sh.gap, opts.tol,
                            "min p/p'=" + num(ratio)));
  return out;
}

SelectionProbe probe_selection_order(const JointDistribution& joint, const SelectionProbs& p,
                                     const SelectionProbs& p_alt, const ApproximatorSpec& spec) {
  SelectionProbe out;
  out.gap_exact = spectral_summary(exact_random_scan(joint, p)).gap;
  out.gap_exact_alt = spectral_summary(exact_random_scan(joint, p_alt)).gap;
  out.gap_hybrid = spectral_summary(hybrid_random_scan(joint, p, spec)).gap;
  out.gap_hybrid_alt = spectral_summary(hybrid_random_scan(joint, p_alt, spec)).gap;
  out.premise = out.gap_exact >= out.gap_exact_alt - 1e-12;
  out.conclusion = out.gap_hybrid >= out.gap_hybrid_alt - 1e-12;
  return out;
}

Reports check_supplementary_bound(const JointDistribution& joint, const SelectionProbs& p,
                                 const ApproximatorSpec& spec, int t, const CheckOptions& opts) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  if (!p.is_uniform())
    throw Error(ErrorCode::NonUniformSelection, "this bound assumes p_i = 1/n for every i");
  const auto r = build(joint, p, spec);
  const auto n = static_cast<double>(joint.dims());
  const double C = r.q.C;
  const double core = 1 - r.se.operator_norm - std::pow(C, t);
  const double bound = std::pow(n, -(t - 1)) * core;
  const double corollary = (1 - C) * r.se.gap;
  const std::string base = "supplement" + detail::t_suffix(t);
  Reports out;
  // With one coordinate T^ = Q and the bound would need 1 - C >= 1 - C^t.
  if (joint.dims() < 2 && t > 1) {
    out.push_back(hypothesis_unmet(base, bound, r.sh.gap, opts.tol, "needs n >= 2 when t > 1"));
    out.push_back(hypothesis_unmet(base + ".corollary_dominates", bound, corollary, opts.tol,
                                   "needs n >= 2 when t > 1"));
    return out;
  }
  out.push_back(certify_leq(base, bound, r.sh.gap, opts.tol, "C=" + num(C)));
  out.push_back(certify_leq(base + ".corollary_dominates", bound, corollary, opts.tol,
                            "1-||T||-C^t=" + num(core)));
  return out;
}

}  // namespace gibbscert
