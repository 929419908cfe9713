#include <algorithm>
#include <cmath>

#include "detail.hpp"

namespace gibbscert {

using detail::num;

namespace {

void absorb(TwoBlockSetting& s, std::size_t z, const Summary& q, bool exact) {
  const double norm = exact ? 0.0 : q.operator_norm;
  const double rmin = exact ? 1.0 : 1 - q.lambda_max;
  const double rmax = exact ? 1.0 : 1 - q.lambda_min;
  const bool first = std::none_of(s.supported.begin(), s.supported.end(), [](bool b) { return b; });
  s.norms[z] = norm;
  s.lambda_min[z] = exact ? 0.0 : q.lambda_min;
  s.supported[z] = true;
  s.C = first ? norm : std::max(s.C, norm);
  s.c1 = first ? rmin : std::min(s.c1, rmin);
  s.c2 = first ? rmax : std::max(s.c2, rmax);
  s.all_psd = s.all_psd && (exact || q.psd);
}

void size_for(TwoBlockSetting& s, std::size_t zs) {
  s.norms.assign(zs, 0.0);
  s.lambda_min.assign(zs, 0.0);
  s.supported.assign(zs, false);
}

}  // namespace

TwoBlockSetting two_block_setting(const JointDistribution& joint, const ApproximatorSpec& spec) {
  TwoBlockSetting s;
  s.exact = da_exact(joint);
  s.hybrid = da_hybrid(joint, spec);
  const std::size_t d1 = joint.space().size(0), d2 = joint.space().size(1);
  size_for(s, d2);
  const bool exact = spec.rule_for(0).kind == ApproximatorRule::Kind::exact;
  for (std::size_t z = 0; z < d2; ++z) {
    const std::size_t block[] = {0};
    if (!(slice_mass(joint, block, z) > 0)) continue;
    absorb(s, z, exact ? Summary{} : spectral_summary(make_approximator(joint, spec, 0, z)), exact);
  }
  s.height_law = Mat::Zero(static_cast<Index>(d1), static_cast<Index>(d2));
  const auto& m1 = s.exact.stationary();
  for (std::size_t y = 0; y < d1; ++y) {
    if (!(m1[static_cast<Index>(y)] > 0)) continue;
    s.height_law.row(static_cast<Index>(y)) = conditional(joint, 1, y).weights().transpose();
  }
  return s;
}

TwoBlockSetting two_block_setting(const SliceModel& model) {
  TwoBlockSetting s;
  s.exact = slice_exact(model);
  s.hybrid = slice_hybrid(model);
  const std::size_t levels = model.level_count();
  size_for(s, levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const Pair q = check_reversibility(*model.level_kernel(k), level_target(model, k));
    absorb(s, k, spectral_summary(q), false);
  }
  s.height_law = Mat::Zero(static_cast<Index>(model.states()), static_cast<Index>(levels));
  for (std::size_t y = 0; y < model.states(); ++y)
    for (std::size_t k = 0; k < levels; ++k)
      s.height_law(static_cast<Index>(y), static_cast<Index>(k)) = model.level_weight(y, k);
  return s;
}

GammaProfile gamma_from_norms(const TwoBlockSetting& setting) {
  GammaProfile g;
  g.values = setting.norms;
  for (auto& v : g.values) v = std::clamp(v, 0.0, 1.0);
  g.source = GammaProfile::Source::exact_norms;
  return g;
}

GammaProfile user_gamma(const TwoBlockSetting& setting, std::vector<double> values) {
  if (values.size() != setting.norms.size())
    throw Error(ErrorCode::InvalidArgument, "gamma needs " + std::to_string(setting.norms.size()) +
                                                " values, got " + std::to_string(values.size()));
  for (std::size_t z = 0; z < values.size(); ++z) {
    if (!(values[z] >= 0 && values[z] <= 1))
      throw Error(ErrorCode::InvalidArgument, "gamma(" + std::to_string(z) + ") must lie in [0, 1]");
    if (setting.supported[z] && values[z] < setting.norms[z] - 1e-10)
      throw Error(ErrorCode::GammaDominationViolated,
                  "gamma(" + std::to_string(z) + ") = " + num(values[z]) + " is below ||Q|| = " +
                      num(setting.norms[z]));
  }
  return {std::move(values), GammaProfile::Source::user};
}

namespace {

double height_average(const TwoBlockSetting& s, const GammaProfile& g, double power) {
  if (g.values.size() != static_cast<std::size_t>(s.height_law.cols()))
    throw Error(ErrorCode::DimensionMismatch, "gamma profile length does not match the heights");
  for (std::size_t z = 0; z < g.values.size(); ++z)
    if (s.supported[z] && g.values[z] < s.norms[z] - 1e-10)
      throw Error(ErrorCode::GammaDominationViolated,
                  "gamma(" + std::to_string(z) + ") is below the norm of its kernel");
  const auto& m1 = s.exact.stationary();
  double best = 0;
  for (Index y = 0; y < s.height_law.rows(); ++y) {
    if (!(m1[y] > 0)) continue;
    double acc = 0;
    for (Index z = 0; z < s.height_law.cols(); ++z) {
      const double law = s.height_law(y, z);
      if (law > 0) acc += law * std::pow(g.values[static_cast<std::size_t>(z)], power);
    }
    best = std::max(best, acc);
  }
  return best;
}

}  // namespace

double alpha_t(const TwoBlockSetting& setting, const GammaProfile& gamma, int t) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  return height_average(setting, gamma, t);
}

double beta_t(const TwoBlockSetting& setting, const GammaProfile& gamma, int t) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  return std::sqrt(height_average(setting, gamma, 2.0 * t));
}

double alpha_t(const JointDistribution& joint, const ApproximatorSpec& spec,
               const GammaProfile& gamma, int t) {
  return alpha_t(two_block_setting(joint, spec), gamma, t);
}

double alpha_t(const SliceModel& model, const GammaProfile& gamma, int t) {
  return alpha_t(two_block_setting(model), gamma, t);
}

double beta_t(const SliceModel& model, const GammaProfile& gamma, int t) {
  return beta_t(two_block_setting(model), gamma, t);
}

Reports check_da_sandwich(const TwoBlockSetting& s, const CheckOptions& opts) {
  const Summary se = spectral_summary(s.exact);
  const Summary sh = spectral_summary(s.hybrid);
  Reports out;
  out.push_back(certify_leq("da.gap_lower", (1 - s.C) * se.gap, sh.gap, opts.tol, "C=" + num(s.C)));
  if (s.all_psd)
    out.push_back(certify_leq("da.gap_upper", sh.gap, se.gap, opts.tol, "psd-tightened"));
  else
    out.push_back(certify_leq("da.gap_upper", sh.gap, (1 + s.C) * se.gap, opts.tol, "C=" + num(s.C)));
  const Mat fs = detail::battery({&se, &sh}, s.exact.stationary(), opts);
  const Vec e = dirichlet_forms(s.exact, fs);
  const Vec eh = dirichlet_forms(s.hybrid, fs);
  out.push_back(detail::worst_of("da.dirichlet_lower", s.c1 * e, eh, opts.tol));
  out.push_back(detail::worst_of("da.dirichlet_upper", eh, s.c2 * e, opts.tol));
  return out;
}

Reports check_da_sandwich(const JointDistribution& joint, const ApproximatorSpec& spec,
                          const CheckOptions& opts) {
  return check_da_sandwich(two_block_setting(joint, spec), opts);
}

namespace {

// Smallest eigenvalue over the supported Q_{1,z}; >= -kPsdTol means every one is psd.
double worst_lambda_min(const TwoBlockSetting& s) {
  double worst = 0;
  for (std::size_t z = 0; z < s.lambda_min.size(); ++z)
    if (s.supported[z]) worst = std::min(worst, s.lambda_min[z]);
  return worst;
}

}  // namespace

Reports check_da_tstep(const TwoBlockSetting& s, int t, const CheckOptions& opts) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  const std::string base = "da_tstep" + detail::t_suffix(t);
  const std::string names[] = {base + ".functional_lower", base + ".functional_upper",
                               base + ".bernoulli", base + ".gap"};
  if (t % 2 != 0 && !s.all_psd) {
    Reports out;
    for (const auto& n : names)
      out.push_back(hypothesis_unmet(n, -worst_lambda_min(s), 0.0, opts.tol,
                                     "odd t needs every Q_{1,z} psd"));
    return out;
  }
  const double alpha = alpha_t(s, gamma_from_norms(s), t);
  const Summary se = spectral_summary(s.exact);
  const Summary sh = spectral_summary(s.hybrid);
  const auto& w = s.exact.stationary();
  const Mat fs = detail::battery({&sh}, w, opts);
  const Mat Sf = s.exact.kernel().matrix() * fs;
  const Mat Shf = s.hybrid.kernel().matrix() * fs;
  const Vec nn = detail::norms_sq(w, fs);
  Vec powered(fs.cols()), upper(fs.cols());
  for (Index j = 0; j < fs.cols(); ++j) {
    const double rh = (w.weights().array() * fs.col(j).array() * Shf.col(j).array()).sum() / nn[j];
    const double r = (w.weights().array() * fs.col(j).array() * Sf.col(j).array()).sum() / nn[j];
    powered[j] = std::pow(rh, t);
    upper[j] = r + alpha;
  }
  const double norm_t = std::pow(sh.operator_norm, t);
  Reports out;
  out.push_back(detail::worst_of(names[0], Vec::Zero(fs.cols()), powered, opts.tol));
  out.push_back(detail::worst_of(names[1], powered, upper, opts.tol));
  out.back().witness += " alpha=" + num(alpha);
  out.push_back(certify_leq(names[2], 1 - norm_t, t * sh.gap, opts.tol));
  out.push_back(certify_leq(names[3], 1 - se.operator_norm - alpha, 1 - norm_t, opts.tol,
                            "alpha=" + num(alpha)));
  return out;
}

Reports check_da_tstep(const JointDistribution& joint, const ApproximatorSpec& spec, int t,
                       const CheckOptions& opts) {
  return check_da_tstep(two_block_setting(joint, spec), t, opts);
}

Reports check_da_tstep(const SliceModel& model, int t, const CheckOptions& opts) {
  return check_da_tstep(two_block_setting(model), t, opts);
}

Reports check_da_variance_t(const TwoBlockSetting& s, int t, const CheckOptions& opts) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  const std::string name = "da_variance" + detail::t_suffix(t);
  const Summary se = spectral_summary(s.exact);
  if (!(se.operator_norm < 1 - 1e-12))
    return {hypothesis_unmet(name, se.operator_norm, 1.0, opts.tol, "||S|| = 1")};
  // The t-step bound behind this corollary needs t even or psd Q_{1,z}.
  if (t % 2 != 0 && !s.all_psd)
    return {hypothesis_unmet(name, -worst_lambda_min(s), 0.0, opts.tol,
                             "odd t needs every Q_{1,z} psd")};
  const double alpha = alpha_t(s, gamma_from_norms(s), t);
  const double half_gap = (1 - se.operator_norm) / 2;
  if (alpha > half_gap)
    return {hypothesis_unmet(name, alpha, half_gap, opts.tol, "alpha_t exceeds (1-||S||)/2")};

  const Summary sh = spectral_summary(s.hybrid);
  const auto& w = s.exact.stationary();
  const Mat fs = detail::battery({&se, &sh}, w, opts);
  const Vec v = detail::asymptotic_variances(s.exact, se, fs);
  const Vec vh = detail::asymptotic_variances(s.hybrid, sh, fs);
  const Vec nn = detail::norms_sq(w, fs);
  const Vec rhs = 2.0 * t * v + (2.0 * t - 1) * nn;
  auto r = detail::worst_of(name, vh, rhs, opts.tol, true);
  r.witness += " alpha=" + num(alpha);
  return {r};
}

Reports check_da_variance_t(const JointDistribution& joint, const ApproximatorSpec& spec, int t,
                            const CheckOptions& opts) {
  return check_da_variance_t(two_block_setting(joint, spec), t, opts);
}

Reports check_slice(const SliceModel& model, int t, const CheckOptions& opts) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  const auto s = two_block_setting(model);
  const std::string base = "slice" + detail::t_suffix(t);
  const std::string names[] = {base + ".lower", base + ".upper", base + ".beta_lower",
                               base + ".alpha_sharper"};
  const Summary se = spectral_summary(s.exact);
  const Summary sh = spectral_summary(s.hybrid);
  Reports out;
  if (s.all_psd)
    out.push_back(certify_leq(names[1], sh.gap, se.gap, opts.tol, "psd-tightened"));
  else
    out.push_back(certify_leq(names[1], sh.gap, (1 + s.C) * se.gap, opts.tol, "C=" + num(s.C)));
  if (t % 2 != 0 && !s.all_psd) {
    for (const auto* n : {&names[0], &names[2], &names[3]})
      out.push_back(hypothesis_unmet(*n, -worst_lambda_min(s), 0.0, opts.tol,
                                     "odd t needs every level kernel psd"));
    return out;
  }
  const auto gamma = gamma_from_norms(s);
  const double alpha = alpha_t(s, gamma, t);
  const double beta = beta_t(s, gamma, t);
  const double a_bound = (1 - se.operator_norm - alpha) / t;
  const double b_bound = (1 - se.operator_norm - beta) / t;
  out.push_back(certify_leq(names[0], a_bound, sh.gap, opts.tol, "alpha=" + num(alpha)));
  out.push_back(certify_leq(names[2], b_bound, sh.gap, opts.tol, "beta=" + num(beta)));
  out.push_back(certify_leq(names[3], b_bound, a_bound, 1e-12,
                            "alpha=" + num(alpha) + " beta=" + num(beta)));
  return out;
}

}  // namespace gibbscert
