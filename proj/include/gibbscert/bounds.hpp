#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "gibbscert/kernels.hpp"
#include "gibbscert/report.hpp"
#include "gibbscert/slice.hpp"

namespace gibbscert {

using Reports = std::vector<BoundReport>;

struct CheckOptions {
  double tol = 1e-9;
  // Random mean-zero test functions added to the eigenfunction battery.
  std::size_t trials = 64;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Approximation quality of the per-conditional kernels Q_{i,y}.

struct ConditionalQuality {
  double norm = 0.0;
  double ratio_min = 1.0;
  double ratio_max = 1.0;
  bool psd = true;
};

struct ApproxQuality {
  // Keyed by (coordinate, conditioning configuration); only configurations with mass.
  std::map<std::pair<std::size_t, std::size_t>, ConditionalQuality> per_conditional;
  double C = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  bool all_psd = true;
};

ApproxQuality approx_quality(const JointDistribution& joint, const ApproximatorSpec& spec);
ApproxQuality approx_quality(const JointDistribution& joint, const ApproximatorSpec& spec,
                             std::span<const std::size_t> coordinates);

// Columns: every mean-zero eigenfunction from `summary`, then `trials` seeded random
// functions; all centered against w and scaled to unit w-norm.
Mat test_battery(const Summary& summary, const Dist& w, std::size_t trials, std::uint64_t seed);

// E_K(f) for each (already centered) column of `functions`.
Vec dirichlet_forms(const Pair& rev, const Mat& functions);

// ---------------------------------------------------------------------------
// Random-scan comparisons.

// c1 E_T(f) <= E_T^(f) <= c2 E_T(f) over the battery built from T's eigenfunctions.
Reports check_theorem_dirichlet(const JointDistribution& joint, const SelectionProbs& p,
                                const ApproximatorSpec& spec, const CheckOptions& opts = {});

// (1-C)(1-||T||) <= 1-||T^|| <= (1+C)(1-||T||), upper tightened to 1-||T|| when all Q are psd.
Reports check_corollary_gap(const JointDistribution& joint, const SelectionProbs& p,
                            const ApproximatorSpec& spec, const CheckOptions& opts = {});

// c2^-1 var_T(f) + (c2^-1 - 1)||f||^2 <= var_T^(f) <= c1^-1 var_T(f) + (c1^-1 - 1)||f||^2
// for every column of `functions` (centered first).
Reports check_corollary_variance(const JointDistribution& joint, const SelectionProbs& p,
                                 const ApproximatorSpec& spec, const Mat& functions,
                                 const CheckOptions& opts = {});

// Uses min_i p_i/p'_i relations and b = gap(T(p)) / gap(T(p')).
Reports check_selection_probs(const JointDistribution& joint, const SelectionProbs& p,
                              const SelectionProbs& p_alt, const ApproximatorSpec& spec,
                              const CheckOptions& opts = {});

// Exploratory only: does gap T(p) >= gap T(p') carry over to the hybrid kernels?
struct SelectionProbe {
  double gap_exact = 0.0, gap_exact_alt = 0.0;
  double gap_hybrid = 0.0, gap_hybrid_alt = 0.0;
  bool premise = false;
  bool conclusion = false;
  bool counterexample() const { return premise && !conclusion; }
};
SelectionProbe probe_selection_order(const JointDistribution& joint, const SelectionProbs& p,
                                     const SelectionProbs& p_alt, const ApproximatorSpec& spec);

// 1 - ||T^|| >= n^{-(t-1)} (1 - ||T|| - C^t) for uniform selection, and its comparison with
// (1-C)(1-||T||).
Reports check_supplementary_bound(const JointDistribution& joint, const SelectionProbs& p,
                                 const ApproximatorSpec& spec, int t,
                                 const CheckOptions& opts = {});

// c1 (1-||T_ell||) <= 1-||T_m|| <= 1-||T_ell||, the matching Dirichlet chain, and the
// variance chain when both gaps are positive. Requires 1 <= m < ell <= n-1.
Reports check_block(const JointDistribution& joint, std::size_t ell, std::size_t m,
                    const CheckOptions& opts = {});

// min over |block| = ell and supported y of the Dirichlet ratio minimum of Q_{block,y}.
double block_c1(const JointDistribution& joint, std::size_t ell, std::size_t m);

// ---------------------------------------------------------------------------
// Two-block (data augmentation) comparisons.

// Everything the two-block bounds need: S, S^, the height law pi_{2,y}(z) (rows y, columns z)
// and the exact norm of each Q_{1,z}. A slice model maps onto this with z = level index.
struct TwoBlockSetting {
  Pair exact;
  Pair hybrid;
  Mat height_law;
  std::vector<double> norms;
  std::vector<double> lambda_min;
  std::vector<bool> supported;
  double C = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  bool all_psd = true;
};

TwoBlockSetting two_block_setting(const JointDistribution& joint, const ApproximatorSpec& spec);
TwoBlockSetting two_block_setting(const SliceModel& model);

struct GammaProfile {
  enum class Source { exact_norms, user };
  std::vector<double> values;
  Source source = Source::exact_norms;
};

GammaProfile gamma_from_norms(const TwoBlockSetting& setting);
// User-supplied gamma. Throws GammaDominationViolated if gamma(z) < ||Q_{1,z}|| - 1e-10 on
// a supported z, InvalidArgument if outside [0, 1] or of the wrong length.
GammaProfile user_gamma(const TwoBlockSetting& setting, std::vector<double> values);

// max over supported y of sum_z pi_{2,y}(z) gamma(z)^t.
double alpha_t(const TwoBlockSetting& setting, const GammaProfile& gamma, int t);
// max over supported y of (sum_z pi_{2,y}(z) gamma(z)^{2t})^{1/2}.
double beta_t(const TwoBlockSetting& setting, const GammaProfile& gamma, int t);

double alpha_t(const JointDistribution& joint, const ApproximatorSpec& spec,
               const GammaProfile& gamma, int t);
double alpha_t(const SliceModel& model, const GammaProfile& gamma, int t);
double beta_t(const SliceModel& model, const GammaProfile& gamma, int t);

// (1-C)(1-||S||) <= 1-||S^|| <= (1+C)(1-||S||) (psd: <= 1-||S||) plus the Dirichlet sandwich.
Reports check_da_sandwich(const JointDistribution& joint, const ApproximatorSpec& spec,
                          const CheckOptions& opts = {});
Reports check_da_sandwich(const TwoBlockSetting& setting, const CheckOptions& opts = {});

// Functional form 0 <= (<f,S^f>/||f||^2)^t <= <f,Sf>/||f||^2 + alpha_t over the battery, and
// t(1-||S^||) >= 1-||S^||^t >= 1-||S||-alpha_t. Needs t even or every Q_{1,z} psd.
Reports check_da_tstep(const TwoBlockSetting& setting, int t, const CheckOptions& opts = {});
Reports check_da_tstep(const JointDistribution& joint, const ApproximatorSpec& spec, int t,
                       const CheckOptions& opts = {});
Reports check_da_tstep(const SliceModel& model, int t, const CheckOptions& opts = {});

// var_S^(f) <= 2t var_S(f) + (2t-1)||f||^2 when alpha_t <= (1-||S||)/2.
Reports check_da_variance_t(const TwoBlockSetting& setting, int t, const CheckOptions& opts = {});
Reports check_da_variance_t(const JointDistribution& joint, const ApproximatorSpec& spec, int t,
                            const CheckOptions& opts = {});

// (1-||S||-alpha_t)/t <= 1-||S^|| <= 1-||S||, alongside the beta_t form.
Reports check_slice(const SliceModel& model, int t, const CheckOptions& opts = {});

}  // namespace gibbscert
