#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gibbscert/joint.hpp"
#include "gibbscert/report.hpp"

namespace gibbscert {

struct Trajectory {
  // X_0 (the start) followed by one state per step.
  std::vector<std::size_t> states;
  std::uint64_t seed = 0;
  std::string kernel_fingerprint;
};

// FNV-1a over the dimension and the row-major entries.
std::string kernel_fingerprint(const Kernel& kernel);

// Inverse-CDF sampling of each row with SplitMix64(seed). Throws InvalidStart for an
// out-of-range start or a start law of the wrong length; steps must be >= 1.
Trajectory simulate(const Pair& rev, std::size_t start, std::size_t steps, std::uint64_t seed);
// X_0 drawn from `start` with the first output of the same generator.
Trajectory simulate(const Pair& rev, const Dist& start, std::size_t steps, std::uint64_t seed);

// Text export: "# seed <n>", "# fingerprint <hex>", then one state index per line.
void write_trajectory(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory(std::istream& in);

struct VarianceEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t batch = 0;
  std::size_t batches = 0;
};

// Non-overlapping batch means of f(X_1), ..., f(X_steps), centered by their overall mean.
// estimate = batch * sample variance of the batch means; SE = estimate * sqrt(2 / (B - 1)).
// Throws TooFewBatches when fewer than 20 full batches fit.
VarianceEstimate batch_means_variance(const Trajectory& traj, const Vec& f, std::size_t batch);

struct VarianceCheck {
  VarianceEstimate estimate;
  double exact = 0.0;
  BoundReport report;
};

// Runs a stationary-start chain and compares the batch-means estimate with the exact
// asymptotic variance: pass iff |estimate - exact| <= 3 SE. batch = 0 picks steps / 100.
VarianceCheck cross_check_variance(const Pair& rev, const Vec& f, std::size_t steps,
                                   std::uint64_t seed, std::size_t batch = 0);
BoundReport cross_validate_variance(const Pair& rev, const Vec& f, std::size_t steps,
                                    std::uint64_t seed, std::size_t batch = 0);

struct MixingCurve {
  // distances[t] = ||mu_0 K^t - w||_w = ||d(mu_0 K^t)/dw - 1||_w, t = 0..tmax.
  std::vector<double> distances;
  double fitted_rate = 0.0;
  double operator_norm = 0.0;
  // fitted_rate <= operator_norm within 1e-6.
  BoundReport rate_check;
};

// Throws NotAbsolutelyContinuous when mu_0 charges a state outside the support of w.
MixingCurve mixing_curve(const Pair& rev, const Dist& mu0, std::size_t tmax);

}  // namespace gibbscert
