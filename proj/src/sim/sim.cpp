#include "gibbscert/sim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gibbscert/fingerprint.hpp"
#include "gibbscert/rng.hpp"

namespace gibbscert {

std::string kernel_fingerprint(const Kernel& kernel) {
  Fnv1a h;
  const auto n = static_cast<std::uint64_t>(kernel.size());
  h.add(&n, sizeof n);
  const auto& m = kernel.matrix();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      h.add(&v, sizeof v);
    }
  return h.hex();
}

namespace {

// Row-wise cumulative sums, with every entry from the last positive one onward set to 1 so
// a uniform draw in [0, 1) never lands on a zero-probability state.
Mat cumulative_rows(const Mat& k) {
  Mat c(k.rows(), k.cols());
  for (Index i = 0; i < k.rows(); ++i) {
    double acc = 0;
    Index last = 0;
    for (Index j = 0; j < k.cols(); ++j) {
      acc += k(i, j);
      c(i, j) = acc;
      if (k(i, j) > 0) last = j;
    }
    for (Index j = last; j < k.cols(); ++j) c(i, j) = 1.0;
  }
  return c;
}

std::size_t draw(const double* cum, Index n, double u) {
  return static_cast<std::size_t>(std::upper_bound(cum, cum + n, u) - cum);
}

Trajectory run(const Pair& rev, std::size_t start, std::size_t steps, std::uint64_t seed,
               SplitMix64& rng) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be at least 1");
  const Index n = rev.size();
  // Row-major copy so each row's cumulative sums are contiguous.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cum =
      cumulative_rows(rev.kernel().matrix());
  Trajectory t;
  t.seed = seed;
  t.kernel_fingerprint = kernel_fingerprint(rev.kernel());
  t.states.reserve(steps + 1);
  t.states.push_back(start);
  std::size_t x = start;
  for (std::size_t s = 0; s < steps; ++s) {
    x = draw(cum.data() + static_cast<Index>(x) * n, n, rng.uniform());
    t.states.push_back(x);
  }
  return t;
}

}  // namespace

Trajectory simulate(const Pair& rev, std::size_t start, std::size_t steps, std::uint64_t seed) {
  if (start >= static_cast<std::size_t>(rev.size()))
    throw Error(ErrorCode::InvalidStart, "start state " + std::to_string(start) + " is not in [0, " +
                                             std::to_string(rev.size()) + ")");
  SplitMix64 rng(seed);
  return run(rev, start, steps, seed, rng);
}

Trajectory simulate(const Pair& rev, const Dist& start, std::size_t steps, std::uint64_t seed) {
  if (start.size() != rev.size())
    throw Error(ErrorCode::InvalidStart, "start law has " + std::to_string(start.size()) +
                                             " entries for " + std::to_string(rev.size()) + " states");
  SplitMix64 rng(seed);
  Vec row = start.weights().transpose();
  const Mat cum = cumulative_rows(Mat(row.transpose()));
  const std::size_t x0 = draw(cum.data(), cum.cols(), rng.uniform());
  return run(rev, x0, steps, seed, rng);
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << "# seed " << traj.seed << '\n' << "# fingerprint " << traj.kernel_fingerprint << '\n';
  for (auto s : traj.states) out << s << '\n';
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "seed") ls >> t.seed;
      else if (key == "fingerprint") ls >> t.kernel_fingerprint;
      continue;
    }
    std::size_t pos = 0;
    try {
      t.states.push_back(std::stoull(line, &pos));
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != line.size())
      throw Error(ErrorCode::ParseError, "bad trajectory line: " + line);
  }
  return t;
}

VarianceEstimate batch_means_variance(const Trajectory& traj, const Vec& f, std::size_t batch) {
  if (batch < 1) throw Error(ErrorCode::InvalidArgument, "batch size must be positive");
  const std::size_t n = traj.states.empty() ? 0 : traj.states.size() - 1;
  const std::size_t batches = n / batch;
  if (batches < 20)
    throw Error(ErrorCode::TooFewBatches, std::to_string(n) + " steps give " +
                                              std::to_string(batches) + " batches of " +
                                              std::to_string(batch) + "; need 20");
  const std::size_t used = batches * batch;
  std::vector<double> values(used);
  for (std::size_t k = 0; k < used; ++k) {
    const auto s = traj.states[k + 1];
    if (s >= static_cast<std::size_t>(f.size()))
      throw Error(ErrorCode::DimensionMismatch, "trajectory state outside the function's domain");
    values[k] = f[static_cast<Index>(s)];
  }
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(used);
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double acc = 0;
    for (std::size_t k = 0; k < batch; ++k) acc += values[b * batch + k] - mean;
    means[b] = acc / static_cast<double>(batch);
  }
  double ss = 0;
  for (double m : means) ss += m * m;  // batch means of centered values already average to 0
  VarianceEstimate e;
  e.batch = batch;
  e.batches = batches;
  e.estimate = static_cast<double>(batch) * ss / static_cast<double>(batches - 1);
  e.standard_error = e.estimate * std::sqrt(2.0 / static_cast<double>(batches - 1));
  return e;
}

VarianceCheck cross_check_variance(const Pair& rev, const Vec& f, std::size_t steps,
                                   std::uint64_t seed, std::size_t batch) {
  VarianceCheck out;
  out.exact = asymptotic_variance(rev, f);
  if (batch == 0) batch = std::max<std::size_t>(1, steps / 100);
  out.estimate = batch_means_variance(simulate(rev, rev.stationary(), steps, seed), f, batch);
  std::ostringstream w;
  w.precision(12);
  w << "estimate=" << out.estimate.estimate << " exact=" << out.exact
    << " se=" << out.estimate.standard_error << " batches=" << out.estimate.batches;
  out.report = certify_leq("variance.cross_validate", std::abs(out.estimate.estimate - out.exact),
                           3 * out.estimate.standard_error, 0.0, w.str());
  return out;
}

BoundReport cross_validate_variance(const Pair& rev, const Vec& f, std::size_t steps,
                                    std::uint64_t seed, std::size_t batch) {
  return cross_check_variance(rev, f, steps, seed, batch).report;
}

MixingCurve mixing_curve(const Pair& rev, const Dist& mu0, std::size_t tmax) {
  const auto& w = rev.stationary();
  if (mu0.size() != w.size())
    throw Error(ErrorCode::DimensionMismatch, "initial law has the wrong length");
  for (Index x = 0; x < w.size(); ++x)
    if (mu0[x] > 0 && !(w[x] > kNullMass))
      throw Error(ErrorCode::NotAbsolutelyContinuous,
                  "initial law charges state " + std::to_string(x) + " outside the support");
  MixingCurve out;
  out.operator_norm = spectral_summary(rev).operator_norm;
  Eigen::RowVectorXd mu = mu0.weights().transpose();
  const Mat& K = rev.kernel().matrix();
  for (std::size_t t = 0; t <= tmax; ++t) {
    double acc = 0;
    for (Index x = 0; x < w.size(); ++x) {
      if (!(w[x] > kNullMass)) continue;
      const double h = mu[x] / w[x] - 1;
      acc += w[x] * h * h;
    }
    out.distances.push_back(std::sqrt(acc));
    mu = mu * K;
  }

  // Least-squares slope of log distance over the second half of the resolvable steps
  // (distance above 1e-10 of the initial one and above round-off).
  const double floor = std::max(1e-10 * out.distances.front(), 1e-14);
  std::size_t last = 0;
  while (last < tmax && out.distances[last + 1] > floor) ++last;
  out.fitted_rate = 0;
  if (last >= 1) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
    for (std::size_t t = last / 2; t <= last; ++t) {
      const double x = static_cast<double>(t), y = std::log(out.distances[t]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      k += 1;
    }
    out.fitted_rate = std::exp((k * sxy - sx * sy) / (k * sxx - sx * sx));
  }
  out.rate_check = certify_leq("mixing.rate", out.fitted_rate, out.operator_norm, 1e-6);
  return out;
}

}  // namespace gibbscert
