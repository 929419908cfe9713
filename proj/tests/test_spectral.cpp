#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "gibbscert/random_models.hpp"
#include "gibbscert/spectral.hpp"
#include "oracles.hpp"

using namespace gibbscert;
using M = Matrix<double>;
using V = Vector<double>;

namespace {

M mat2(double a, double b, double c, double d) {
  M m(2, 2);
  m << a, b, c, d;
  return m;
}

V vec(std::initializer_list<double> xs) {
  V v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Variance through the truncated series 2 sum_k <f, K^k f> - ||f||^2 for centered f.
double variance_series(const M& K, const V& w, const V& f0) {
  V g = f0;
  double acc = 0;
  for (int k = 0; k < 20000; ++k) {
    acc += (w.array() * f0.array() * g.array()).sum();
    g = K * g;
  }
  return 2 * acc - (w.array() * f0.array().square()).sum();
}

ProbVec<double> random_dist(Index n, SplitMix64& rng) {
  V w(n);
  for (Index i = 0; i < n; ++i) w[i] = rng.uniform(0.05, 1.0);
  return ProbVec<double>(w);
}

}  // namespace

TEST_CASE("stationary distribution of small kernels") {
  auto w = stationary_distribution(StochasticKernel<double>(mat2(0.7, 0.3, 0.6, 0.4)));
  CHECK(w[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  auto u = stationary_distribution(StochasticKernel<double>(mat2(0.7, 0.3, 0.3, 0.7)));
  CHECK(u[0] == doctest::Approx(0.5));
  try {
    stationary_distribution(StochasticKernel<double>::identity(2));
    FAIL("expected NonUniqueStationary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonUniqueStationary);
  }
}

TEST_CASE("reversibility defects") {
  auto rev = check_reversibility(StochasticKernel<double>(mat2(0.7, 0.3, 0.6, 0.4)),
                                 ProbVec<double>(vec({2.0 / 3, 1.0 / 3})));
  CHECK(rev.reversibility_defect() < 1e-15);
  try {
    check_reversibility(StochasticKernel<double>(mat2(0, 1, 1, 0)), ProbVec<double>(vec({0.6, 0.4})));
    FAIL("expected NotReversible");
  } catch (const NotReversibleError& e) {
    CHECK(e.code() == ErrorCode::NotReversible);
    CHECK(e.from() == 0);
    CHECK(e.to() == 1);
    CHECK(e.defect() == doctest::Approx(0.2));
  }
}

TEST_CASE("spectral summaries against hand values") {
  const ProbVec<double> u = ProbVec<double>::uniform(2);
  auto rev = check_reversibility(StochasticKernel<double>(mat2(0.7, 0.3, 0.3, 0.7)), u);
  auto s = spectral_summary(rev);
  CHECK(s.operator_norm == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(s.gap == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(s.psd);
  CHECK(s.gap + s.operator_norm == 1.0);
  auto [lo, hi] = dirichlet_ratio_extrema(rev);
  CHECK(lo == doctest::Approx(0.6));
  CHECK(hi == doctest::Approx(0.6));

  SplitMix64 rng(3);
  const auto w5 = random_dist(5, rng);
  auto ind = check_reversibility(StochasticKernel<double>::independence(w5), w5);
  CHECK(spectral_summary(ind).operator_norm == doctest::Approx(0.0).epsilon(1e-12));
  auto [ilo, ihi] = dirichlet_ratio_extrema(ind);
  CHECK(ilo == doctest::Approx(1.0));
  CHECK(ihi == doctest::Approx(1.0));

  auto id = check_reversibility(StochasticKernel<double>::identity(3), ProbVec<double>::uniform(3));
  CHECK(spectral_summary(id).operator_norm == doctest::Approx(1.0));
  CHECK(spectral_summary(id).gap == doctest::Approx(0.0));
}

TEST_CASE("null states are dropped from the analysis") {
  M K(3, 3);
  K << 0.5, 0.5, 0, 0.5, 0.5, 0, 0, 0, 1;
  auto rev = check_reversibility(StochasticKernel<double>(K), ProbVec<double>(vec({0.5, 0.5, 0})));
  auto s = spectral_summary(rev);
  CHECK(s.dropped.size() == 1);
  CHECK(s.operator_norm == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("operator norm matches the general eigensolver on random reversible kernels") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(6));
    const auto w = random_dist(n, rng);
    const M K = random_reversible_kernel(w, rng);
    const auto rev = check_reversibility(StochasticKernel<double>(K), w);
    const auto s = spectral_summary(rev);
    CHECK(s.operator_norm == doctest::Approx(oracle::norm(K)).epsilon(1e-9));
    CHECK(std::abs(s.gap + s.operator_norm - 1.0) < 1e-15);
    CHECK(s.min_formula_residual < 1e-9);
    // Rayleigh quotients never exceed the norm.
    for (int k = 0; k < 200; ++k) {
      V f(n);
      for (Index x = 0; x < n; ++x) f[x] = rng.uniform(-1, 1);
      const V f0 = center(w, f);
      const double q = inner(w, f0, V(K * f0)) / norm_sq(w, f0);
      CHECK(std::abs(q) <= s.operator_norm + 1e-9);
    }
  }
}

TEST_CASE("Dirichlet forms") {
  const auto u = ProbVec<double>::uniform(2);
  auto rev = check_reversibility(StochasticKernel<double>(mat2(0.7, 0.3, 0.3, 0.7)), u);
  CHECK(dirichlet_form(rev, vec({1, -1})) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(dirichlet_form(rev, vec({3, 3})) == doctest::Approx(0.0));

  SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(5));
    const auto w = random_dist(n, rng);
    const M K = random_reversible_kernel(w, rng);
    const auto r = check_reversibility(StochasticKernel<double>(K), w);
    V f(n);
    for (Index x = 0; x < n; ++x) f[x] = rng.uniform(-2, 2);
    CHECK(dirichlet_form(r, f) == doctest::Approx(oracle::dirichlet(K, w.weights(), f)).epsilon(1e-10));
    CHECK(std::abs(dirichlet_form_sum(r.kernel(), w, f) - dirichlet_form_inner(r, f)) < 1e-10);
  }
  auto ind = check_reversibility(StochasticKernel<double>::independence(ProbVec<double>(vec({0.2, 0.3, 0.5}))),
                                 ProbVec<double>(vec({0.2, 0.3, 0.5})));
  const V g = vec({1, 4, -2});
  const ProbVec<double> w3(vec({0.2, 0.3, 0.5}));
  CHECK(dirichlet_form(ind, g) == doctest::Approx(norm_sq(w3, center(w3, g))));
}

TEST_CASE("asymptotic variance") {
  const auto u = ProbVec<double>::uniform(2);
  auto rev = check_reversibility(StochasticKernel<double>(mat2(0.7, 0.3, 0.3, 0.7)), u);
  CHECK(asymptotic_variance(rev, vec({1, -1})) == doctest::Approx(7.0 / 3).epsilon(1e-13));
  // Shifting f leaves the variance unchanged.
  CHECK(asymptotic_variance(rev, vec({5, 3})) == doctest::Approx(7.0 / 3).epsilon(1e-13));

  const ProbVec<double> w3(vec({0.2, 0.3, 0.5}));
  auto ind = check_reversibility(StochasticKernel<double>::independence(w3), w3);
  const V g = vec({1, 4, -2});
  CHECK(asymptotic_variance(ind, g) == doctest::Approx(norm_sq(w3, center(w3, g))));

  auto id = check_reversibility(StochasticKernel<double>::identity(2), u);
  try {
    asymptotic_variance(id, vec({1, -1}));
    FAIL("expected NoSpectralGap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSpectralGap);
  }

  SplitMix64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(4));
    const auto w = random_dist(n, rng);
    M K = random_reversible_kernel(w, rng);
    K = 0.5 * (M::Identity(n, n) + K);  // psd, so the series converges monotonically
    const auto r = check_reversibility(StochasticKernel<double>(K), w);
    if (spectral_summary(r).operator_norm > 0.995) continue;
    V f(n);
    for (Index x = 0; x < n; ++x) f[x] = rng.uniform(-1, 1);
    const V f0 = center(w, f);
    const double v = asymptotic_variance(r, f);
    CHECK(v == doctest::Approx(variance_series(K, w.weights(), f0)).epsilon(1e-7));
    CHECK(v >= norm_sq(w, f0) - 1e-9);
  }
}

TEST_CASE("t-step powers") {
  const M K = mat2(0.7, 0.3, 0.3, 0.7);
  CHECK(t_step(StochasticKernel<double>(K), 1).matrix().isApprox(K));
  const M K2 = t_step(StochasticKernel<double>(K), 2).matrix();
  CHECK(K2(0, 0) == doctest::Approx(0.58));
  CHECK(K2(0, 1) == doctest::Approx(0.42));
  CHECK(t_step(StochasticKernel<double>(mat2(0, 1, 1, 0)), 2).matrix().isApprox(M::Identity(2, 2)));

  SplitMix64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(5));
    const auto w = random_dist(n, rng);
    const M Q = random_reversible_kernel(w, rng);
    const int t = 1 + static_cast<int>(rng.below(6));
    const auto r = check_reversibility(StochasticKernel<double>(Q), w);
    const auto rt = check_reversibility(t_step(r.kernel(), t), w);
    CHECK(spectral_summary(rt).operator_norm ==
          doctest::Approx(std::pow(spectral_summary(r).operator_norm, t)).epsilon(1e-9));
  }
}

TEST_CASE("spectral Jensen lemma") {
  const auto u = ProbVec<double>::uniform(2);
  auto swap = check_reversibility(StochasticKernel<double>(mat2(0, 1, 1, 0)), u);
  auto r = spectral_jensen_check(swap, vec({1, -1}), 2);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(1.0));
  try {
    spectral_jensen_check(swap, vec({1, -1}), 3);
    FAIL("expected PreconditionUnmet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionUnmet);
  }
  try {
    spectral_jensen_check(swap, vec({2, 2}), 2);
    FAIL("expected ZeroFunction");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroFunction);
  }

  auto lazy = check_reversibility(StochasticKernel<double>(mat2(0.7, 0.3, 0.3, 0.7)), u);
  auto r3 = spectral_jensen_check(lazy, vec({2, -1}), 3);
  CHECK(r3.pass);
  // Direct matrix power oracle for the right side.
  const V f0 = vec({1.5, -1.5});
  const M K3 = mat2(0.7, 0.3, 0.3, 0.7) * mat2(0.7, 0.3, 0.3, 0.7) * mat2(0.7, 0.3, 0.3, 0.7);
  CHECK(r3.rhs == doctest::Approx(inner(u, f0, V(K3 * f0)) / norm_sq(u, f0)));

  SplitMix64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(5));
    const auto w = random_dist(n, rng);
    const auto rv = check_reversibility(StochasticKernel<double>(random_reversible_kernel(w, rng)), w);
    V f(n);
    for (Index x = 0; x < n; ++x) f[x] = rng.uniform(-1, 1);
    for (int t = 2; t <= 8; t += 2) CHECK(spectral_jensen_check(rv, f, t).pass);
  }
}

TEST_CASE("long double instantiation") {
  using LM = Matrix<long double>;
  LM K(2, 2);
  K << 0.7L, 0.3L, 0.3L, 0.7L;
  auto rev = check_reversibility(StochasticKernel<long double>(K), ProbVec<long double>::uniform(2));
  auto s = spectral_summary(rev);
  CHECK(std::abs(static_cast<double>(s.operator_norm - 0.4L)) < 1e-15);
}
