#pragma once

// Exact L^2 spectral analysis of reversible kernels on finite state spaces.
// All quantities are computed against a stationary distribution w:
//   <f, g>_w = sum_x w(x) f(x) g(x),  ||K||_w = sup over mean-zero f of |<f,Kf>|/||f||^2.
// Types are templated on the scalar so the same code runs in double and long double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gibbscert/error.hpp"
#include "gibbscert/report.hpp"

namespace gibbscert {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using FunctionVec = Vector<Scalar>;

inline constexpr double kReversibilityTol = 1e-10;
inline constexpr double kNullMass = 1e-14;
inline constexpr double kPsdTol = 1e-9;

template <typename Scalar>
class ProbVec {
 public:
  ProbVec() = default;

  // Normalizes the weights to sum one.
  explicit ProbVec(Vector<Scalar> weights) : w_(std::move(weights)) {
    if (w_.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty probability vector");
    Scalar total = 0;
    for (Index i = 0; i < w_.size(); ++i) {
      if (!std::isfinite(static_cast<double>(w_[i])) || w_[i] < 0)
        throw Error(ErrorCode::InvalidArgument,
                    "probability weight " + std::to_string(i) + " is negative or not finite");
      total += w_[i];
    }
    if (!(total > 0)) throw Error(ErrorCode::InvalidArgument, "probability weights sum to zero");
    w_ /= total;
  }

  static ProbVec uniform(Index n) { return ProbVec(Vector<Scalar>::Ones(n)); }

  static ProbVec point_mass(Index n, Index at) {
    Vector<Scalar> w = Vector<Scalar>::Zero(n);
    w[at] = 1;
    return ProbVec(std::move(w));
  }

  Index size() const { return w_.size(); }
  Scalar operator[](Index i) const { return w_[i]; }
  const Vector<Scalar>& weights() const { return w_; }

  std::vector<Index> support(Scalar threshold = 0) const {
    std::vector<Index> s;
    for (Index i = 0; i < w_.size(); ++i)
      if (w_[i] > threshold) s.push_back(i);
    return s;
  }

 private:
  Vector<Scalar> w_;
};

template <typename Scalar>
class StochasticKernel {
 public:
  StochasticKernel() = default;

  explicit StochasticKernel(Matrix<Scalar> m, double row_tol = 1e-12) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
      throw Error(ErrorCode::DimensionMismatch, "kernel matrix must be square and non-empty");
    for (Index i = 0; i < m_.rows(); ++i) {
      Scalar row = 0;
      for (Index j = 0; j < m_.cols(); ++j) {
        Scalar& v = m_(i, j);
        if (!std::isfinite(static_cast<double>(v)) || v < Scalar(-1e-14))
          throw Error(ErrorCode::InvalidArgument, "kernel entry (" + std::to_string(i) + ", " +
                                                      std::to_string(j) +
                                                      ") is negative or not finite");
        if (v < 0) v = 0;
        row += v;
      }
      using std::abs;
      if (abs(row - Scalar(1)) > Scalar(row_tol))
        throw Error(ErrorCode::InvalidArgument,
                    "kernel row " + std::to_string(i) + " sums to " +
                        std::to_string(static_cast<double>(row)));
    }
  }

  static StochasticKernel identity(Index n) {
    return StochasticKernel(Matrix<Scalar>::Identity(n, n));
  }

  // K(x, .) = w for every x.
  static StochasticKernel independence(const ProbVec<Scalar>& w) {
    return StochasticKernel(Vector<Scalar>::Ones(w.size()) * w.weights().transpose());
  }

  Index size() const { return m_.rows(); }
  const Matrix<Scalar>& matrix() const { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }

 private:
  Matrix<Scalar> m_;
};

template <typename Scalar>
class ReversiblePair {
 public:
  ReversiblePair() = default;

  // Throws NotReversibleError when max |w(x)K(x,y) - w(y)K(y,x)| > tol.
  static ReversiblePair verify(StochasticKernel<Scalar> kernel, ProbVec<Scalar> stationary,
                               double tol = kReversibilityTol) {
    if (kernel.size() != stationary.size())
      throw Error(ErrorCode::DimensionMismatch,
                  "kernel has " + std::to_string(kernel.size()) + " states, distribution has " +
                      std::to_string(stationary.size()));
    const auto& K = kernel.matrix();
    const auto& w = stationary.weights();
    const Matrix<Scalar> flow = w.asDiagonal() * K;
    Scalar worst = 0;
    Index wi = 0, wj = 0;
    for (Index i = 0; i < flow.rows(); ++i)
      for (Index j = i + 1; j < flow.cols(); ++j) {
        using std::abs;
        const Scalar d = abs(flow(i, j) - flow(j, i));
        if (d > worst) {
          worst = d;
          wi = i;
          wj = j;
        }
      }
    if (worst > Scalar(tol))
      throw NotReversibleError(static_cast<std::size_t>(wi), static_cast<std::size_t>(wj),
                               static_cast<double>(worst));
    ReversiblePair p;
    p.stationarity_defect_ = (w.transpose() * K - w.transpose()).cwiseAbs().maxCoeff();
    p.kernel_ = std::move(kernel);
    p.stationary_ = std::move(stationary);
    p.reversibility_defect_ = worst;
    return p;
  }

  const StochasticKernel<Scalar>& kernel() const { return kernel_; }
  const ProbVec<Scalar>& stationary() const { return stationary_; }
  Scalar reversibility_defect() const { return reversibility_defect_; }
  Scalar stationarity_defect() const { return stationarity_defect_; }
  Index size() const { return kernel_.size(); }

 private:
  StochasticKernel<Scalar> kernel_;
  ProbVec<Scalar> stationary_;
  Scalar reversibility_defect_ = 0;
  Scalar stationarity_defect_ = 0;
};

template <typename Scalar>
struct SpectralSummary {
  Scalar operator_norm = 0;
  Scalar gap = 1;
  Scalar lambda_max = 0;
  Scalar lambda_min = 0;
  bool psd = true;
  // Spectrum on the mean-zero subspace, ascending.
  Vector<Scalar> eigenvalues;
  // Column k: unit-norm eigenfunction for eigenvalues[k], zero on dropped states.
  Matrix<Scalar> eigenfunctions;
  std::vector<Index> support;
  std::vector<Index> dropped;
  Scalar max_asymmetry = 0;
  Scalar min_formula_residual = 0;
};

// ---------------------------------------------------------------------------
// Inner products against a distribution.

template <typename Scalar, typename F, typename G>
Scalar inner(const ProbVec<Scalar>& w, const Eigen::MatrixBase<F>& f,
             const Eigen::MatrixBase<G>& g) {
  if (f.size() != w.size() || g.size() != w.size())
    throw Error(ErrorCode::DimensionMismatch, "function length does not match state count");
  return (w.weights().array() * f.derived().array() * g.derived().array()).sum();
}

template <typename Scalar, typename F>
Scalar norm_sq(const ProbVec<Scalar>& w, const Eigen::MatrixBase<F>& f) {
  return inner(w, f, f);
}

template <typename Scalar, typename F>
Vector<Scalar> center(const ProbVec<Scalar>& w, const Eigen::MatrixBase<F>& f) {
  if (f.size() != w.size())
    throw Error(ErrorCode::DimensionMismatch, "function length does not match state count");
  for (Index i = 0; i < f.size(); ++i)
    if (!std::isfinite(static_cast<double>(f(i))))
      throw Error(ErrorCode::InvalidArgument, "function has non-finite entries");
  const Scalar mean = w.weights().dot(f.derived());
  return f.derived().array() - mean;
}

// ---------------------------------------------------------------------------

template <typename Scalar>
ProbVec<Scalar> stationary_distribution(const StochasticKernel<Scalar>& kernel) {
  const Index n = kernel.size();
  const Matrix<Scalar> Kt = kernel.matrix().transpose();

  Eigen::EigenSolver<Matrix<Scalar>> es(Kt, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::Internal, "eigenvalue computation failed");
  int unit = 0;
  for (Index i = 0; i < n; ++i) {
    using std::abs;
    if (abs(es.eigenvalues()[i] - std::complex<Scalar>(1, 0)) < Scalar(1e-8)) ++unit;
  }
  if (unit != 1)
    throw Error(ErrorCode::NonUniqueStationary,
                "eigenvalue 1 has multiplicity " + std::to_string(unit));

  // Any n-1 balance equations are independent; replace the last with sum(w) = 1.
  Matrix<Scalar> A = Kt - Matrix<Scalar>::Identity(n, n);
  Vector<Scalar> b = Vector<Scalar>::Zero(n);
  A.row(n - 1).setOnes();
  b[n - 1] = 1;
  Vector<Scalar> w = A.colPivHouseholderQr().solve(b);
  for (Index i = 0; i < n; ++i) {
    if (w[i] < Scalar(-1e-9))
      throw Error(ErrorCode::Internal, "stationary solve produced a negative weight");
    if (w[i] < 0) w[i] = 0;
  }
  ProbVec<Scalar> out(std::move(w));
  const Scalar defect =
      (out.weights().transpose() * kernel.matrix() - out.weights().transpose()).cwiseAbs().maxCoeff();
  if (defect > Scalar(1e-10))
    throw Error(ErrorCode::Internal, "stationary residual " + std::to_string(static_cast<double>(defect)));
  return out;
}

template <typename Scalar>
ReversiblePair<Scalar> check_reversibility(const StochasticKernel<Scalar>& kernel,
                                           const ProbVec<Scalar>& stationary,
                                           double tol = kReversibilityTol) {
  return ReversiblePair<Scalar>::verify(kernel, stationary, tol);
}

// 1/2 sum_{x,y} w(x) K(x,y) (f(x) - f(y))^2.
template <typename Scalar, typename F>
Scalar dirichlet_form_sum(const StochasticKernel<Scalar>& kernel, const ProbVec<Scalar>& w,
                          const Eigen::MatrixBase<F>& f) {
  if (f.size() != kernel.size() || w.size() != kernel.size())
    throw Error(ErrorCode::DimensionMismatch, "function length does not match state count");
  const auto& K = kernel.matrix();
  Scalar total = 0;
  for (Index x = 0; x < K.rows(); ++x) {
    Scalar row = 0;
    for (Index y = 0; y < K.cols(); ++y) {
      const Scalar d = f(x) - f(y);
      row += K(x, y) * d * d;
    }
    total += w[x] * row;
  }
  return total / 2;
}

// ||f0||^2 - <f0, K f0> with f0 = f - wf.
template <typename Scalar, typename F>
Scalar dirichlet_form_inner(const ReversiblePair<Scalar>& rev, const Eigen::MatrixBase<F>& f) {
  const auto& w = rev.stationary();
  const Vector<Scalar> f0 = center(w, f);
  const Vector<Scalar> Kf = rev.kernel().matrix() * f0;
  return norm_sq(w, f0) - inner(w, f0, Kf);
}

template <typename Scalar, typename F>
Scalar dirichlet_form(const ReversiblePair<Scalar>& rev, const Eigen::MatrixBase<F>& f) {
  const Scalar by_sum = dirichlet_form_sum(rev.kernel(), rev.stationary(), f);
  const Scalar by_inner = dirichlet_form_inner(rev, f);
  using std::abs;
  const Scalar scale = std::max<Scalar>(Scalar(1), norm_sq(rev.stationary(), center(rev.stationary(), f)));
  if (abs(by_sum - by_inner) > Scalar(1e-8) * scale)
    throw Error(ErrorCode::Internal, "Dirichlet form routes disagree");
  return by_sum;
}

template <typename Scalar>
SpectralSummary<Scalar> spectral_summary(const ReversiblePair<Scalar>& rev) {
  const auto& w = rev.stationary().weights();
  const auto& K = rev.kernel().matrix();
  const Index n = rev.size();

  SpectralSummary<Scalar> out;
  for (Index i = 0; i < n; ++i) (w[i] < Scalar(kNullMass) ? out.dropped : out.support).push_back(i);
  if (out.support.empty())
    throw Error(ErrorCode::SingularStationary, "no state carries stationary mass >= 1e-14");
  const Index m = static_cast<Index>(out.support.size());

  using std::sqrt;
  Vector<Scalar> root(m);
  for (Index a = 0; a < m; ++a) root[a] = sqrt(w[out.support[a]]);

  // A = D^{1/2} K D^{-1/2} on the support; symmetric under detailed balance.
  Matrix<Scalar> A(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) A(a, b) = root[a] * K(out.support[a], out.support[b]) / root[b];
  out.max_asymmetry = (A - A.transpose()).cwiseAbs().maxCoeff();
  A = (A + A.transpose()) / 2;

  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(A);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Internal, "symmetric eigensolver failed");

  // The constant direction sqrt(w) is identified by overlap, not by eigenvalue.
  const Vector<Scalar> unit_root = root / root.norm();
  Index trivial = 0;
  (es.eigenvectors().transpose() * unit_root).cwiseAbs().maxCoeff(&trivial);

  out.eigenvalues.resize(m - 1);
  out.eigenfunctions = Matrix<Scalar>::Zero(n, m - 1);
  for (Index k = 0, c = 0; k < m; ++k) {
    if (k == trivial) continue;
    out.eigenvalues[c] = es.eigenvalues()[k];
    for (Index a = 0; a < m; ++a)
      out.eigenfunctions(out.support[a], c) = es.eigenvectors()(a, k) / root[a];
    ++c;
  }

  if (m > 1) {
    out.lambda_min = out.eigenvalues[0];
    out.lambda_max = out.eigenvalues[m - 2];
  }
  using std::abs;
  out.operator_norm = std::max(abs(out.lambda_max), abs(out.lambda_min));
  out.gap = 1 - out.operator_norm;
  out.psd = out.lambda_min >= Scalar(-kPsdTol);

  if (m > 1) {
    // 1 - ||K|| = min(2 - sup E/||f||^2, inf E/||f||^2), evaluated on the extreme eigenfunctions.
    const Scalar inf_ratio = dirichlet_form_sum(rev.kernel(), rev.stationary(),
                                                out.eigenfunctions.col(m - 2));
    const Scalar sup_ratio =
        dirichlet_form_sum(rev.kernel(), rev.stationary(), out.eigenfunctions.col(0));
    out.min_formula_residual = abs(std::min<Scalar>(2 - sup_ratio, inf_ratio) - out.gap);
    if (out.min_formula_residual > Scalar(1e-9))
      throw Error(ErrorCode::Internal,
                  "gap disagrees with Dirichlet min-formula by " +
                      std::to_string(static_cast<double>(out.min_formula_residual)));
  }
  return out;
}

// (inf, sup) of E_K(f)/||f||^2 over non-zero mean-zero f.
template <typename Scalar>
std::pair<Scalar, Scalar> dirichlet_ratio_extrema(const SpectralSummary<Scalar>& s) {
  return {1 - s.lambda_max, 1 - s.lambda_min};
}

template <typename Scalar>
std::pair<Scalar, Scalar> dirichlet_ratio_extrema(const ReversiblePair<Scalar>& rev) {
  return dirichlet_ratio_extrema(spectral_summary(rev));
}

// var_K(f) = 2<f0, (I-K)^{-1} f0> - ||f0||^2, solved on the stationary support.
template <typename Scalar, typename F>
Scalar asymptotic_variance(const ReversiblePair<Scalar>& rev, const SpectralSummary<Scalar>& summary,
                           const Eigen::MatrixBase<F>& f) {
  if (!(summary.operator_norm < Scalar(1 - 1e-12)))
    throw Error(ErrorCode::NoSpectralGap,
                "operator norm " + std::to_string(static_cast<double>(summary.operator_norm)));
  const auto& w = rev.stationary();
  const Vector<Scalar> f0 = center(w, f);
  const auto& sup = summary.support;
  const Index m = static_cast<Index>(sup.size());

  // (I - K + 1 w^T) g = f0 forces w g = 0, hence (I - K) g = f0 on the mean-zero subspace.
  Matrix<Scalar> M(m, m);
  Vector<Scalar> rhs(m), ws(m);
  for (Index a = 0; a < m; ++a) {
    ws[a] = w[sup[a]];
    rhs[a] = f0[sup[a]];
  }
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b)
      M(a, b) = (a == b ? Scalar(1) : Scalar(0)) - rev.kernel()(sup[a], sup[b]) + ws[b];
  const Vector<Scalar> g = M.partialPivLu().solve(rhs);
  const Scalar fg = (ws.array() * rhs.array() * g.array()).sum();
  const Scalar ff = (ws.array() * rhs.array().square()).sum();
  return 2 * fg - ff;
}

template <typename Scalar, typename F>
Scalar asymptotic_variance(const ReversiblePair<Scalar>& rev, const Eigen::MatrixBase<F>& f) {
  return asymptotic_variance(rev, spectral_summary(rev), f);
}

template <typename Scalar>
StochasticKernel<Scalar> t_step(const StochasticKernel<Scalar>& kernel, int t) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  Matrix<Scalar> result = Matrix<Scalar>::Identity(kernel.size(), kernel.size());
  Matrix<Scalar> base = kernel.matrix();
  for (int e = t;;) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (!e) break;
    base = base * base;
  }
  return StochasticKernel<Scalar>(std::move(result), 1e-10);
}

// (<f,Kf>/||f||^2)^t <= <f,K^t f>/||f||^2 for even t, or any t when K is psd.
template <typename Scalar, typename F>
BoundReport spectral_jensen_check(const ReversiblePair<Scalar>& rev, const Eigen::MatrixBase<F>& f,
                                  int t) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer");
  if (t % 2 != 0 && !spectral_summary(rev).psd)
    throw Error(ErrorCode::PreconditionUnmet, "odd t requires a positive semi-definite kernel");
  const auto& w = rev.stationary();
  const Vector<Scalar> f0 = center(w, f);
  const Scalar nn = norm_sq(w, f0);
  const Scalar scale = std::max<Scalar>(Scalar(1), norm_sq(w, f));
  if (!(nn > std::numeric_limits<Scalar>::epsilon() * std::numeric_limits<Scalar>::epsilon() * scale))
    throw Error(ErrorCode::ZeroFunction, "centered function is zero");
  const Vector<Scalar> Kf = rev.kernel().matrix() * f0;
  const Vector<Scalar> Ktf = t_step(rev.kernel(), t).matrix() * f0;
  using std::pow;
  const Scalar lhs = pow(inner(w, f0, Kf) / nn, t);
  const Scalar rhs = inner(w, f0, Ktf) / nn;
  BoundReport r = certify_leq("spectral_jensen.t" + std::to_string(t), static_cast<double>(lhs),
                              static_cast<double>(rhs), 1e-10);
  if (lhs < Scalar(-1e-10)) {
    r.pass = false;
    r.status = Status::fail;
    r.witness = "negative power";
  }
  return r;
}

}  // namespace gibbscert
