#pragma once

// Dense complex linear algebra: LAPACK-backed eigensolvers for the sizes the
// lattice models produce, plus the matrix functions the homotopy algorithms
// need (contour projections, series log, exp, inverse square roots).

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>

#include <complex>
#include <lapacke.h>

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace curvdecay::la {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using cd = std::complex<double>;

struct HermEig {
  RVec evals;
  Mat evecs;
};

inline HermEig hermitian_eig(const Mat& H) {
  const int n = static_cast<int>(H.rows());
  HermEig out;
  out.evecs = H;
  out.evals.resize(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.evecs.data(), n,
                            out.evals.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  return out;
}

inline RVec hermitian_eigenvalues(const Mat& H) {
  const int n = static_cast<int>(H.rows());
  Mat work = H;
  RVec w(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  return w;
}

struct Svd {
  Mat U, V;  // A = U * diag(sigma) * V^H
  RVec sigma;
};

inline Svd svd(const Mat& A) {
  const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
  const int k = std::min(m, n);
  Svd out;
  Mat work = A;
  out.U.resize(m, k);
  out.sigma.resize(k);
  Mat vt(k, n);
  int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m, out.sigma.data(),
                            out.U.data(), m, vt.data(), k);
  if (info != 0) throw std::runtime_error("zgesdd failed, info=" + std::to_string(info));
  out.V = vt.adjoint();
  return out;
}

inline Vec eigenvalues(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  Mat work = A;
  Vec w(n);
  int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(),
                           nullptr, 1, nullptr, 1);
  if (info != 0) throw std::runtime_error("zgeev failed, info=" + std::to_string(info));
  return w;
}

// Single-precision eigenvalues, for counting against coarse thresholds on
// large cores (absolute accuracy ~1e-4 at these norms, far inside the 0.2
// gap the callers demand).
inline Vec eigenvalues_single(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXcf work = A.cast<std::complex<float>>();
  Eigen::VectorXcf w(n);
  int info = LAPACKE_cgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(),
                           nullptr, 1, nullptr, 1);
  if (info != 0) throw std::runtime_error("cgeev failed, info=" + std::to_string(info));
  return w.cast<cd>();
}

// Largest singular value. Closed form for 1x1/2x2, small Jacobi SVD next,
// dense Hermitian route for moderate sizes, power iteration on A^H A above.
inline double op_norm(const Mat& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  const int n = static_cast<int>(A.rows()), m = static_cast<int>(A.cols());
  if (n == 1 && m == 1) return std::abs(A(0, 0));
  if (n == 2 && m == 2) {
    double f2 = A.squaredNorm();
    double det = std::abs(A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0));
    double disc = std::sqrt(std::max(0.0, f2 * f2 - 4.0 * det * det));
    return std::sqrt(0.5 * (f2 + disc));
  }
  if (std::max(n, m) <= 24) return Eigen::JacobiSVD<Mat>(A).singularValues()(0);
  if (std::max(n, m) <= 768) {
    Mat G = A.adjoint() * A;
    RVec w = hermitian_eigenvalues(G);
    return std::sqrt(std::max(0.0, w.maxCoeff()));
  }
  Vec v = Vec::Ones(m);
  for (int i = 0; i < m; ++i) v(i) += cd(0.3 * std::cos(1.7 * i), 0.2 * std::sin(2.3 * i));
  v.normalize();
  double prev = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vec w = A * v;
    v = A.adjoint() * w;
    double s2 = v.norm();
    if (s2 == 0) return 0.0;
    v /= s2;
    double s = std::sqrt(s2);
    if (it > 8 && std::abs(s - prev) <= 1e-12 * std::max(1.0, s)) return s;
    prev = s;
  }
  return prev;
}

inline double idempotent_defect(const Mat& e) { return op_norm(e * e - e); }

inline bool is_hermitian(const Mat& A, double tol = 1e-10) {
  return op_norm(A - A.adjoint()) <= tol * std::max(1.0, op_norm(A));
}

class SpectralGapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Mat inverse(Mat A) {
  const int n = static_cast<int>(A.rows());
  std::vector<lapack_int> ipiv(n);
  int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, A.data(), n, ipiv.data());
  if (info != 0) throw std::runtime_error("zgetrf failed, info=" + std::to_string(info));
  info = LAPACKE_zgetri(LAPACK_COL_MAJOR, n, A.data(), n, ipiv.data());
  if (info != 0) throw std::runtime_error("zgetri failed, info=" + std::to_string(info));
  return A;
}

// Holomorphic functional calculus of the indicator of {Re z >= 1/2}, as the
// contour integral over Gamma = {|z-1| = 1/2} with an M-node trapezoid rule.
// Requires the almost-idempotent gap condition ||e^2-e|| < 1/4 so that the
// spectrum stays away from the contour.
inline Mat theta_contour(const Mat& e, int contour_nodes = 64) {
  double defect = idempotent_defect(e);
  if (!(defect < 0.25))
    throw SpectralGapError("theta: defect " + std::to_string(defect) +
                           " >= 1/4, spectrum may touch the contour");
  const int n = static_cast<int>(e.rows());
  Mat acc = Mat::Zero(n, n);
  Mat id = Mat::Identity(n, n);
  for (int k = 0; k < contour_nodes; ++k) {
    double th = 2.0 * M_PI * (k + 0.5) / contour_nodes;
    cd w = 0.5 * std::exp(cd(0, th));
    cd xi = cd(1, 0) + w;
    acc += w * inverse(xi * id - e);
  }
  return acc / static_cast<double>(contour_nodes);
}

// Spectral projector of a Hermitian matrix onto eigenvalues > threshold.
inline Mat hermitian_spectral_projector(const Mat& H, double threshold = 0.5) {
  HermEig eg = hermitian_eig(H);
  const int n = static_cast<int>(H.rows());
  Mat P = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    if (eg.evals(i) > threshold) P += eg.evecs.col(i) * eg.evecs.col(i).adjoint();
  return P;
}

// exp by scaling and squaring with a Taylor core.
inline Mat matrix_exp(const Mat& A) {
  double nrm = op_norm(A);
  int s = 0;
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++s;
  }
  Mat X = A / std::pow(2.0, s);
  const int n = static_cast<int>(A.rows());
  Mat term = Mat::Identity(n, n), out = Mat::Identity(n, n);
  for (int k = 1; k <= 24; ++k) {
    term = term * X / static_cast<double>(k);
    out += term;
    if (term.norm() < 1e-17 * std::max(1.0, out.norm())) break;
  }
  for (int i = 0; i < s; ++i) out = out * out;
  return out;
}

// Principal log by the power series of log(1-(1-X)); valid for ||1-X|| < 1,
// which is the regime every caller enforces beforehand.
inline Mat matrix_log_series(const Mat& X, double guard = 1.0) {
  const int n = static_cast<int>(X.rows());
  Mat Y = Mat::Identity(n, n) - X;
  double ny = op_norm(Y);
  if (!(ny < guard))
    throw std::domain_error("matrix log series needs ||1-X|| < " + std::to_string(guard) +
                            ", got " + std::to_string(ny));
  Mat term = Mat::Identity(n, n), acc = Mat::Zero(n, n);
  for (int k = 1; k <= 400; ++k) {
    term = term * Y;
    acc -= term / static_cast<double>(k);
    if (term.norm() < 1e-17) break;
  }
  return acc;
}

// (H)^{-1/2} for positive definite Hermitian H.
inline Mat inv_sqrt_posdef(const Mat& H) {
  HermEig eg = hermitian_eig(H);
  if (eg.evals.minCoeff() <= 0)
    throw std::domain_error("inv_sqrt: matrix not positive definite");
  Mat P = eg.evecs;
  for (int i = 0; i < eg.evals.size(); ++i) P.col(i) *= 1.0 / std::sqrt(eg.evals(i));
  return P * eg.evecs.adjoint();
}

struct RankCount {
  int count = 0;
  double gap = 0.0;  // smallest |Re(lambda) - 1/2| over the spectrum
};

// Count eigenvalues with Re > 1/2. gap reports how far the spectrum stays
// from the threshold; callers demand gap >= 0.2 before trusting the count.
inline RankCount count_above_half(const Vec& evals) {
  RankCount rc;
  rc.gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < evals.size(); ++i) {
    double re = evals(i).real();
    rc.gap = std::min(rc.gap, std::abs(re - 0.5));
    if (re > 0.5) ++rc.count;
  }
  return rc;
}

}  // namespace curvdecay::la
