#pragma once

// chi of a Hermitian matrix, the idempotent P_{t,D}, and propagation
// measurements.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "curvdecay/ktheory/chi.hpp"
#include "curvdecay/ktheory/linalg.hpp"
#include "curvdecay/ktheory/spaces.hpp"

namespace curvdecay::ktheory {

using la::Mat;

inline Mat chi_of(const Mat& D, double t) {
  if (t <= 0) throw std::invalid_argument("chi_of: t must be positive");
  if (!la::is_hermitian(D, 1e-10)) throw std::domain_error("chi_of: matrix not Hermitian");
  la::HermEig eg = la::hermitian_eig(D);
  Mat scaled = eg.evecs;
  for (int i = 0; i < eg.evals.size(); ++i) scaled.col(i) *= chi(eg.evals(i) / t);
  return scaled * eg.evecs.adjoint();
}

// chi(t^{-1} D) for D = [[0, A],[A*, 0]]: odd functions act on the SVD of the
// off-diagonal block, U_{t,D} = W chi(Sigma/t) V^* for A = W Sigma V^*.
inline Mat chi_offdiag_block(const Mat& A, double t) {
  if (t <= 0) throw std::invalid_argument("chi_offdiag_block: t must be positive");
  la::Svd s = la::svd(A);
  Mat scaled = s.U;
  for (int i = 0; i < s.sigma.size(); ++i) scaled.col(i) *= chi(s.sigma(i) / t);
  return scaled * s.V.adjoint();
}

struct AlmostIdempotent {
  Mat e;
  double defect = 0.0;
  double norm = 0.0;

  static AlmostIdempotent of(Mat m) {
    AlmostIdempotent a;
    a.defect = la::idempotent_defect(m);
    a.norm = la::op_norm(m);
    a.e = std::move(m);
    return a;
  }
};

// The idempotent P_{t,D} = W_{t,D} e_{11} W_{t,D}^{-1}, assembled from the
// closed form
//   [ 1-(1-UV)^2          (2-UV) U (1-VU) ]
//   [ V(1-UV)             (1-VU)^2        ]
// with U = U_{t,D} and V = U^*.
struct PtD {
  Mat P;    // 2x2 spinor-blocked, size 2S
  Mat U;    // chi block
  int S;    // block size

  Mat e11() const {
    Mat e = Mat::Zero(2 * S, 2 * S);
    e.topLeftCorner(S, S) = Mat::Identity(S, S);
    return e;
  }
};

inline PtD p_tD_from_block(const Mat& A, double t) {
  if (t < 1.0) throw std::invalid_argument("p_tD: requires t >= 1");
  const int S = static_cast<int>(A.rows());
  Mat U = chi_offdiag_block(A, t);
  Mat V = U.adjoint();
  Mat I = Mat::Identity(S, S);
  Mat one_uv = I - U * V;
  Mat one_vu = I - V * U;
  PtD out;
  out.S = S;
  out.U = U;
  out.P = Mat::Zero(2 * S, 2 * S);
  out.P.topLeftCorner(S, S) = I - one_uv * one_uv;
  out.P.topRightCorner(S, S) = (2.0 * I - U * V) * U * one_vu;
  out.P.bottomLeftCorner(S, S) = V * one_uv;
  out.P.bottomRightCorner(S, S) = one_vu * one_vu;
  return out;
}

// General graded input: D Hermitian and odd for the grading that declares the
// first n_plus basis vectors even. Checks both structure conditions.
inline std::pair<AlmostIdempotent, Mat> p_tD(const Mat& D, int n_plus, double t) {
  const int n = static_cast<int>(D.rows());
  if (!la::is_hermitian(D, 1e-10)) throw std::domain_error("p_tD: D not Hermitian");
  if (n_plus <= 0 || n_plus >= n) throw std::domain_error("p_tD: bad grading split");
  if (la::op_norm(Mat(D.topLeftCorner(n_plus, n_plus))) > 1e-10 * std::max(1.0, la::op_norm(D)) ||
      la::op_norm(Mat(D.bottomRightCorner(n - n_plus, n - n_plus))) >
          1e-10 * std::max(1.0, la::op_norm(D)))
    throw std::domain_error("p_tD: D not odd for the grading");
  if (n_plus != n - n_plus)
    throw std::domain_error("p_tD: grading blocks must have equal dimension");
  PtD p = p_tD_from_block(D.topRightCorner(n_plus, n - n_plus), t);
  return {AlmostIdempotent::of(p.P), p.e11()};
}

// prop(T) = max d(x,y) over site pairs whose block has norm > tau. T is
// site-major with uniform block size.
inline double propagation(const Mat& T, const FiniteMetricSpace& space, int block,
                          double tau) {
  if (tau <= 0) throw std::invalid_argument("propagation: tau must be positive");
  int S = space.size();
  if (T.rows() != S * block) throw std::invalid_argument("propagation: size mismatch");
  double prop = 0.0;
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j) {
      if (space.d(i, j) <= prop) continue;
      if (T.block(i * block, j * block, block, block).norm() > tau)
        prop = space.d(i, j);
    }
  return prop;
}

// Chirality-major operator (2 halves, each sites x k slots) to site-major
// layout with block 2k, so propagation can read per-site blocks.
inline Mat chirality_to_site_major(const Mat& P, int sites, int k) {
  const int H = sites * k;
  Mat out(2 * H, 2 * H);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < sites; ++i)
        for (int k1 = 0; k1 < k; ++k1)
          for (int j = 0; j < sites; ++j)
            for (int k2 = 0; k2 < k; ++k2)
              out(2 * k * i + a * k + k1, 2 * k * j + b * k + k2) =
                  P(a * H + i * k + k1, b * H + j * k + k2);
  return out;
}

inline Mat spinor_to_site_major(const Mat& P, int S) {
  return chirality_to_site_major(P, S, 1);
}

inline std::pair<double, double> scalar_bound_constants(double l2, double l3, double l4) {
  if (l2 <= 0 || l3 <= 0 || l4 <= 0)
    throw std::invalid_argument("scalar_bound_constants: inputs must be positive");
  return {l4 / (4.0 * l2), 256.0 * l2 * l2 * l3 * l3};
}

}  // namespace curvdecay::ktheory
