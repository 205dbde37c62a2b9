#pragma once

// The difference construction: Z(beta), its printed inverse, and the 4x4
// block idempotent d(alpha,beta) representing [alpha]-[beta].

#include <Eigen/Dense>

#include <stdexcept>

#include "curvdecay/ktheory/linalg.hpp"

namespace curvdecay::ktheory {

using la::Mat;

inline Mat Z_of(const Mat& b) {
  const int m = static_cast<int>(b.rows());
  Mat I = Mat::Identity(m, m), O = Mat::Zero(m, m);
  Mat Z(4 * m, 4 * m);
  Mat ib = I - b;
  Z << b, O, ib, O,
       ib, O, O, b,
       O, O, b, ib,
       O, I, O, O;
  return Z;
}

inline Mat Zinv_of(const Mat& b) {
  const int m = static_cast<int>(b.rows());
  Mat I = Mat::Identity(m, m), O = Mat::Zero(m, m);
  Mat Z(4 * m, 4 * m);
  Mat ib = I - b;
  Z << b, ib, O, O,
       O, O, O, I,
       ib, O, b, O,
       O, b, ib, O;
  return Z;
}

inline Mat e13_pattern(int m) {
  Mat e = Mat::Zero(4 * m, 4 * m);
  e.topLeftCorner(m, m) = Mat::Identity(m, m);
  return e;
}

// d(alpha,beta) = Z(beta)^{-1} diag(alpha, 1-beta, 0, 0) Z(beta). For exact
// idempotents alpha, beta the result is an exact idempotent; almost
// idempotent inputs (within defect_tol) give the almost idempotent the index
// pipeline feeds into theta.
inline Mat difference_idempotent(const Mat& alpha, const Mat& beta,
                                 double defect_tol = 1e-9) {
  if (alpha.rows() != beta.rows() || alpha.rows() != alpha.cols())
    throw std::invalid_argument("difference_idempotent: shape mismatch");
  double da = la::idempotent_defect(alpha), db = la::idempotent_defect(beta);
  if (da > defect_tol || db > defect_tol)
    throw std::invalid_argument("difference_idempotent: defect above tolerance (" +
                                std::to_string(std::max(da, db)) + ")");
  const int m = static_cast<int>(alpha.rows());
  Mat Z = Z_of(beta), Zi = Zinv_of(beta);
  if (la::op_norm(Z * Zi - Mat::Identity(4 * m, 4 * m)) > 1e-10)
    throw std::runtime_error("difference_idempotent: Z(beta) inverse check failed");
  Mat mid = Mat::Zero(4 * m, 4 * m);
  mid.topLeftCorner(m, m) = alpha;
  mid.block(m, m, m, m) = Mat::Identity(m, m) - beta;
  return Zi * mid * Z;
}

}  // namespace curvdecay::ktheory
