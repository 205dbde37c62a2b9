#include <catch2/catch_amalgamated.hpp>

#include "curvdecay/ktheory/difference.hpp"
#include "curvdecay/util/rng.hpp"

using namespace curvdecay::ktheory;
namespace la = curvdecay::la;
using curvdecay::Rng;
using la::Mat;
using la::cd;

namespace {

Mat random_complex(Rng& rng, int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cd(rng.normal(), rng.normal());
  return m;
}

// random (generally non-self-adjoint) idempotent: similarity of a 0/1 diagonal
Mat random_idempotent(Rng& rng, int n) {
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = rng.uniform() < 0.5 ? 1.0 : 0.0;
  Mat s = Mat::Identity(n, n) + 0.3 * random_complex(rng, n);
  return s * d * s.partialPivLu().solve(Mat::Identity(n, n));
}

// spectral projection oracle by full (non-Hermitian) eigendecomposition
Mat eig_projection_oracle(const Mat& e) {
  Eigen::ComplexEigenSolver<Mat> es(e);
  Mat V = es.eigenvectors();
  Mat D = Mat::Zero(e.rows(), e.cols());
  for (int i = 0; i < e.rows(); ++i) D(i, i) = es.eigenvalues()(i).real() >= 0.5 ? 1.0 : 0.0;
  return V * D * V.partialPivLu().solve(Mat::Identity(e.rows(), e.cols()));
}

}  // namespace

TEST_CASE("Z(beta) inverse identity for random idempotents") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform_index(5));
    Mat b = random_idempotent(rng, n);
    Mat id = Mat::Identity(4 * n, 4 * n);
    CHECK(la::op_norm(Z_of(b) * Zinv_of(b) - id) <= 1e-10);
    CHECK(la::op_norm(Zinv_of(b) * Z_of(b) - id) <= 1e-10);
  }
}

TEST_CASE("d(alpha,alpha) is the e13 pattern") {
  Rng rng(6);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform_index(4));
    Mat a = random_idempotent(rng, n);
    Mat d = difference_idempotent(a, a);
    CHECK(la::op_norm(d - e13_pattern(n)) <= 1e-9);
  }
}

TEST_CASE("scalar substitution oracle: alpha=1, beta=0") {
  Mat one = Mat::Identity(1, 1), zero = Mat::Zero(1, 1);
  Mat d = difference_idempotent(one, zero);
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = 1.0;
  want(2, 2) = 1.0;
  CHECK(la::op_norm(d - want) <= 1e-12);
  // rank(d) - rank(e13) = 1
  CHECK(std::lround(d.trace().real()) - std::lround(e13_pattern(1).trace().real()) == 1);
}

TEST_CASE("d stays idempotent for 50 random idempotent pairs") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform_index(4));
    Mat a = random_idempotent(rng, n), b = random_idempotent(rng, n);
    Mat d = difference_idempotent(a, b);
    CHECK(la::idempotent_defect(d) <= 1e-10);
  }
  Mat bad = Mat::Identity(2, 2) * 0.4;  // defect way above tolerance
  CHECK_THROWS_AS(difference_idempotent(bad, bad), std::invalid_argument);
}

TEST_CASE("theta fixes exact projections and rounds near-idempotents") {
  Mat p = Mat::Zero(3, 3);
  p(0, 0) = 1.0;
  p(2, 2) = 1.0;
  CHECK(la::op_norm(la::theta_contour(p, 64) - p) <= 1e-10);

  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 0.95;
  d(1, 1) = 0.03;
  Mat want = Mat::Zero(2, 2);
  want(0, 0) = 1.0;
  CHECK(la::op_norm(la::theta_contour(d, 64) - want) <= 1e-8);
}

TEST_CASE("theta matches the spectral projection oracle on non-normal inputs") {
  Rng rng(9);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 3 + static_cast<int>(rng.uniform_index(6));
    Mat e = random_idempotent(rng, n);
    e += 0.03 * random_complex(rng, n);  // perturbation keeps the gap
    if (la::idempotent_defect(e) >= 0.25) continue;
    Mat t = la::theta_contour(e, 64);
    CHECK(la::op_norm(t - eig_projection_oracle(e)) <= 1e-8);
    // theta is idempotent and a retraction: theta(theta(e)) = theta(e)
    CHECK(la::idempotent_defect(t) <= 1e-8);
    CHECK(la::op_norm(la::theta_contour(t, 64) - t) <= 1e-8);
  }
}

TEST_CASE("theta commutes with similarity") {
  Rng rng(10);
  Mat e = random_idempotent(rng, 5);
  Mat s = Mat::Identity(5, 5) + 0.2 * random_complex(rng, 5);
  Mat si = s.partialPivLu().solve(Mat::Identity(5, 5));
  Mat lhs = la::theta_contour(s * e * si, 64);
  Mat rhs = s * la::theta_contour(e, 64) * si;
  CHECK(la::op_norm(lhs - rhs) <= 1e-8);
}

TEST_CASE("theta raises SPECTRAL_GAP when the defect is too large") {
  Mat e = Mat::Identity(2, 2) * 0.5;  // defect 1/4 exactly
  CHECK_THROWS_AS(la::theta_contour(e, 64), la::SpectralGapError);
}
