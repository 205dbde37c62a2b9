#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "curvdecay/ktheory/lattice.hpp"
#include "curvdecay/ktheory/pairing.hpp"
#include "curvdecay/ktheory/ptd.hpp"
#include "curvdecay/util/rng.hpp"

using namespace curvdecay::ktheory;
namespace la = curvdecay::la;
using curvdecay::Rng;
using la::Mat;
using la::cd;

namespace {

Mat random_complex(Rng& rng, int r, int c) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cd(rng.normal(), rng.normal());
  return m;
}

// graded Hermitian with given off-diagonal block
Mat graded_from_block(const Mat& A) {
  int S = static_cast<int>(A.rows());
  Mat D = Mat::Zero(2 * S, 2 * S);
  D.topRightCorner(S, S) = A;
  D.bottomLeftCorner(S, S) = A.adjoint();
  return D;
}

}  // namespace

TEST_CASE("chi_of spectral mapping") {
  Mat z = Mat::Zero(3, 3);
  CHECK(la::op_norm(chi_of(z, 2.0)) <= 1e-12);

  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -3.0;
  Mat c = chi_of(d, 1.5);
  CHECK(c(0, 0).real() == Catch::Approx(chi(2.0)).margin(1e-12));
  CHECK(c(1, 1).real() == Catch::Approx(-chi(2.0)).margin(1e-12));

  Mat nh = Mat::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(chi_of(nh, 1.0), std::domain_error);
}

TEST_CASE("graded chi: SVD route matches the full eigendecomposition") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Mat A = random_complex(rng, 12, 12);
    Mat D = graded_from_block(A);
    double t = 1.0 + trial;
    Mat full = chi_of(D, t);
    Mat U = chi_offdiag_block(A, t);
    // off-grading blocks vanish, on-grading blocks match U
    CHECK(la::op_norm(Mat(full.topLeftCorner(12, 12))) <= 1e-10);
    CHECK(la::op_norm(Mat(full.bottomRightCorner(12, 12))) <= 1e-10);
    CHECK(la::op_norm(Mat(full.topRightCorner(12, 12)) - U) <= 1e-9);
    CHECK(la::op_norm(Mat(full.bottomLeftCorner(12, 12)) - U.adjoint()) <= 1e-9);
  }
}

TEST_CASE("p_tD at D=0 is e_{2,2}") {
  Mat D = Mat::Zero(2, 2);
  auto [P, e11] = p_tD(D, 1, 1.0);
  Mat want = Mat::Zero(2, 2);
  want(1, 1) = 1.0;
  CHECK(la::op_norm(P.e - want) <= 1e-12);
  CHECK(la::op_norm(e11 - (Mat(2, 2) << 1, 0, 0, 0).finished()) <= 1e-12);
}

TEST_CASE("p_tD equals W e11 W^{-1} (oracle) and is exactly idempotent") {
  Rng rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    int S = 6 + static_cast<int>(rng.uniform_index(8));
    Mat A = random_complex(rng, S, S);
    double t = 1.0 + rng.uniform(0.0, 3.0);
    PtD p = p_tD_from_block(A, t);
    CHECK(la::idempotent_defect(p.P) <= 1e-10);

    Mat U = p.U, V = U.adjoint();
    Mat I = Mat::Identity(S, S), O = Mat::Zero(S, S);
    auto blk2 = [&](const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
      Mat m(2 * S, 2 * S);
      m << a, b, c, d;
      return m;
    };
    Mat W = blk2(I, U, O, I) * blk2(I, O, -V, I) * blk2(I, U, O, I) * blk2(O, -I, I, O);
    Mat e11 = blk2(I, O, O, O);
    Mat P_oracle = W * e11 * W.partialPivLu().solve(Mat::Identity(2 * S, 2 * S));
    CHECK(la::op_norm(p.P - P_oracle) <= 1e-9);
  }
}

TEST_CASE("p_tD norm bound and gap estimate") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int S = 4 + static_cast<int>(rng.uniform_index(29));
    Mat A = random_complex(rng, S, S) * rng.uniform(0.2, 4.0);
    double t = 1.0 + rng.uniform(0.0, 4.0);
    PtD p = p_tD_from_block(A, t);
    CHECK(la::op_norm(p.P) <= 64.0);
  }

  // spectral gap: D = diag-type with singular values >= lambda
  double lambda = 100.0, t = 1.0;
  Mat A = Mat::Identity(4, 4) * lambda;
  A(1, 1) = 1.3 * lambda;
  A(2, 2) = 2.0 * lambda;
  PtD p = p_tD_from_block(A, t);
  Mat e11 = Mat::Zero(8, 8);
  e11.topLeftCorner(4, 4) = Mat::Identity(4, 4);
  CHECK(la::op_norm(p.P - e11) <= 20.0 * t / (M_PI * lambda));
}

TEST_CASE("p_tD rejects bad gradings") {
  Mat D = Mat::Identity(4, 4);  // even part nonzero
  CHECK_THROWS_AS(p_tD(D, 2, 1.0), std::domain_error);
  Mat good = graded_from_block(Mat::Identity(2, 2));
  CHECK_THROWS_AS(p_tD(good, 2, 0.5), std::invalid_argument);  // t < 1
}

TEST_CASE("propagation: diagonal, banding, and P_t tail decay") {
  auto space = std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::line(16, 0.5));
  Mat T = Mat::Identity(32, 32);
  CHECK(propagation(T, *space, 2, 1e-8) == 0.0);

  LatticeDirac D(3, 0.5);
  auto lat_space = D.metric_space();
  Mat Dsite = chirality_to_site_major(D.full(), D.sites(), 2);
  CHECK(propagation(Dsite, *lat_space, 4, 1e-10) == Catch::Approx(0.5));

  // entries of P_t beyond distance 5/t decay exponentially: fit log norm
  // against distance and require a negative slope
  double t = 2.0;
  PtD p = p_tD_from_block(D.offdiag(), t);
  Mat Psite = chirality_to_site_major(p.P, D.sites(), 2);
  std::map<double, double> max_at_dist;
  int S = D.sites();
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j) {
      double d = lat_space->d(i, j);
      if (d <= 5.0 / t) continue;
      double nrm = Psite.block(4 * i, 4 * j, 4, 4).norm();
      auto [it, fresh] = max_at_dist.try_emplace(d, nrm);
      if (!fresh) it->second = std::max(it->second, nrm);
    }
  REQUIRE(max_at_dist.size() >= 3);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (auto [d, m] : max_at_dist) {
    if (m < 1e-300) continue;
    sx += d;
    sy += std::log(m);
    sxx += d * d;
    sxy += d * std::log(m);
    ++n;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope < -0.1);  // exponential tail with fitted c = -slope/t > 0
}

TEST_CASE("commutator bound on a 64-point line space") {
  const int S = 64, n = 2;
  const double h = 0.5;
  Mat A = line_dirac_offdiag(S, h);
  auto space = std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::line(S, h));

  Rng rng(77);
  double L = 1.7;
  std::vector<Mat> vals;
  Mat cur = random_complex(rng, n, n);
  cur *= 0.5 / la::op_norm(cur);
  for (int i = 0; i < S; ++i) {
    vals.push_back(cur);
    Mat step = random_complex(rng, n, n);
    cur = cur + step * (L * h / la::op_norm(step));
  }
  FilteredMatrixMap f(space, vals, vals.back());
  double Lm = f.lipschitz_level();
  CHECK(Lm <= L + 1e-9);

  for (double t : {1.0, 2.0, 4.0}) {
    PtD p = p_tD_from_block(A, t);
    Mat Pt = lift_spinor_op(p.P, S, n);
    Mat fhat = lift_multiplication(f);
    double comm = la::op_norm(Pt * fhat - fhat * Pt);
    INFO("t = " << t << " comm = " << comm);
    CHECK(comm <= 2560.0 * Lm / t);
  }
}

TEST_CASE("scalar bound constants") {
  auto [c1, c2] = scalar_bound_constants(1.0, 1.0, 1.0);
  CHECK(c1 == Catch::Approx(0.25));
  CHECK(c2 == Catch::Approx(256.0));
  auto [d1, d2] = scalar_bound_constants(2.0, 1.0, 2.0);
  CHECK(d1 == Catch::Approx(0.25));
  CHECK(d2 == Catch::Approx(1024.0));
  auto [e1, e2] = scalar_bound_constants(2.0, 2.0, 2.0);
  CHECK(e2 == Catch::Approx(4.0 * d2));
  CHECK_THROWS_AS(scalar_bound_constants(0.0, 1.0, 1.0), std::invalid_argument);
}
