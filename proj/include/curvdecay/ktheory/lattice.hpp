#pragma once

// Wilson-regularized lattice Dirac models, kept odd with respect to a
// chiral grading:
//   D = [[0, C], [C, 0]],   C = sigma_1 Dx + sigma_2 Dy
//                               + sigma_3 (m0 + (r_w/2h)(4 - shifts)),
// with central differences Dx, Dy. C is the standard two-component Wilson
// block (the sigma_3 term gaps the doublers); folding it into a scalar
// off-diagonal block instead would put the Wilson term on the same axis as
// one derivative and leave an ungapped second Dirac point. wilson_mass is
// the mass m0; the model is gapped for m0 in (-2 r_w/h, 0) \ {criticals}.

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "curvdecay/ktheory/linalg.hpp"
#include "curvdecay/ktheory/spaces.hpp"

namespace curvdecay::ktheory {

using la::Mat;
using la::cd;

class LatticeDirac {
 public:
  LatticeDirac(int N, double h, double wilson_mass = -1.0, double wilson_coupling = 1.0)
      : N_(N), h_(h), m0_(wilson_mass), rw_(wilson_coupling) {
    if (N < 1 || h <= 0) throw std::invalid_argument("LatticeDirac: bad N or h");
    build();
  }

  int N() const { return N_; }
  double h() const { return h_; }
  double wilson_mass() const { return m0_; }
  double wilson_coupling() const { return rw_; }
  int side() const { return 2 * N_ + 1; }
  int sites() const { return side() * side(); }
  int half_dim() const { return 2 * sites(); }  // sites x 2-spinor per chirality
  int dim() const { return 2 * half_dim(); }
  int spinor_copies() const { return 2; }       // spinor components per site and chirality

  // the chiral block C (Hermitian); D = [[0, C],[C, 0]]
  const Mat& offdiag() const { return C_; }

  Mat full() const {
    int H = half_dim();
    Mat D = Mat::Zero(2 * H, 2 * H);
    D.topRightCorner(H, H) = C_;
    D.bottomLeftCorner(H, H) = C_;
    return D;
  }

  int site(int x, int y) const { return (y + N_) * side() + (x + N_); }

  SpacePtr metric_space() const {
    if (!space_) space_ = std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::grid2d(N_, h_));
    return space_;
  }

 private:
  void build() {
    const int S = sites();
    C_ = Mat::Zero(2 * S, 2 * S);
    const double c1 = 1.0 / (2.0 * h_);
    const double cw = rw_ / (2.0 * h_);
    auto add = [&](int s1, int sp1, int s2, int sp2, cd v) {
      C_(2 * s1 + sp1, 2 * s2 + sp2) += v;
    };
    for (int y = -N_; y <= N_; ++y)
      for (int x = -N_; x <= N_; ++x) {
        int s = site(x, y);
        // sigma_3 (m0 + 4 cw) on site
        add(s, 0, s, 0, cd(m0_ + 4.0 * cw, 0));
        add(s, 1, s, 1, cd(-(m0_ + 4.0 * cw), 0));
        if (x + 1 <= N_) {
          int s2 = site(x + 1, y);
          // -i c1 sigma_1 - cw sigma_3 forward, Hermitian conjugate backward
          add(s, 0, s2, 1, cd(0, -c1));
          add(s, 1, s2, 0, cd(0, -c1));
          add(s, 0, s2, 0, cd(-cw, 0));
          add(s, 1, s2, 1, cd(cw, 0));
          add(s2, 1, s, 0, cd(0, c1));
          add(s2, 0, s, 1, cd(0, c1));
          add(s2, 0, s, 0, cd(-cw, 0));
          add(s2, 1, s, 1, cd(cw, 0));
        }
        if (y + 1 <= N_) {
          int s2 = site(x, y + 1);
          // -i c1 sigma_2 - cw sigma_3 forward
          add(s, 0, s2, 1, cd(-c1, 0));
          add(s, 1, s2, 0, cd(c1, 0));
          add(s, 0, s2, 0, cd(-cw, 0));
          add(s, 1, s2, 1, cd(cw, 0));
          add(s2, 0, s, 1, cd(-c1, 0));
          add(s2, 1, s, 0, cd(c1, 0));
          add(s2, 0, s, 0, cd(-cw, 0));
          add(s2, 1, s, 1, cd(cw, 0));
        }
      }
  }

  int N_;
  double h_;
  double m0_;
  double rw_;
  Mat C_;
  mutable SpacePtr space_;
};

// 1D analogue on a line of n sites (scalar chiral block), for the commutator
// bound tests.
inline Mat line_dirac_offdiag(int n, double h, double rw = 1.0) {
  Mat A = Mat::Zero(n, n);
  const double c1 = 1.0 / (2.0 * h), cw = rw / (2.0 * h);
  for (int i = 0; i < n; ++i) {
    A(i, i) += cd(2.0 * cw, 0.0);
    if (i + 1 < n) {
      A(i, i + 1) += cd(c1, 0.0) - cd(cw, 0.0);
      A(i + 1, i) += cd(-c1, 0.0) - cd(cw, 0.0);
    }
  }
  return A;
}

// Rank-one Bott-type projection family on R^2: p(x) = (1 + n(x).sigma)/2 with
// n winding once over the sphere inside radius r0 and pinned to the north
// pole (so p = diag(1,0)) outside. orientation=-1 reflects the plane.
struct BottProjection {
  double r0 = 2.0;
  int orientation = +1;

  Mat operator()(const Eigen::VectorXd& pt) const {
    double x = pt(0), y = orientation * pt(1);
    double r = std::hypot(x, y);
    double alpha = M_PI * (1.0 - std::min(r / r0, 1.0));
    double cth = r > 1e-14 ? x / r : 1.0, sth = r > 1e-14 ? y / r : 0.0;
    double nx = std::sin(alpha) * cth, ny = std::sin(alpha) * sth, nz = std::cos(alpha);
    Mat p(2, 2);
    p << cd(0.5 * (1 + nz), 0), cd(0.5 * nx, -0.5 * ny),
         cd(0.5 * nx, 0.5 * ny), cd(0.5 * (1 - nz), 0);
    return p;
  }

  Mat at_infinity() const {
    Mat q(2, 2);
    q << cd(1, 0), cd(0, 0), cd(0, 0), cd(0, 0);
    return q;
  }

  FilteredMatrixMap sample(const SpacePtr& space) const {
    return FilteredMatrixMap::from_function(
        space, [this](const Eigen::VectorXd& p) { return (*this)(p); }, at_infinity());
  }
};

}  // namespace curvdecay::ktheory
