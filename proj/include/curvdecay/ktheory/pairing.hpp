#pragma once

// The index pairing pipeline of the difference construction on lattice Dirac
// models.
//
// Sizes are kept tractable by two exact reductions, both plain similarity
// algebra of the construction d(alpha,beta) = Z^{-1} diag(alpha,1-beta,0,0) Z:
//   * spec(d_{t,p,q}) = spec(P_t p) u spec(1 - P_t q) u {0,1}-sets, so the
//     eigenvalue count of Theta(d_{t,p,q}) at the 0.5 threshold reduces to
//     counting on P_t p and P_t q;
//   * the nonzero spectrum of P_t p equals that of the compression of
//     p P_t p to range(p), which for pointwise rank-r projections is a dense
//     matrix of dimension 2*sum_x rank p(x) only.
// The literal 32n-dimensional construction stays available (and is tested
// against the reduced route) through the LinOp applies below and through
// difference_idempotent for small instances.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "curvdecay/ktheory/difference.hpp"
#include "curvdecay/ktheory/lattice.hpp"
#include "curvdecay/ktheory/linalg.hpp"
#include "curvdecay/ktheory/ptd.hpp"
#include "curvdecay/ktheory/spaces.hpp"

namespace curvdecay::ktheory {

using la::Mat;
using la::Vec;
using la::cd;

// ---------------------------------------------------------------------------
// Linear operators by apply/adjoint-apply, for norms of the 32n-sized
// difference objects without forming them.

struct LinOp {
  int dim = 0;
  std::function<Vec(const Vec&)> apply;
  std::function<Vec(const Vec&)> applyH;

  static LinOp dense(const Mat& A) {
    auto Ap = std::make_shared<Mat>(A);
    return LinOp{static_cast<int>(A.rows()), [Ap](const Vec& x) { return Vec(*Ap * x); },
                 [Ap](const Vec& x) { return Vec(Ap->adjoint() * x); }};
  }
  static LinOp identity(int n) {
    return LinOp{n, [](const Vec& x) { return x; }, [](const Vec& x) { return x; }};
  }
  // block-diagonal with uniform block size
  static LinOp block_diag(std::vector<Mat> blocks) {
    auto bp = std::make_shared<std::vector<Mat>>(std::move(blocks));
    int bs = static_cast<int>((*bp)[0].rows());
    int n = bs * static_cast<int>(bp->size());
    return LinOp{n,
                 [bp, bs](const Vec& x) {
                   Vec y(x.size());
                   for (std::size_t i = 0; i < bp->size(); ++i)
                     y.segment(i * bs, bs) = (*bp)[i] * x.segment(i * bs, bs);
                   return y;
                 },
                 [bp, bs](const Vec& x) {
                   Vec y(x.size());
                   for (std::size_t i = 0; i < bp->size(); ++i)
                     y.segment(i * bs, bs) = (*bp)[i].adjoint() * x.segment(i * bs, bs);
                   return y;
                 }};
  }

  LinOp operator*(const LinOp& o) const {
    auto a = *this, b = o;
    return LinOp{dim, [a, b](const Vec& x) { return a.apply(b.apply(x)); },
                 [a, b](const Vec& x) { return b.applyH(a.applyH(x)); }};
  }
  LinOp operator-(const LinOp& o) const {
    auto a = *this, b = o;
    return LinOp{dim, [a, b](const Vec& x) { return Vec(a.apply(x) - b.apply(x)); },
                 [a, b](const Vec& x) { return Vec(a.applyH(x) - b.applyH(x)); }};
  }
};

// 4x4 block operator over a base dimension; entries are small LinOps or null
// (zero block). Realizes Z(beta), Z(beta)^{-1} and diag blocks by lambdas.
struct Block4 {
  int base = 0;
  std::array<std::array<std::optional<LinOp>, 4>, 4> blk;

  LinOp as_linop() const {
    auto self = *this;
    int n = 4 * base;
    return LinOp{
        n,
        [self](const Vec& x) {
          Vec y = Vec::Zero(4 * self.base);
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
              if (self.blk[i][j])
                y.segment(i * self.base, self.base) +=
                    self.blk[i][j]->apply(x.segment(j * self.base, self.base));
          return y;
        },
        [self](const Vec& x) {
          Vec y = Vec::Zero(4 * self.base);
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
              if (self.blk[i][j])
                y.segment(j * self.base, self.base) +=
                    self.blk[i][j]->applyH(x.segment(i * self.base, self.base));
          return y;
        }};
  }
};

inline LinOp z_op(const LinOp& b, bool inverse) {
  int m = b.dim;
  LinOp one = LinOp::identity(m);
  LinOp ib = one - b;
  Block4 z;
  z.base = m;
  if (!inverse) {
    z.blk[0][0] = b;    z.blk[0][2] = ib;
    z.blk[1][0] = ib;   z.blk[1][3] = b;
    z.blk[2][2] = b;    z.blk[2][3] = ib;
    z.blk[3][1] = one;
  } else {
    z.blk[0][0] = b;    z.blk[0][1] = ib;
    z.blk[1][3] = one;
    z.blk[2][0] = ib;   z.blk[2][2] = b;
    z.blk[3][1] = b;    z.blk[3][2] = ib;
  }
  return z.as_linop();
}

// d(alpha, beta) as an operator: Z(beta)^{-1} diag(alpha, 1-beta, 0, 0) Z(beta).
inline LinOp difference_op(const LinOp& alpha, const LinOp& beta) {
  int m = alpha.dim;
  Block4 mid;
  mid.base = m;
  mid.blk[0][0] = alpha;
  mid.blk[1][1] = LinOp::identity(m) - beta;
  return z_op(beta, true) * mid.as_linop() * z_op(beta, false);
}

inline LinOp e13_op(int m) {
  Block4 e;
  e.base = m;
  e.blk[0][0] = LinOp::identity(m);
  return e.as_linop();
}

inline double op_norm_power(const LinOp& A, int iters = 120, double tol = 1e-7) {
  Vec v = Vec::Ones(A.dim);
  for (int i = 0; i < A.dim; ++i)
    v(i) += cd(0.37 * std::cos(1.3 * i), 0.21 * std::sin(2.9 * i));
  v.normalize();
  double prev = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = A.apply(v);
    v = A.applyH(w);
    double s2 = v.norm();
    if (s2 == 0) return 0.0;
    v /= s2;
    double s = std::sqrt(s2);
    if (it > 5 && std::abs(s - prev) <= tol * std::max(1.0, s)) return s;
    prev = s;
  }
  return prev;
}

// ---------------------------------------------------------------------------
// Lattice-side assembly. Global layout: index = spinor * (S*n) + site * n + i.

// P (2x2 chirality blocks of H x H) tensored with I_n in the matrix slot.
inline Mat lift_spinor_op(const Mat& P, int H, int n) {
  Mat out = Mat::Zero(2 * H * n, 2 * H * n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < H; ++x)
        for (int y = 0; y < H; ++y) {
          cd v = P(a * H + x, b * H + y);
          if (v == cd(0, 0)) continue;
          for (int i = 0; i < n; ++i) out(a * H * n + x * n + i, b * H * n + y * n + i) = v;
        }
  return out;
}

// multiplication operator of a matrix map on both chirality halves; each
// half holds `copies` slots per sample point (the per-site spinor components)
inline Mat lift_multiplication(const FilteredMatrixMap& p, int copies) {
  int H = p.points() * copies, n = p.block_dim();
  Mat out = Mat::Zero(2 * H * n, 2 * H * n);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < H; ++x)
      out.block(a * H * n + x * n, a * H * n + x * n, n, n) = p.at(x / copies);
  return out;
}

// e_{11} (chirality matrix unit) tensor the multiplication operator
inline Mat lift_e11_multiplication(const FilteredMatrixMap& p, int copies) {
  int H = p.points() * copies, n = p.block_dim();
  Mat out = Mat::Zero(2 * H * n, 2 * H * n);
  for (int x = 0; x < H; ++x) out.block(x * n, x * n, n, n) = p.at(x / copies);
  return out;
}

struct RangeBasis {
  std::vector<Mat> site_basis;  // per sample point, n x r_x orthonormal range basis
  int total_rank = 0;           // sum of r_x, before spinor copies

  static RangeBasis of(const FilteredMatrixMap& p, double defect_tol = 1e-9) {
    RangeBasis rb;
    int S = p.points();
    rb.site_basis.reserve(S);
    for (int x = 0; x < S; ++x) {
      const Mat& px = p.at(x);
      if (la::op_norm(px - px.adjoint()) > 1e-9 || la::idempotent_defect(px) > defect_tol)
        throw std::invalid_argument("pairing: p is not a pointwise projection");
      la::HermEig eg = la::hermitian_eig(px);
      int r = 0;
      for (int i = 0; i < eg.evals.size(); ++i)
        if (eg.evals(i) > 0.5) ++r;
      Mat basis(px.rows(), r);
      int c = 0;
      for (int i = 0; i < eg.evals.size(); ++i)
        if (eg.evals(i) > 0.5) basis.col(c++) = eg.evecs.col(i);
      rb.site_basis.push_back(std::move(basis));
      rb.total_rank += r;
    }
    return rb;
  }
};

// Compression of P_t p to range(p): entries P_t[(a,x),(b,y)] <u_x, u_y>,
// with x, y running over half slots (site, spinor copy).
inline Mat compress_ptp(const PtD& pt, const RangeBasis& rb, int copies) {
  int H = pt.S;
  if (static_cast<int>(rb.site_basis.size()) * copies != H)
    throw std::invalid_argument("compress_ptp: size mismatch");
  std::vector<int> offset(H + 1, 0);
  for (int x = 0; x < H; ++x)
    offset[x + 1] = offset[x] + static_cast<int>(rb.site_basis[x / copies].cols());
  int R = offset[H];
  Mat out(2 * R, 2 * R);
  for (int x = 0; x < H; ++x)
    for (int y = 0; y < H; ++y) {
      Mat gram = rb.site_basis[x / copies].adjoint() * rb.site_basis[y / copies];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          out.block(a * R + offset[x], b * R + offset[y], gram.rows(), gram.cols()) =
              pt.P(a * H + x, b * H + y) * gram;
    }
  return out;
}

// ---------------------------------------------------------------------------

class NotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThetaRank {
  int count = 0;
  double gap = 0.0;
};

// rank of Theta(P_t p) by eigenvalue counting at the 0.5 threshold on the
// compressed core; needs gap >= 0.2 around the threshold. Counting only needs
// eigenvalues to a fraction of that gap, so large cores use single precision.
inline ThetaRank rank_theta(const PtD& pt, const FilteredMatrixMap& p, int copies,
                            double required_gap = 0.2) {
  RangeBasis rb = RangeBasis::of(p);
  Mat core = compress_ptp(pt, rb, copies);
  la::RankCount rc = core.rows() > 3000
                         ? la::count_above_half(la::eigenvalues_single(core))
                         : la::count_above_half(la::eigenvalues(core));
  if (rc.gap < required_gap)
    throw NotConverged("rank_theta: spectral gap " + std::to_string(rc.gap) +
                       " below 0.2; raise t or refine the lattice");
  return {rc.count, rc.gap};
}

inline bool is_constant_map(const FilteredMatrixMap& p, double tol = 1e-13) {
  for (int x = 0; x < p.points(); ++x)
    if ((p.at(x) - p.plus_part()).norm() > tol) return false;
  return true;
}

inline int total_rank(const FilteredMatrixMap& p) {
  int r = 0;
  for (int x = 0; x < p.points(); ++x) {
    la::RVec w = la::hermitian_eigenvalues(p.at(x));
    for (int i = 0; i < w.size(); ++i)
      if (w(i) > 0.5) ++r;
  }
  return r;
}

struct IndexPairing {
  int pairing = 0;
  double gap = 0.0;
  double defect_p = 0.0;  // || (P_t p)^2 - P_t p ||
};

// <[D], [p]-[q]> = rank Theta(d_{t,p,q}) - rank e, evaluated through the
// similarity reduction described at the top of this header. contour_nodes
// feeds theta() in the literal route; the reduced route is quadrature-free.
inline IndexPairing index_pairing(const LatticeDirac& D, const FilteredMatrixMap& p,
                                  const FilteredMatrixMap& q, double t,
                                  int contour_nodes = 64) {
  (void)contour_nodes;
  if (t < 1.0) throw std::invalid_argument("index_pairing: t >= 1 required");
  if (p.block_dim() != q.block_dim() || p.points() != q.points())
    throw std::invalid_argument("index_pairing: p, q shape mismatch");
  const int copies = D.spinor_copies();
  PtD pt = p_tD_from_block(D.offdiag(), t);

  IndexPairing out;
  auto side = [&](const FilteredMatrixMap& f) -> std::pair<int, double> {
    if (is_constant_map(f)) {
      // P_t q = P_t (x) q0 is an exact idempotent of rank H * rank(q0)
      la::RVec w = la::hermitian_eigenvalues(f.plus_part());
      int r0 = 0;
      for (int i = 0; i < w.size(); ++i)
        if (w(i) > 0.5) ++r0;
      return {pt.S * r0, 0.5};
    }
    ThetaRank tr = rank_theta(pt, f, copies);
    return {tr.count, tr.gap};
  };
  auto [cp, gp] = side(p);
  auto [cq, gq] = side(q);
  out.gap = std::min(gp, gq);
  out.pairing = cp - cq - copies * (total_rank(p) - total_rank(q));
  return out;
}

// Literal route for small instances: forms P_t p, P_t q, the difference
// idempotents a, b, d and Theta(d) with the contour rule, then takes the
// trace rank. Cross-checked against the reduced route in tests.
inline int index_pairing_literal(const LatticeDirac& D, const FilteredMatrixMap& p,
                                 const FilteredMatrixMap& q, double t,
                                 int contour_nodes = 64) {
  const int copies = D.spinor_copies();
  PtD pt = p_tD_from_block(D.offdiag(), t);
  int H = pt.S, n = p.block_dim();
  Mat Pt = lift_spinor_op(pt.P, H, n);
  Mat ph = lift_multiplication(p, copies), qh = lift_multiplication(q, copies);
  Mat a = difference_idempotent(Pt * ph, Pt * qh, 0.26);  // almost idempotents allowed
  Mat b = difference_idempotent(lift_e11_multiplication(p, copies),
                                lift_e11_multiplication(q, copies));
  Mat d = difference_idempotent(a, b, 0.26);
  Mat theta = la::theta_contour(d, contour_nodes);
  if (la::idempotent_defect(theta) > 1e-8)
    throw NotConverged("index_pairing_literal: theta output not idempotent");
  double tr = theta.trace().real();
  int rank_theta_d = static_cast<int>(std::lround(tr));
  if (std::abs(tr - rank_theta_d) > 0.1)
    throw NotConverged("index_pairing_literal: non-integral theta trace");
  int rank_e = 8 * H * n;  // e = diag(1,0,0,0) over blocks of size 8Hn
  return rank_theta_d - rank_e;
}

struct PairingRecord {
  double t = 0;
  double norm_d = 0;        // lambda_1 sample
  double defect_d = 0;      // ||d^2 - d||
  double dist_to_e = 0;     // ||d - e||
  double lipschitz_L = 0;   // measured level of p (q assumed <= p)
  int pairing = 0;
  double gap = 0;
};

// Builds the full difference construction as operators and measures the
// Lemma-3.4 quantities. p, q pointwise projections; q may be constant.
inline PairingRecord pairing_pipeline(const LatticeDirac& D, const FilteredMatrixMap& p,
                                      const FilteredMatrixMap& q, double t) {
  for (const auto* f : {&p, &q})
    if (f->max_class_defect([](const Mat& m) { return la::idempotent_defect(m); }) > 1e-9)
      throw std::invalid_argument("pairing_pipeline: inputs must be projections to 1e-9");

  const int copies = D.spinor_copies();
  PtD pt = p_tD_from_block(D.offdiag(), t);
  int H = pt.S, n = p.block_dim();
  Mat Pt = lift_spinor_op(pt.P, H, n);
  Mat w = Pt * lift_multiplication(p, copies);
  Mat v = Pt * lift_multiplication(q, copies);

  // e11 (x) multiplication operators are slot-diagonal; applying them as
  // block-diagonal LinOps keeps the b-layer of the construction cheap
  auto e11_mult = [&](const FilteredMatrixMap& f) {
    std::vector<Mat> blocks(2 * H);
    for (int x = 0; x < H; ++x) blocks[x] = f.at(x / copies);
    for (int x = H; x < 2 * H; ++x) blocks[x] = Mat::Zero(n, n);
    return LinOp::block_diag(std::move(blocks));
  };
  LinOp a = difference_op(LinOp::dense(w), LinOp::dense(v));
  LinOp b = difference_op(e11_mult(p), e11_mult(q));
  LinOp d = difference_op(a, b);
  LinOp e = e13_op(b.dim);

  PairingRecord rec;
  rec.t = t;
  rec.norm_d = op_norm_power(d, 80, 1e-5);
  rec.defect_d = op_norm_power(d * d - d, 80, 1e-5);
  rec.dist_to_e = op_norm_power(d - e, 80, 1e-5);
  rec.lipschitz_L = p.lipschitz_level();
  try {
    IndexPairing ip = index_pairing(D, p, q, t);
    rec.pairing = ip.pairing;
    rec.gap = ip.gap;
  } catch (const NotConverged&) {
    rec.gap = 0.0;
  }
  return rec;
}

// ---------------------------------------------------------------------------

// Rescaling along the Euclidean contraction toward x0: p_s(x) = p(x0 + (x-x0)/s)
// by nearest-sample evaluation. Shrinks the Lipschitz level by ~1/s and
// scales supports by s.
inline FilteredMatrixMap cat0_rescale(const FilteredMatrixMap& p,
                                      const Eigen::VectorXd& x0, double s) {
  if (s < 1.0) throw std::invalid_argument("cat0_rescale: s >= 1 required");
  const auto& space = *p.space();
  if (!space.has_points())
    throw std::invalid_argument("cat0_rescale: needs an embedded Euclidean sample");
  std::vector<Mat> vals;
  vals.reserve(space.size());
  for (int i = 0; i < space.size(); ++i) {
    Eigen::VectorXd target = x0 + (space.point(i) - x0) / s;
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < space.size(); ++j) {
      double dj = (space.point(j) - target).norm();
      if (dj < bd) {
        bd = dj;
        best = j;
      }
    }
    vals.push_back(p.at(best));
  }
  return FilteredMatrixMap(p.space(), std::move(vals), p.plus_part());
}

}  // namespace curvdecay::ktheory
