#pragma once

// Smith normal form over the integers with unimodular transforms tracked.
// Sizes here are tiny (ranks <= 8), but entry growth is guarded anyway.

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace curvdecay::control {

struct IntMat {
  int rows = 0, cols = 0;
  std::vector<std::int64_t> a;  // row-major

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

  std::int64_t& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  std::int64_t operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static IntMat eye(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  IntMat operator*(const IntMat& o) const {
    if (cols != o.rows) throw std::invalid_argument("IntMat shape mismatch");
    IntMat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        std::int64_t v = (*this)(i, k);
        if (v == 0) continue;
        for (int j = 0; j < o.cols; ++j) r(i, j) = checked_add(r(i, j), checked_mul(v, o(k, j)));
      }
    return r;
  }

  std::vector<std::int64_t> operator*(const std::vector<std::int64_t>& x) const {
    if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("IntMat vec mismatch");
    std::vector<std::int64_t> r(rows, 0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r[i] = checked_add(r[i], checked_mul((*this)(i, j), x[j]));
    return r;
  }

  // All-column concatenation [this | o].
  IntMat hcat(const IntMat& o) const {
    if (o.rows != 0 && o.rows != rows) throw std::invalid_argument("hcat row mismatch");
    IntMat r(rows, cols + o.cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) r(i, j) = (*this)(i, j);
      for (int j = 0; j < o.cols; ++j) r(i, cols + j) = o(i, j);
    }
    return r;
  }

  static std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    __int128 p = static_cast<__int128>(x) * y;
    if (p > kLimit || p < -kLimit) throw std::overflow_error("integer matrix overflow");
    return static_cast<std::int64_t>(p);
  }
  static std::int64_t checked_add(std::int64_t x, std::int64_t y) {
    __int128 p = static_cast<__int128>(x) + y;
    if (p > kLimit || p < -kLimit) throw std::overflow_error("integer matrix overflow");
    return static_cast<std::int64_t>(p);
  }
  static constexpr std::int64_t kLimit = (std::int64_t{1} << 56);
};

struct Snf {
  IntMat U, D, V;  // U*A*V = D, U and V unimodular, D diagonal
  int rank = 0;
};

// Classic elimination with smallest-nonzero pivoting.
inline Snf smith_normal_form(IntMat A) {
  const int m = A.rows, n = A.cols;
  Snf s;
  s.U = IntMat::eye(m);
  s.V = IntMat::eye(n);

  auto row_op = [&](IntMat& M, IntMat& T, int dst, int src, std::int64_t q) {
    // row dst -= q * row src, mirrored into T
    for (int j = 0; j < M.cols; ++j)
      M(dst, j) = IntMat::checked_add(M(dst, j), IntMat::checked_mul(-q, M(src, j)));
    for (int j = 0; j < T.cols; ++j)
      T(dst, j) = IntMat::checked_add(T(dst, j), IntMat::checked_mul(-q, T(src, j)));
  };
  auto col_op = [&](IntMat& M, IntMat& T, int dst, int src, std::int64_t q) {
    for (int i = 0; i < M.rows; ++i)
      M(i, dst) = IntMat::checked_add(M(i, dst), IntMat::checked_mul(-q, M(i, src)));
    for (int i = 0; i < T.rows; ++i)
      T(i, dst) = IntMat::checked_add(T(i, dst), IntMat::checked_mul(-q, T(i, src)));
  };
  auto swap_rows = [&](IntMat& M, IntMat& T, int i1, int i2) {
    for (int j = 0; j < M.cols; ++j) std::swap(M(i1, j), M(i2, j));
    for (int j = 0; j < T.cols; ++j) std::swap(T(i1, j), T(i2, j));
  };
  auto swap_cols = [&](IntMat& M, IntMat& T, int j1, int j2) {
    for (int i = 0; i < M.rows; ++i) std::swap(M(i, j1), M(i, j2));
    for (int i = 0; i < T.rows; ++i) std::swap(T(i, j1), T(i, j2));
  };

  int t = 0;
  while (t < m && t < n) {
    // find smallest nonzero entry in the trailing block
    int pi = -1, pj = -1;
    std::int64_t best = 0;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j) {
        std::int64_t v = std::llabs(A(i, j));
        if (v != 0 && (pi < 0 || v < best)) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    if (pi != t) swap_rows(A, s.U, t, pi);
    if (pj != t) swap_cols(A, s.V, t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < m; ++i)
        if (A(i, t) != 0) {
          std::int64_t q = A(i, t) / A(t, t);
          row_op(A, s.U, i, t, q);
          if (A(i, t) != 0) {
            swap_rows(A, s.U, t, i);
            clean = false;
          }
        }
      for (int j = t + 1; j < n; ++j)
        if (A(t, j) != 0) {
          std::int64_t q = A(t, j) / A(t, t);
          col_op(A, s.V, j, t, q);
          if (A(t, j) != 0) {
            swap_cols(A, s.V, t, j);
            clean = false;
          }
        }
    }
    ++t;
  }

  // normalize signs (negate row i of both A and U) and the divisibility chain
  auto fix_sign = [&](int i) {
    if (A(i, i) >= 0) return;
    for (int j = 0; j < n; ++j) A(i, j) = -A(i, j);
    for (int j = 0; j < m; ++j) s.U(i, j) = -s.U(i, j);
  };
  for (int i = 0; i < std::min(m, n); ++i) fix_sign(i);
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i + 1 < std::min(m, n); ++i) {
      std::int64_t a = A(i, i), b = A(i + 1, i + 1);
      if (a != 0 && b != 0 && b % a != 0) {
        // standard 2x2 fixup: gcd/lcm via one more elimination round
        col_op(A, s.V, i, i + 1, -1);  // col i += col i+1
        // re-eliminate the 2x2 block
        while (A(i + 1, i) != 0 || A(i, i + 1) != 0) {
          if (A(i + 1, i) != 0) {
            std::int64_t q = A(i + 1, i) / A(i, i);
            row_op(A, s.U, i + 1, i, q);
            if (A(i + 1, i) != 0) swap_rows(A, s.U, i, i + 1);
          }
          if (A(i, i + 1) != 0) {
            std::int64_t q = A(i, i + 1) / A(i, i);
            col_op(A, s.V, i + 1, i, q);
            if (A(i, i + 1) != 0) swap_cols(A, s.V, i, i + 1);
          }
        }
        fix_sign(i);
        fix_sign(i + 1);
        changed = true;
      }
    }
  }

  s.D = A;
  for (int i = 0; i < std::min(m, n); ++i)
    if (A(i, i) != 0) ++s.rank;
  return s;
}

// Does x lie in the column span of A over the integers?
inline bool in_image(const Snf& s, const std::vector<std::int64_t>& x) {
  auto ux = s.U * x;
  int mn = std::min(s.D.rows, s.D.cols);
  for (int i = 0; i < s.D.rows; ++i) {
    std::int64_t d = i < mn ? s.D(i, i) : 0;
    if (d == 0) {
      if (ux[i] != 0) return false;
    } else if (ux[i] % d != 0) {
      return false;
    }
  }
  return true;
}

// Basis of the integer kernel of A: columns of V matched to zero diagonal
// entries of D (and to columns beyond the diagonal block).
inline std::vector<std::vector<std::int64_t>> kernel_basis(const Snf& s) {
  std::vector<std::vector<std::int64_t>> basis;
  int mn = std::min(s.D.rows, s.D.cols);
  for (int j = 0; j < s.D.cols; ++j) {
    bool zero = j >= mn || s.D(j, j) == 0;
    if (!zero) continue;
    std::vector<std::int64_t> v(s.V.rows);
    for (int i = 0; i < s.V.rows; ++i) v[i] = s.V(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Do the columns of A generate all of Z^rows?
inline bool generates_lattice(const IntMat& A) {
  Snf s = smith_normal_form(A);
  if (s.rank < A.rows) return false;
  for (int i = 0; i < A.rows; ++i)
    if (s.D(i, i) != 1 && s.D(i, i) != -1) return false;
  return true;
}

}  // namespace curvdecay::control
