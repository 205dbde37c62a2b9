#pragma once

// The X1/X2 decomposition of a complex by minimal barycentric coordinate,
// the level sets S_alpha, and the collar homotopy that deforms S_{1/3}
// toward S_{1/2} inside each top simplex.

#include "curvdecay/simplicial/complex.hpp"

namespace curvdecay::simplicial {

enum class RegionKind { X1, X2, SAlpha };

struct RegionSpec {
  RegionKind kind = RegionKind::X1;
  int m = 1;           // ambient dimension
  double alpha = 1.0;  // for S_alpha
};

// minimal coefficient of x inside a given top simplex, missing coordinates
// count as zero
inline double min_coeff_in(const Face& top, const SimplicialPoint& x) {
  double m = 1.0;
  for (int v : top) m = std::min(m, x.weight(v));
  return m;
}

// membership is "some containing top-dimensional simplex satisfies the
// predicate"
inline bool region_membership(const SimplicialComplex& X, const SimplicialPoint& x,
                              const RegionSpec& spec, double tol = 1e-9) {
  for (const auto& top : X.maximal_simplices()) {
    if (static_cast<int>(top.size()) != spec.m + 1) continue;
    if (!std::includes(top.begin(), top.end(), x.support().begin(), x.support().end()))
      continue;
    double mc = min_coeff_in(top, x);
    switch (spec.kind) {
      case RegionKind::X1:
        if (mc <= 1.0 / (3.0 * (spec.m + 1)) + tol) return true;
        break;
      case RegionKind::X2:
        if (mc >= 1.0 / (4.0 * (spec.m + 1)) - tol) return true;
        break;
      case RegionKind::SAlpha:
        if (std::abs(mc - spec.alpha / (spec.m + 1)) <= tol) return true;
        break;
    }
  }
  return false;
}

// the top simplex carrying x on S_{1/3}, or -1
inline int carrying_top_on_s13(const SimplicialComplex& X, const SimplicialPoint& x, int m,
                               double tol = 1e-9) {
  const auto& tops = X.maximal_simplices();
  for (std::size_t i = 0; i < tops.size(); ++i) {
    if (static_cast<int>(tops[i].size()) != m + 1) continue;
    if (!std::includes(tops[i].begin(), tops[i].end(), x.support().begin(),
                       x.support().end()))
      continue;
    if (std::abs(min_coeff_in(tops[i], x) - 1.0 / (3.0 * (m + 1))) <= tol)
      return static_cast<int>(i);
  }
  return -1;
}

// H(x, lambda) = barycenter + (1 - lambda/4)(x - barycenter) on the carrying
// top simplex; H(.,0) = id and H(.,1) maps S_{1/3} onto S_{1/2}.
inline SimplicialPoint collar_homotopy(const SimplicialComplex& X, const SimplicialPoint& x,
                                       double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("collar_homotopy: lambda in [0,1]");
  int m = X.dimension();
  int ti = carrying_top_on_s13(X, x, m);
  if (ti < 0) throw std::domain_error("collar_homotopy: point not on S_{1/3}");
  const Face& top = X.maximal_simplices()[ti];
  double bary = 1.0 / (m + 1);
  double scale = 1.0 - lambda / 4.0;
  std::map<int, double> w;
  for (int v : top) w[v] = bary + scale * (x.weight(v) - bary);
  return SimplicialPoint(std::move(w));
}

}  // namespace curvdecay::simplicial
