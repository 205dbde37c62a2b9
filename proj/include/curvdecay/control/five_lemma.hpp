#pragma once

// Five-lemma constant chase for uniformly controlled inductive systems.
//
// Input: a five-term asymptotically exact sequence
//   {M^1} --xi1--> {M^2} --xi2--> {M^3} --xi3--> {M^4} --xi4--> {M^5}
// with map controls F_j, the control Z_{2,1} of the equivalence
// xi2 xi1 ~ 0, the exactness controls E_{2,3} (at M^3) and E_{3,4} (at M^4),
// and uniform control pairs (L_j, U_j) for j in {1,2,4,5}. Output: a uniform
// control pair for {M^3}.

#include <stdexcept>
#include <string>

#include "curvdecay/control/decay.hpp"
#include "curvdecay/control/expr.hpp"

namespace curvdecay::control {

struct FiveLemmaControls {
  ControlFunction F1, F2, F3, F4;  // controls of xi^1..xi^4
  ControlFunction Z21;             // xi2 xi1 ~ 0
  ControlFunction E23;             // exactness at M^3
  ControlFunction E34;             // exactness at M^4
};

struct FiveLemmaPairs {
  UniformControlPair M1, M2, M4, M5;
};

class ThresholdOverflow : public std::runtime_error {
 public:
  explicit ThresholdOverflow(const std::string& step)
      : std::runtime_error("five-lemma threshold unreachable within Y_MAX at step " + step) {}
};

// inf{ t : F(t) >= c } + 1, by exponential search plus bisection on the
// monotone indicator boundary.
inline double threshold_inverse(const ControlFunction& F, double c,
                                const std::string& step) {
  if (F(0.0) >= c) return 1.0;
  double cap = F.y_max();
  double fcap = F(cap);
  if (!(std::isinf(fcap) || fcap >= c)) throw ThresholdOverflow(step);
  double lo = 0.0, hi = 1.0;
  auto ge = [&](double t) {
    double v = F(t);
    return std::isinf(v) || v >= c;
  };
  while (hi < cap && !ge(hi)) {
    lo = hi;
    hi = std::min(2.0 * hi, cap);
  }
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (ge(mid)) hi = mid; else lo = mid;
  }
  return hi + 1.0;
}

// Proof chase, surjectivity side:
//   L_{4+} = inf{t : F4(t) >= U5(F4(L4))} + 1,
//   L_3    = max{ F2(L2), E34(L_{4+}) }.
// Kernel side, as a function of the input level L:
//   L_+    = inf{t : F3(t) >= U4(F3(L))} + 1
//   L_{++} = inf{t : t >= L1, F1(t) >= E23(L_+)} + 1
//   T      = inf{t : F1(t) >= U2(F1(L_{++}))} + 1
//   F(L)   = Z21(T).
// The extra step T applies the kernel control of M^2 before invoking
// Z21; it dominates the shorter chain Z21(L_{++}) and stays valid when the
// lifted element and the exactness witness only agree eventually.
inline UniformControlPair five_lemma_pair(const FiveLemmaControls& c,
                                          const FiveLemmaPairs& p) {
  for (const ControlFunction* f :
       {&c.F1, &c.F2, &c.F3, &c.F4, &c.Z21, &c.E23, &c.E34, &p.M1.F, &p.M2.F, &p.M4.F,
        &p.M5.F})
    if (!non_decreasing_on_grid(*f, 0.0, 1e4))
      throw std::invalid_argument("five_lemma_pair requires non-decreasing controls");

  double L4p = threshold_inverse(c.F4, p.M5.F(c.F4(p.M4.L0)), "L4+");
  double L3 = std::max(c.F2(p.M2.L0), c.E34(L4p));
  if (std::isinf(L3)) throw ThresholdOverflow("L3");

  using CF = ControlFunction;
  CF one = CF::constant(1.0);
  // L_+(L): geninv(F3) dominates the inf-threshold on monotone controls; the
  // numeric threshold_inverse above and this expression agree up to the +1
  // slack away from plateaus of F3.
  CF Lp = CF::sum({CF::geninv(c.F3), one});
  Lp = CF::compose(Lp, CF::compose(p.M4.F, c.F3));
  CF A = CF::compose(c.E23, Lp);
  CF Lpp = CF::sum({CF::max_of({CF::constant(p.M1.L0), CF::compose(CF::geninv(c.F1), A)}), one});
  CF T = CF::sum({CF::compose(CF::geninv(c.F1), CF::compose(p.M2.F, CF::compose(c.F1, Lpp))), one});
  CF Fout = CF::compose(c.Z21, T);

  // fail loudly now if the chase already overflows at the base level
  if (std::isinf(Fout(L3))) throw ThresholdOverflow("F(L3)");
  return UniformControlPair{L3, Fout};
}

}  // namespace curvdecay::control
