#pragma once

// The decay pipeline: F_k recursion, the decay functions G and F, and the
// explicit exactness constants of the controlled long exact sequence.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvdecay/control/expr.hpp"

namespace curvdecay::control {

struct PairingConstants {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;
  double lambda4 = 1.0;
  double C1 = 0.25;   // lambda4 / (4 lambda2)
  double C2 = 256.0;  // 256 lambda2^2 lambda3^2
  double Lm = 1.0;

  static PairingConstants from_lambdas(double l1, double l2, double l3, double l4,
                                       double lm) {
    if (l1 <= 0 || l2 <= 0 || l3 <= 0 || l4 <= 0 || lm <= 0)
      throw std::invalid_argument("pairing constants must be positive");
    PairingConstants pc;
    pc.lambda1 = l1;
    pc.lambda2 = l2;
    pc.lambda3 = l3;
    pc.lambda4 = l4;
    pc.C1 = l4 / (4.0 * l2);
    pc.C2 = 256.0 * l2 * l2 * l3 * l3;
    pc.Lm = lm;
    return pc;
  }

  // Defaults measured on the Wilson lattice family by the pairing experiment
  // (tools: `curvdecay pairing`); see test_pairing.cpp for the measurement.
  static PairingConstants measured_defaults() {
    return from_lambdas(18.0, 260.0, 4.0, 5.0, 64.0);
  }
};

struct UniformControlPair {
  double L0 = 0.0;
  ControlFunction F;
};

// F_1(r) = R(D(r)+r); F_k(r) = R(F_{k-1}(r) + D(r) + 2r). The recursion's
// left-hand side is read as a function of r throughout.
inline std::vector<ControlFunction> fk_sequence(const ControlFunction& R,
                                                const ControlFunction& D,
                                                int m) {
  if (m <= 0) throw std::invalid_argument("fk_sequence requires m >= 1");
  auto check = [](const ControlFunction& f, const char* name) {
    if (!non_decreasing_on_grid(f, 0.0, 1e4))
      throw std::invalid_argument(std::string(name) + " must be non-decreasing");
    for (double x : {0.5, 1.0, 7.0, 123.0}) {
      double v = f(x);
      if (!std::isinf(v) && v < x - 1e-9)
        throw std::invalid_argument(std::string(name) + " must satisfy f(x) >= x");
    }
  };
  check(R, "R");
  check(D, "D");

  std::vector<ControlFunction> fk;
  fk.reserve(m);
  ControlFunction id = ControlFunction::identity();
  fk.push_back(ControlFunction::compose(R, ControlFunction::sum({D, id})));
  for (int k = 2; k <= m; ++k) {
    ControlFunction arg = ControlFunction::sum({fk.back(), D, ControlFunction::linear(2.0, 0.0)});
    fk.push_back(ControlFunction::compose(R, arg));
  }
  return fk;
}

// G(r) = 2 F_m(s) + 2 D(s) + C1 (m+1) sqrt(r) / (Lm sqrt(C2 Lm)), where
// s = sqrt(r) / ((m+1) sqrt(C2 Lm)).
inline ControlFunction decay_G(const ControlFunction& R, const ControlFunction& D,
                               int m, const PairingConstants& pc) {
  if (std::abs(pc.C1 - pc.lambda4 / (4.0 * pc.lambda2)) > 1e-9 * pc.C1 ||
      std::abs(pc.C2 - 256.0 * pc.lambda2 * pc.lambda2 * pc.lambda3 * pc.lambda3) >
          1e-9 * pc.C2)
    throw std::invalid_argument("PairingConstants violate C1/C2 invariants");

  auto fk = fk_sequence(R, D, m);
  double root = std::sqrt(pc.C2 * pc.Lm);
  ControlFunction s =
      ControlFunction::scale(1.0 / ((m + 1) * root), ControlFunction::sqrt());
  ControlFunction fm_s = ControlFunction::compose(fk.back(), s);
  ControlFunction d_s = ControlFunction::compose(D, s);
  ControlFunction tail =
      ControlFunction::scale(pc.C1 * (m + 1) / (pc.Lm * root), ControlFunction::sqrt());
  return ControlFunction::sum({ControlFunction::scale(2.0, fm_s),
                               ControlFunction::scale(2.0, d_s), tail});
}

// F(x) = sup{ y : G(y) <= x }, the generalized inverse with sup(empty) = 0.
inline ControlFunction decay_F(const ControlFunction& G) {
  if (!non_decreasing_on_grid(G, 0.0, 1e4))
    throw std::invalid_argument("decay_F requires non-decreasing G");
  return ControlFunction::geninv(G);
}

// Explicit exactness constants of the controlled long exact sequence,
// parameterized by the lifting control F_l, plus the boundary-map level.
inline std::map<std::string, ControlFunction> exactness_controls(const ControlFunction& Fl) {
  if (!non_decreasing_on_grid(Fl, 0.0, 1e4))
    throw std::invalid_argument("exactness_controls requires non-decreasing Fl");
  using CF = ControlFunction;
  std::map<std::string, ControlFunction> out;
  // 28 Fl(4174 L) + L
  out.emplace("exact_K0A",
              CF::sum({CF::scale(28.0, CF::compose(Fl, CF::linear(4174.0, 0.0))),
                       CF::identity()}));
  // 14 Fl(L) + L
  out.emplace("exact_K1A", CF::sum({CF::scale(14.0, Fl), CF::identity()}));
  // 4367 L
  out.emplace("exact_K0J", CF::linear(4367.0, 0.0));
  // 412034 Fl(3L)
  out.emplace("exact_K1Q", CF::scale(412034.0, CF::compose(Fl, CF::linear(3.0, 0.0))));
  // boundary level 126 Fl(3L)
  out.emplace("boundary", CF::scale(126.0, CF::compose(Fl, CF::linear(3.0, 0.0))));
  return out;
}

}  // namespace curvdecay::control
