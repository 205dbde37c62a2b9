#pragma once

// The normalizing function chi(x) = (2/pi) * int_0^x (1-cos y)/y^2 dy.
// Odd, |chi| <= 1, chi(x) -> 1 with |chi(x)-1| < 4/(pi x) for x > 0, and the
// distributional Fourier transform of chi is supported in [-1,1].

#include <cmath>
#include <stdexcept>

namespace curvdecay::ktheory {

namespace chi_detail {

// (1 - cos y)/y^2 with the small-y series 1/2 - y^2/24 + y^4/720 - ...
inline double integrand(double y) {
  double ay = std::fabs(y);
  if (ay < 1e-4) {
    double y2 = y * y;
    return 0.5 - y2 / 24.0 + y2 * y2 / 720.0;
  }
  return (1.0 - std::cos(y)) / (y * y);
}

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = integrand(lm), frm = integrand(rm);
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integral_0_to(double x, double tol) {
  // split at oscillation scale so adaptivity never straddles many periods
  double acc = 0.0, a = 0.0;
  while (a < x) {
    double b = std::min(x, a + 3.0);
    double fa = integrand(a), fb = integrand(b), fm = integrand(0.5 * (a + b));
    acc += adaptive(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 40);
    a = b;
  }
  return acc;
}

// Asymptotic tail: int_x^inf (1-cos y)/y^2 dy = 1/x - C2(x) where
// C2(x) = int_x^inf cos(y) y^{-2} dy expands as sum_k (k-1)! s_k(x) / x^k,
// the trig factor cycling (-sin, +cos, +sin, -cos). Truncated at the
// smallest term; below ~1e-13 for x >= 30.
inline double cos_tail(double x) {
  double sx = std::sin(x), cx = std::cos(x);
  double fact = 1.0;  // (k-1)! at k = 2 is 1
  double acc = 0.0, prev_mag = 1e300;
  for (int k = 2; k < 60; ++k) {
    double trig;
    switch (k % 4) {
      case 2: trig = -sx; break;
      case 3: trig = cx; break;
      case 0: trig = sx; break;
      default: trig = -cx; break;
    }
    double term = fact * trig / std::pow(x, k);
    double mag = std::fabs(fact / std::pow(x, k));
    if (mag > prev_mag || mag < 1e-18) break;
    acc += term;
    prev_mag = mag;
    fact *= k;
  }
  return acc;
}

}  // namespace chi_detail

inline double chi(double x) {
  if (std::isnan(x)) throw std::domain_error("chi: NaN input");
  if (x < 0) return -chi(-x);
  if (x == 0) return 0.0;
  constexpr double two_over_pi = 2.0 / M_PI;
  if (x <= 1e-2) {
    // term-by-term integral of the series
    double x2 = x * x;
    return two_over_pi *
           (x / 2.0 - x * x2 / 72.0 + x2 * x2 * x / 3600.0 - x2 * x2 * x2 * x / 282240.0);
  }
  if (x <= 30.0) return two_over_pi * chi_detail::integral_0_to(x, 1e-12);
  double tail = 1.0 / x - chi_detail::cos_tail(x);
  return 1.0 - two_over_pi * tail;
}

// derivative, used by the Fourier-support diagnostic
inline double chi_prime(double x) { return (2.0 / M_PI) * chi_detail::integrand(x); }

}  // namespace curvdecay::ktheory
