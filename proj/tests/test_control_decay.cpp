#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "curvdecay/control/decay.hpp"

using namespace curvdecay::control;
using CF = ControlFunction;

TEST_CASE("fk with identity inputs matches the closed form (3k-1)r") {
  auto fk = fk_sequence(CF::identity(), CF::identity(), 3);
  REQUIRE(fk.size() == 3);
  for (double r : {0.0, 0.5, 1.0, 13.0, 400.0}) {
    CHECK(fk[0](r) == Catch::Approx(2.0 * r).margin(1e-12));
    CHECK(fk[1](r) == Catch::Approx(5.0 * r).margin(1e-12));
    CHECK(fk[2](r) == Catch::Approx(8.0 * r).margin(1e-12));
  }
}

TEST_CASE("fk hand-unrolled recursion oracle: R=2x, D=x, m=2") {
  // F_1 = R(D(r)+r) = 2*2r = 4r; F_2 = R(4r + r + 2r) = 14r.
  auto fk = fk_sequence(CF::linear(2.0, 0.0), CF::identity(), 2);
  CHECK(fk[1](1.0) == Catch::Approx(14.0));
  CHECK(fk[1](3.0) == Catch::Approx(42.0));
}

TEST_CASE("fk convex bound: F_k(x) <= R(2^{2k-1} D(x)) for superadditive R") {
  // Exercised for linear superadditive R, where the inductive estimate
  // closes. (For superlinear R the remark fails already at k=3, R=x^2.)
  CF R = CF::linear(2.0, 0.0);
  for (CF D : {CF::identity(), CF::linear(2.0, 1.0)}) {
    auto fk = fk_sequence(R, D, 3);
    for (int k = 1; k <= 3; ++k) {
      double scale = std::pow(2.0, 2 * k - 1);
      for (double x : {0.1, 1.0, 3.0, 10.0, 250.0}) {
        double lhs = fk[k - 1](x);
        double rhs = R(scale * D(x));
        if (std::isinf(rhs)) continue;
        INFO("k=" << k << " x=" << x);
        CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-9);
      }
    }
  }
}

TEST_CASE("fk argument errors") {
  CHECK_THROWS_AS(fk_sequence(CF::identity(), CF::identity(), 0), std::invalid_argument);
  // D(x) = x/2 violates D(x) >= x
  CHECK_THROWS_AS(fk_sequence(CF::identity(), CF::scale(0.5, CF::identity()), 2),
                  std::invalid_argument);
}

TEST_CASE("decay_G symbolic unroll oracle: m=1, identities, unit constants") {
  // lambda2=1, lambda3=1/16, lambda4=4 gives C1=C2=1.
  auto pc = PairingConstants::from_lambdas(1.0, 1.0, 1.0 / 16.0, 4.0, 1.0);
  CHECK(pc.C1 == Catch::Approx(1.0));
  CHECK(pc.C2 == Catch::Approx(1.0));
  CF G = decay_G(CF::identity(), CF::identity(), 1, pc);
  // hand unroll: s = sqrt(r)/2, F_1(s) = 2s, G = 4s + 2s + 2 sqrt(r) = 5 sqrt(r)
  for (double r : {1.0, 4.0, 100.0})
    CHECK(G(r) == Catch::Approx(5.0 * std::sqrt(r)).margin(1e-6));
  CHECK(G(0.0) == Catch::Approx(0.0).margin(1e-9));
  CHECK(non_decreasing_on_grid(G, 0.0, 1e6, 1000));
}

TEST_CASE("decay_F inverts G") {
  CF F = decay_F(CF::power(2.0));
  CHECK(F(9.0) == Catch::Approx(3.0).margin(1e-8));

  // inverse coherence for a strictly increasing table
  CF G = CF::table({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 0.7, 2.2, 4.0, 9.0});
  CF Fi = decay_F(G);
  for (double x : {0.2, 0.9, 1.7, 2.5, 3.3, 3.9})
    CHECK(Fi(G(x)) == Catch::Approx(x).margin(1e-6));
}

TEST_CASE("proportional controls give quadratic decay") {
  auto pc = PairingConstants::from_lambdas(1.0, 1.0, 1.0 / 16.0, 4.0, 1.0);
  CF R = CF::linear(3.0, 0.0), D = CF::linear(2.0, 0.0);
  CF F = decay_F(decay_G(R, D, 2, pc));
  // F(r) >= c r^2 on a grid; also measure the log-log tail slope
  double c = F(1.0);
  REQUIRE(c > 0.0);
  for (double r = 1.0; r <= 1000.0; r *= 2.0) CHECK(F(r) >= 0.5 * c * r * r);
  double slope = (std::log(F(1000.0)) - std::log(F(100.0))) /
                 (std::log(1000.0) - std::log(100.0));
  CHECK(slope == Catch::Approx(2.0).margin(0.05));
}

TEST_CASE("linear controls fit max{Ar-B,0}^-2 decay") {
  auto pc = PairingConstants::from_lambdas(1.0, 1.0, 1.0 / 16.0, 4.0, 1.0);
  CF R = CF::linear(2.0, 5.0), D = CF::linear(1.0, 3.0);
  CF G = decay_G(R, D, 2, pc);
  CF F = decay_F(G);
  // G(r) = alpha sqrt(r) + beta for linear inputs; fit (alpha, beta) and
  // check 1/F(r) <= 1/(max{Ar-B,0})^2 with A = 1/alpha, B = beta/alpha.
  double g1 = G(1.0), g2 = G(4.0);
  double alpha = (g2 - g1) / (2.0 - 1.0);
  double beta = g1 - alpha;
  double A = 1.0 / alpha, B = beta / alpha;
  for (double r = 1.0; r <= 1000.0; r *= 1.7) {
    double cut = std::max(A * r - B, 0.0);
    if (cut == 0.0) continue;
    CHECK(1.0 / F(r) <= 1.0 / (cut * cut) * (1.0 + 1e-6));
  }
}

TEST_CASE("exactness controls reproduce the explicit constants at Fl = id") {
  auto ctl = exactness_controls(CF::identity());
  for (double L : {1.0, 2.0, 10.0}) {
    CHECK(ctl.at("exact_K0A")(L) == Catch::Approx(116873.0 * L));
    CHECK(ctl.at("exact_K1A")(L) == Catch::Approx(15.0 * L));
    CHECK(ctl.at("exact_K0J")(L) == Catch::Approx(4367.0 * L));
    CHECK(ctl.at("exact_K1Q")(L) == Catch::Approx(1236102.0 * L));
    CHECK(ctl.at("boundary")(L) == Catch::Approx(378.0 * L));
  }
}

TEST_CASE("exactness controls stay monotone at Fl = 0") {
  auto ctl = exactness_controls(CF::constant(0.0));
  for (const auto& [name, f] : ctl) {
    INFO(name);
    CHECK(non_decreasing_on_grid(f, 0.0, 100.0, 1000));
  }
}
