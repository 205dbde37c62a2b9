#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "curvdecay/control/expr.hpp"
#include "curvdecay/util/rng.hpp"

using curvdecay::Rng;
using curvdecay::control::ControlFunction;
using CF = ControlFunction;

TEST_CASE("generalized inverse basics") {
  CF sq = CF::power(2.0);
  CHECK(CF::geninv(sq)(4.0) == Catch::Approx(2.0).margin(1e-8));
  CHECK(CF::geninv(CF::identity())(3.7) == Catch::Approx(3.7).margin(1e-8));
  CHECK(CF::geninv(CF::identity())(0.0) == Catch::Approx(0.0).margin(1e-8));
  // sup(empty) = 0 when G never drops to the target
  CHECK(CF::geninv(CF::constant(5.0))(3.0) == 0.0);
  // clamp at the ceiling when G stays below the target
  CF inv1 = CF::geninv(CF::constant(1.0));
  CHECK(inv1(3.0) == inv1.y_max());
}

TEST_CASE("evaluation semantics") {
  CF f = CF::sum({CF::linear(2.0, 1.0), CF::constant(3.0)});
  CHECK(f(2.0) == Catch::Approx(8.0));
  CHECK_THROWS_AS(f(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(f(-1.0), std::domain_error);
  // ceiling produces the infinity sentinel
  CF big = CF::power(4.0);
  CHECK(std::isinf(big(1e6)));
  // constructor invariants
  CHECK_THROWS_AS(CF::linear(-1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CF::power(0.5), std::invalid_argument);
  CHECK_THROWS_AS(CF::table({0.0, 1.0}, {1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("table interpolation and composition") {
  CF t = CF::table({0.0, 1.0, 2.0}, {0.0, 10.0, 12.0});
  CHECK(t(0.5) == Catch::Approx(5.0));
  CHECK(t(1.5) == Catch::Approx(11.0));
  CHECK(t(5.0) == Catch::Approx(12.0));  // constant extension on the right
  CF c = CF::compose(CF::power(2.0), CF::linear(1.0, 1.0));
  CHECK(c(2.0) == Catch::Approx(9.0));
  CHECK(CF::scale(0.5, CF::linear(4.0, 0.0))(3.0) == Catch::Approx(6.0));
  CHECK(CF::max_of({CF::constant(2.0), CF::identity()})(5.0) == Catch::Approx(5.0));
}

TEST_CASE("json round trip") {
  CF f = CF::sum({CF::scale(2.0, CF::compose(CF::geninv(CF::power(2.0)), CF::linear(3.0, 1.0))),
                  CF::max_of({CF::constant(1.0), CF::table({0.0, 2.0}, {0.0, 4.0})})});
  auto j = f.to_json();
  CF g = CF::from_json(j);
  for (double x : {0.0, 0.3, 1.0, 2.5, 10.0, 123.0})
    CHECK(g(x) == Catch::Approx(f(x)).margin(1e-12));
  CHECK(g.to_json() == j);
}

namespace {

CF random_tree(Rng& rng, int depth) {
  int pick = depth == 0 ? static_cast<int>(rng.uniform_index(4))
                        : static_cast<int>(rng.uniform_index(9));
  switch (pick) {
    case 0: return CF::constant(rng.uniform(0.0, 5.0));
    case 1: return CF::linear(rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0));
    case 2: return CF::power(rng.uniform(1.0, 3.0));
    case 3: {
      std::vector<double> xs, ys;
      double x = 0, y = rng.uniform(0.0, 2.0);
      for (int i = 0; i < 5; ++i) {
        xs.push_back(x);
        ys.push_back(y);
        x += rng.uniform(0.1, 2.0);
        y += rng.uniform(0.0, 2.0);
      }
      return CF::table(xs, ys);
    }
    case 4: return CF::sum({random_tree(rng, depth - 1), random_tree(rng, depth - 1)});
    case 5: return CF::max_of({random_tree(rng, depth - 1), random_tree(rng, depth - 1)});
    case 6: return CF::scale(rng.uniform(0.0, 2.0), random_tree(rng, depth - 1));
    case 7: return CF::compose(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    // geninv evaluation costs ~100 child evals per point; keep the child a
    // leaf so random trees cannot nest inverses.
    default: return CF::geninv(random_tree(rng, 0));
  }
}

}  // namespace

TEST_CASE("every constructor output is monotone on a 1000-point grid") {
  Rng rng(20240817);
  for (int trial = 0; trial < 40; ++trial) {
    CF f = random_tree(rng, 3);
    double cap = 100.0;
    double prev = -1.0;
    bool capped = false;
    for (int i = 0; i < 1000; ++i) {
      double x = cap * i / 999.0;
      double v = f(x);
      if (std::isinf(v)) {
        capped = true;
        continue;
      }
      if (!capped) {
        INFO("trial " << trial << " at x=" << x);
        CHECK(v >= prev - 1e-9);
        prev = v;
      }
    }
  }
}
