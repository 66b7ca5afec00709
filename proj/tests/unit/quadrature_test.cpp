#include <doctest.h>

#include <cmath>
#include <random>

#include "webgeo/errors.hpp"
#include "webgeo/quadrature.hpp"

using namespace webgeo;

TEST_CASE("constant integrand gives the identity antiderivative") {
  Quadrature q([](double) { return 1.0; }, 0.0, Interval{0.0, 1.0});
  CHECK(q.value(0.7) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(q.value(-0.3) == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(q.invert(0.42) == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("arctangent integrand") {
  Quadrature q([](double x) { return 1.0 / (1.0 + x * x); }, 0.0,
               Interval{0.0, 1.0});
  for (double x : {0.1, 0.5, 1.0, 2.0, -1.5}) {
    CHECK(std::fabs(q.value(x) - std::atan(x)) < 1e-11);
  }
  CHECK(q.invert(std::atan(0.8)) == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("negative integrand is handled with a decreasing antiderivative") {
  Quadrature q([](double x) { return -1.0 / (1.0 + x); }, 0.0,
               Interval{0.0, 1.0});
  CHECK(q.direction() == -1);
  CHECK(q.value(1.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-11));
  CHECK(q.invert(-std::log(1.5)) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("property: inversion residual below 1e-10") {
  Quadrature q([](double x) { return 1.0 / (2.0 + std::sin(x)); }, 0.5,
               Interval{0.0, 2.0});
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ys(q.value(0.05), q.value(1.95));
  for (int k = 0; k < 30; ++k) {
    double y = ys(rng);
    double x = q.invert(y);
    CHECK(std::fabs(q.value(x) - y) < 1e-10);
  }
}

TEST_CASE("sign changes are rejected at construction") {
  CHECK_THROWS_AS(
      Quadrature([](double x) { return x - 0.5; }, 0.0, Interval{0.0, 1.0}),
      QuadratureFailure);
}

TEST_CASE("saturating integrals fail inversion with a typed error") {
  // integral of e^{-x} saturates at 1; inverting beyond that must not hang.
  Quadrature q([](double x) { return std::exp(-x); }, 0.0, Interval{0.0, 1.0});
  CHECK_THROWS_AS(q.invert(2.0), QuadratureFailure);
}
