#include <doctest.h>

#include <cmath>

#include "webgeo/errors.hpp"
#include "webgeo/parser.hpp"
#include "webgeo/scalar_match.hpp"

using namespace webgeo;

namespace {
Expr scalar(const std::string& text, const std::string& var) {
  std::vector<std::string> vars{var};
  return parse_expression(text, vars);
}
}  // namespace

TEST_CASE("constant speeds: f=1, F=2 gives phi1(x) = 2x") {
  ScalarMatch m = match_scalar_systems(scalar("1", "x"), "x", scalar("2", "X"),
                                       "X", 0.0, 0.0, Interval{0.0, 1.0});
  CHECK(m.max_residual < 1e-9);
  for (const auto& row : m.table)
    CHECK(std::fabs(row.phi - 2.0 * row.x) < 1e-9);
}

TEST_CASE("same equation with matching anchor gives the identity") {
  ScalarMatch m = match_scalar_systems(scalar("x", "x"), "x", scalar("X", "X"),
                                       "X", 1.0, 1.0, Interval{1.0, 2.0});
  CHECK(m.max_residual < 1e-8);
  for (const auto& row : m.table)
    CHECK(std::fabs(row.phi - row.x) < 1e-8);
}

TEST_CASE("f = 1 + x^2 against F = 1 gives the arctangent") {
  ScalarMatch m = match_scalar_systems(scalar("1+x^2", "x"), "x",
                                       scalar("1", "X"), "X", 0.0, 0.0,
                                       Interval{0.0, 1.0});
  CHECK(m.max_residual < 1e-8);
  for (const auto& row : m.table)
    CHECK(std::fabs(row.phi - std::atan(row.x)) < 1e-9);
}

TEST_CASE("opposite orientations cannot be matched through the anchor") {
  CHECK_THROWS_AS(match_scalar_systems(scalar("1", "x"), "x", scalar("-1", "X"),
                                       "X", 0.0, 0.0, Interval{0.0, 1.0}),
                  SignMismatch);
}

TEST_CASE("the defining relation holds along the matching map") {
  // F(phi(x)) = phi'(x) f(x), with phi' taken by central difference in the
  // residual table; two transcendental pairs.
  ScalarMatch a = match_scalar_systems(scalar("exp(x)", "x"), "x",
                                       scalar("1", "X"), "X", 0.0, 0.0,
                                       Interval{0.0, 1.0});
  CHECK(a.max_residual < 1e-6);

  ScalarMatch b = match_scalar_systems(scalar("2+sin(x)", "x"), "x",
                                       scalar("3", "X"), "X", 0.0, 0.0,
                                       Interval{0.0, 1.0});
  CHECK(b.max_residual < 1e-6);
}

TEST_CASE("the returned map exposes value, derivative, and inverse") {
  ScalarMatch m = match_scalar_systems(scalar("1", "x"), "x", scalar("2", "X"),
                                       "X", 0.0, 0.0, Interval{0.0, 1.0});
  const MapComponent& phi = m.map.space(0);
  CHECK(phi.value(0.25) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(phi.derivative(0.25) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(phi.inverse(0.5) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(m.map.time().is_symbolic());
  CHECK(m.map.time().forward() == Expr::variable("t"));
}
