#include <doctest.h>

#include <cmath>

#include "webgeo/errors.hpp"
#include "webgeo/expr.hpp"
#include "webgeo/parser.hpp"

#include "../support/oracles.hpp"
#include "../support/samplers.hpp"

using namespace webgeo;
using namespace webgeo::testing;

namespace {
const std::vector<std::string> kVars{"x1", "x2"};
Expr P(const std::string& s) { return parse_expression(s, kVars); }
}  // namespace

TEST_CASE("canonicalization folds and collects") {
  CHECK(P("x1 - x1").is_zero());
  CHECK(P("x1/x1").is_one());
  CHECK(P("x1*x1") == Expr::power(Expr::variable("x1"), 2));
  CHECK(P("2*x1 + 3*x1") == P("5*x1"));
  CHECK(P("2 + 3*4") == Expr::integer(14));
  CHECK(P("1/2 + 1/3") == Expr::rational(5, 6));
  CHECK(P("(x1*x2)^2") == P("x1^2 * x2^2"));
  CHECK(P("sqrt(x1)^2") == P("x1"));
  CHECK(P("ln(exp(x1))") == P("x1"));
  CHECK(P("exp(ln(x1))") == P("x1"));
  CHECK(P("x1^2 * x1^-2").is_one());
  CHECK(P("-(-x1)") == P("x1"));
  CHECK(P("x2*x1") == P("x1*x2"));  // sorted operands
}

TEST_CASE("rational constants stay exact until evaluation") {
  Expr half = P("3/2");
  CHECK(half.is_constant());
  CHECK(half.number().exact());
  CHECK(half.number().num() == 3);
  CHECK(half.number().den() == 2);
  // Decimal literals are doubles, exact quotients of integers stay rational.
  CHECK_FALSE(P("1.5").number().exact());
  CHECK(P("1.5").number().to_double() == doctest::Approx(1.5));
}

TEST_CASE("differentiation closed-form cases") {
  Expr d = differentiate(P("ln(x2^2)"), "x2");
  CHECK(d == P("2/x2"));

  for (double x2 : {0.5, 1.3, 2.0}) {
    Env env{{"x2", x2}};
    double fd = central_difference(P("ln(x2^2)"), "x2", env, 1e-6);
    CHECK(rel_err(evaluate(d, env), fd) < 1e-8);
  }

  CHECK(differentiate(P("x1*x2"), "x1") == P("x2"));
  CHECK(differentiate(Expr::rational(7, 3), "x1").is_zero());
  CHECK(differentiate(P("exp(2*x1)"), "x1") == P("2*exp(2*x1)"));
  CHECK(differentiate(P("sin(x1)"), "x1") == P("cos(x1)"));
}

TEST_CASE("derivative of sqrt and abs") {
  Env env{{"x1", 1.7}};
  Expr dsqrt = differentiate(P("sqrt(x1)"), "x1");
  CHECK(evaluate(dsqrt, env) ==
        doctest::Approx(0.5 / std::sqrt(1.7)).epsilon(1e-12));

  Expr dabs = differentiate(P("abs(x1)"), "x1");
  CHECK(evaluate(dabs, Env{{"x1", 2.0}}) == doctest::Approx(1.0));
  CHECK(evaluate(dabs, Env{{"x1", -2.0}}) == doctest::Approx(-1.0));
}

TEST_CASE("evaluation and domain faults") {
  CHECK(evaluate(P("x1*x2"), Env{{"x1", 2}, {"x2", 3}}) == doctest::Approx(6));
  CHECK(evaluate(P("2/x2"), Env{{"x2", 4}}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(evaluate(P("ln(x2)"), Env{{"x2", -1}}), DomainFault);
  CHECK_THROWS_AS(evaluate(P("1/x1"), Env{{"x1", 0}}), DomainFault);
  CHECK_THROWS_AS(evaluate(P("x1^-2"), Env{{"x1", 0}}), DomainFault);
  CHECK_THROWS_AS(evaluate(P("sqrt(x1)"), Env{{"x1", -4}}), DomainFault);

  try {
    evaluate(P("ln(x2)"), Env{{"x2", -1}});
    CHECK(false);
  } catch (const DomainFault& f) {
    CHECK(f.subexpression == "ln(x2)");
    CHECK(f.at.find("x2") != std::string::npos);
  }
}

TEST_CASE("substitution") {
  std::vector<std::string> uvars{"u", "x2"};
  Expr target = parse_expression("exp(u)", uvars);
  CHECK(substitute(P("x1*x2"), {{"x1", target}}) ==
        parse_expression("exp(u)*x2", uvars));
  CHECK(substitute(P("x1"), {}) == P("x1"));
  CHECK(substitute(P("x1+x1"), {{"x1", Expr::integer(1)}}) == Expr::integer(2));
}

TEST_CASE("property: symbolic derivative vs central difference") {
  ExprSampler sampler(kVars, /*seed=*/101);
  std::mt19937_64 pt_rng(202);
  std::uniform_real_distribution<double> in_box(1.05, 1.95);

  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Env> probes;
    for (int p = 0; p < 3; ++p)
      probes.push_back(Env{{"x1", in_box(pt_rng)}, {"x2", in_box(pt_rng)}});
    Expr e = sampler.bounded(3, probes);
    for (const std::string& var : kVars) {
      Expr de = differentiate(e, var);
      for (const Env& env : probes) {
        double sym = evaluate(de, env);
        double fd = central_difference(e, var, env, 1e-5);
        CHECK(rel_err(sym, fd) < 1e-6);
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("property: canonicalization is idempotent") {
  ExprSampler sampler(kVars, /*seed=*/303);
  for (int trial = 0; trial < 300; ++trial) {
    Expr e = sampler.any(4);
    CHECK(recanonicalized(e) == e);
  }
}

TEST_CASE("property: substitution commutes with evaluation") {
  ExprSampler sampler(kVars, /*seed=*/404);
  std::mt19937_64 pt_rng(505);
  std::uniform_real_distribution<double> in_box(1.05, 1.95);

  for (int trial = 0; trial < 150; ++trial) {
    Env env{{"x1", in_box(pt_rng)}, {"x2", in_box(pt_rng)}};
    Expr e = sampler.bounded(3, {env});
    Expr g = sampler.positive(2);

    try {
      double direct = evaluate(substitute(e, {{"x2", g}}), env);
      Env shifted = env;
      shifted.set("x2", evaluate(g, env));
      double staged = evaluate(e, shifted);
      CHECK(std::fabs(direct - staged) <= 1e-12 * (1.0 + std::fabs(staged)));
    } catch (const DomainFault&) {
      // g may push x2 outside e's domain; not the property under test.
    }
  }
}

TEST_CASE("property: printed form re-parses to the same canonical tree") {
  ExprSampler sampler(kVars, /*seed=*/606);
  for (int trial = 0; trial < 300; ++trial) {
    Expr e = sampler.any(4);
    CAPTURE(e.str());
    CHECK(parse_expression(e.str(), kVars) == e);
  }
}
