#include <doctest.h>

#include <cmath>

#include "webgeo/equivalence.hpp"
#include "webgeo/errors.hpp"
#include "webgeo/parser.hpp"
#include "webgeo/sampling.hpp"

#include "../support/catalog.hpp"
#include "../support/oracles.hpp"

using namespace webgeo;
using namespace webgeo::testing;

namespace {

WebMap map_from(const OdeSystem& sys, const std::string& phi0,
                const std::vector<std::string>& phis) {
  std::vector<std::string> tv{"t"};
  std::vector<MapComponent> space;
  for (int i = 0; i < sys.dimension(); ++i) {
    std::vector<std::string> vars{sys.variable(i)};
    space.push_back(
        MapComponent::symbolic(parse_expression(phis[static_cast<std::size_t>(i)], vars),
                               sys.variable(i)));
  }
  return WebMap(MapComponent::symbolic(parse_expression(phi0, tv), "t"),
                std::move(space));
}

std::vector<double> invariant_vector(const OdeSystem& sys, const Point& p) {
  TorsionMatrix tm = torsion_matrix(sys);
  InvariantCoframe cf = invariant_coframe(sys, choose_normalizer(tm, sys));
  StructureFunctions sf = structure_functions(sys, cf);
  Env env = sys.env_at(p);
  std::vector<double> out;
  for (const Expr& c : sf.stacked()) out.push_back(evaluate(c, env));
  return out;
}

}  // namespace

TEST_CASE("pushforward: scalar constant speed doubles") {
  std::vector<std::string> xv{"x1"};
  Box box;
  box.x = {Interval{0.5, 1.5}};
  OdeSystem sys({"x1"}, {Expr::integer(1)}, box);
  WebMap m = map_from(sys, "t", {"2*x1"});
  OdeSystem image = pushforward(sys, m);
  CHECK(image.rhs(0) == Expr::integer(2));
  CHECK(image.box().x[0].lo == doctest::Approx(1.0));
  CHECK(image.box().x[0].hi == doctest::Approx(3.0));
}

TEST_CASE("pushforward: identity is a fixed point") {
  OdeSystem sys = make_system({"x1*x2", "x2"});
  OdeSystem image = pushforward(sys, WebMap::identity(sys));
  CHECK(image.rhs(0) == sys.rhs(0));
  CHECK(image.rhs(1) == sys.rhs(1));
}

TEST_CASE("pushforward: nonconstant time derivative is rejected") {
  OdeSystem sys = make_system({"x1*x2", "x2"});
  WebMap m = map_from(sys, "t^2", {"x1", "x2"});
  CHECK_THROWS_AS(pushforward(sys, m), NonAutonomousResult);
}

TEST_CASE("pushforward: non-monotone components are rejected") {
  OdeSystem sys = make_system({"x1*x2", "x2"});
  // x1^2 - 3*x1 has a turning point at 1.5, inside the box.
  WebMap m = map_from(sys, "t", {"x1^2 - 3*x1", "x2"});
  CHECK_THROWS_AS(pushforward(sys, m), InversionFailure);
}

TEST_CASE("verify_pullback on a constructed pair") {
  OdeSystem src = make_system({"x2^2", "1"});
  WebMap m = map_from(src, "2*t+1", {"exp(x1)", "3*x2-1"});
  OdeSystem dst = pushforward(src, m);
  EquivVerdict v = verify_pullback(src, dst, m, 100);
  REQUIRE(v.kind() == EquivVerdict::Kind::VerifiedByMap);
  CHECK(v.max_residual() < 1e-8);
}

TEST_CASE("verify_pullback through a cubic component (numeric inverse)") {
  OdeSystem src = make_system({"x1*x2", "x2"});
  WebMap m = map_from(src, "t", {"x1^3 + x1", "2*x2"});
  OdeSystem dst = pushforward(src, m);
  EquivVerdict v = verify_pullback(src, dst, m, 100);
  REQUIRE(v.kind() == EquivVerdict::Kind::VerifiedByMap);
  CHECK(v.max_residual() < 1e-8);
}

TEST_CASE("verify_pullback: identity against itself has zero residual") {
  OdeSystem sys = make_system({"x2^2", "1"});
  EquivVerdict v = verify_pullback(sys, sys, WebMap::identity(sys), 50);
  REQUIRE(v.kind() == EquivVerdict::Kind::VerifiedByMap);
  CHECK(v.max_residual() == 0.0);
}

TEST_CASE("verify_pullback refutes a wrong pairing") {
  OdeSystem a = make_system({"x1*x2", "x2"});
  OdeSystem b = make_system({"x2^2", "1"});
  EquivVerdict v = verify_pullback(a, b, WebMap::identity(a), 50);
  CHECK(v.kind() == EquivVerdict::Kind::RefutedByInvariant);
}

TEST_CASE("signature samples on the catalog") {
  SignatureSample parabolic = signature_sample(make_system({"x2^2", "1"}), 10);
  REQUIRE(parabolic.values.size() == 10);
  REQUIRE(parabolic.labels.size() == 4);
  for (const auto& vec : parabolic.values) {
    CHECK(vec[0] == doctest::Approx(0.0));   // c^0_{01}
    CHECK(vec[1] == doctest::Approx(0.5));   // c^0_{02}
    CHECK(vec[2] == doctest::Approx(1.5));   // c^1_{12}
    CHECK(vec[3] == doctest::Approx(0.0));   // c^2_{12}
  }

  SignatureSample bilinear = signature_sample(make_system({"x1*x2", "x2"}), 10);
  for (const auto& vec : bilinear.values) {
    CHECK(vec[1] == doctest::Approx(0.0));
    CHECK(vec[2] == doctest::Approx(1.0));
  }

  // Nonconstant invariant: c^0_{02} of (exp(x2^2), 1) varies over the box.
  SignatureSample gaussian =
      signature_sample(make_system({"exp(x2^2)", "1"}), 10);
  double lo = 1e300, hi = -1e300;
  for (const auto& vec : gaussian.values) {
    lo = std::min(lo, vec[1]);
    hi = std::max(hi, vec[1]);
  }
  CHECK(hi - lo > 1e-3);
}

TEST_CASE("compare_signatures: refutation and its witness") {
  SignatureSample a = signature_sample(make_system({"x1*x2", "x2"}), 10);
  SignatureSample b = signature_sample(make_system({"x2^2", "1"}), 10);
  EquivVerdict v = compare_signatures(a, b);
  REQUIRE(v.kind() == EquivVerdict::Kind::RefutedByInvariant);
  CHECK(v.witness().invariant == "c^0_{02}");
  CHECK(v.witness().gap > 0.49);
}

TEST_CASE("compare_signatures: matching constant signatures do not refute") {
  SignatureSample a = signature_sample(make_system({"x1*x2", "x2"}), 10);
  SignatureSample b = signature_sample(make_system({"exp(x2)", "1"}), 10);
  CHECK(compare_signatures(a, b).kind() == EquivVerdict::Kind::NotRefuted);
  CHECK(compare_signatures(a, a).kind() == EquivVerdict::Kind::NotRefuted);
}

TEST_CASE("signature sampling reports an ill-conditioned normalizer") {
  // f1 faults on the lower 40% of the x2 interval; the invariants inherit
  // the faults, so well over 20% of the grid is skipped.
  std::vector<std::string> vars{"x1", "x2"};
  OdeSystem sys({"x1", "x2"},
                {parse_expression("ln(x2 - 1.4)*x2 + 3", vars),
                 parse_expression("x2", vars)});
  REQUIRE(sys.validation().ok());  // center is fine, corners are not
  CHECK_THROWS_AS(signature_sample(sys, 40), IllConditionedNormalizer);
}

TEST_CASE("web map orientation data") {
  OdeSystem sys = make_system({"x2^2", "1"});
  WebMap m = map_from(sys, "2*t", {"3*x1", "1 - x2"});
  std::vector<int> signs = m.orientation(sys.box());
  CHECK(signs == std::vector<int>{1, 1, -1});
  m.check_monotone(sys.box());  // mixed orientations are still monotone
}

TEST_CASE("compare_signatures: different normalizer pairs are a policy error") {
  SignatureSample a = signature_sample(make_system({"x1*x2", "x2"}), 10);
  SignatureSample b = signature_sample(make_system({"x1", "x1*x2"}), 10);
  REQUIRE(b.normalizer_row == 2);
  REQUIRE(b.normalizer_col == 1);
  CHECK_THROWS_AS(compare_signatures(a, b), PolicyMismatch);
}

TEST_CASE("symmetry dimension on the closed-form cases") {
  SymmetryEstimate parabolic = symmetry_dimension(make_system({"x2^2", "1"}), 12);
  CHECK(parabolic.rank == 0);
  CHECK(parabolic.dimension == 3);

  SymmetryEstimate gaussian =
      symmetry_dimension(make_system({"exp(x2^2)", "1"}), 12);
  CHECK(gaussian.rank == 1);
  CHECK(gaussian.dimension == 2);
}

TEST_CASE("property: round-trip invariance on a reduced catalog") {
  int checked = 0;
  for (const OdeSystem& src : {make_system({"x2^2", "1"}),
                               make_system({"exp(x2)", "1"})}) {
    for (std::uint64_t seed : {11u, 12u}) {
      WebMap m = random_web_map(src, seed);
      OdeSystem dst = pushforward(src, m);
      EquivVerdict v = verify_pullback(src, dst, m, 100);
      REQUIRE(v.kind() == EquivVerdict::Kind::VerifiedByMap);
      CHECK(v.max_residual() < 1e-8);

      // Invariant-value transport at a few points.
      for (const Point& p : random_points(src.box(), 5, seed ^ 0xabc, 0.05)) {
        std::vector<double> at_src = invariant_vector(src, p);
        std::vector<double> at_dst = invariant_vector(dst, m.apply(p));
        REQUIRE(at_src.size() == at_dst.size());
        for (std::size_t i = 0; i < at_src.size(); ++i)
          CHECK(rel_err(at_src[i], at_dst[i]) < 1e-8);
      }
      ++checked;
    }
  }
  CHECK(checked == 4);
}

TEST_CASE("property: symmetry dimension is a pushforward invariant") {
  OdeSystem src = make_system({"exp(x2^2)", "1"});
  SymmetryEstimate base = symmetry_dimension(src, 10);
  WebMap m = random_web_map(src, 77);
  OdeSystem dst = pushforward(src, m);
  SymmetryEstimate moved = symmetry_dimension(dst, 10);
  CHECK(base.dimension == moved.dimension);
}
