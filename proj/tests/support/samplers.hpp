#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "webgeo/coframe.hpp"
#include "webgeo/errors.hpp"
#include "webgeo/expr.hpp"
#include "webgeo/ode_system.hpp"
#include "webgeo/web_map.hpp"

namespace webgeo::testing {

/// Bounded random expressions over a set of variables that live on positive
/// boxes (the suites use [1,2] per variable). Positivity is tracked through
/// the grammar so ln and sqrt arguments stay in domain, and candidates whose
/// value or derivative explodes on the box are redrawn, keeping the central
/// finite-difference oracle meaningful at h = 1e-5.
class ExprSampler {
 public:
  ExprSampler(std::vector<std::string> vars, std::uint64_t seed)
      : vars_(std::move(vars)), rng_(seed) {}

  Expr positive(int depth) {
    if (depth <= 0) return positive_atom();
    switch (pick(6)) {
      case 0:
        return positive_atom();
      case 1:
        return Expr::sum({positive(depth - 1), positive(depth - 1)});
      case 2:
        return Expr::product({positive(depth - 1), positive(depth - 1)});
      case 3:
        return Expr::quotient(positive(depth - 1), positive(depth - 1));
      case 4:
        return Expr::power(variable(), 1 + static_cast<long long>(pick(2)));
      default:
        return Expr::exp(Expr::product({small_constant(), variable()}));
    }
  }

  Expr any(int depth) {
    if (depth <= 0) return pick(2) ? variable() : constant();
    switch (pick(8)) {
      case 0:
        return positive(depth - 1);
      case 1:
        return Expr::negate(any(depth - 1));
      case 2:
        return Expr::sum({any(depth - 1), any(depth - 1)});
      case 3:
        return Expr::product({any(depth - 1), any(depth - 1)});
      case 4:
        return Expr::ln(positive(depth - 1));
      case 5:
        return pick(2) ? Expr::sin(any(depth - 1)) : Expr::cos(any(depth - 1));
      case 6:
        return Expr::sqrt(positive(depth - 1));
      default:
        return Expr::quotient(any(depth - 1), positive(depth - 1));
    }
  }

  /// Random expression with |value| and |d/dvar value| below 100 at the
  /// given probe points (redrawn until it qualifies).
  Expr bounded(int depth, const std::vector<Env>& probes) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      Expr e = any(depth);
      if (well_behaved(e, probes)) return e;
    }
    return variable();  // the sampler is badly tuned if this is ever hit
  }

  Expr variable() {
    return Expr::variable(vars_[pick(static_cast<int>(vars_.size()))]);
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  bool well_behaved(const Expr& e, const std::vector<Env>& probes) {
    try {
      for (const Env& env : probes) {
        if (std::fabs(evaluate(e, env)) > 100.0) return false;
        for (const std::string& v : vars_)
          if (std::fabs(evaluate(differentiate(e, v), env)) > 100.0)
            return false;
      }
    } catch (const Error&) {
      return false;
    }
    return true;
  }

  Expr positive_atom() {
    return pick(2) ? variable() : positive_rational();
  }

  Expr constant() {
    return pick(2) ? positive_rational()
                   : Expr::constant(-positive_rational().number());
  }

  Expr positive_rational() {
    return Expr::rational(1 + pick(6), 1 + pick(3));
  }

  Expr small_constant() {
    return Expr::rational(1 + pick(3), 5 + pick(5));
  }

  int pick(int n) {
    return static_cast<int>(rng_() % static_cast<unsigned long long>(n));
  }

  std::vector<std::string> vars_;
  std::mt19937_64 rng_;
};

/// Random rational systems, positive and nonvanishing on [1,2]^n: each
/// right-hand side is a ratio of posynomials. Systems whose torsion is flat
/// (or has no usable normalizer) are redrawn.
inline OdeSystem random_rational_system(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int k) { return static_cast<int>(rng() % static_cast<unsigned>(k)); };

  std::vector<std::string> vars;
  for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));

  auto posynomial = [&]() {
    std::vector<Expr> terms;
    int nterms = 1 + pick(2);
    for (int t = 0; t < nterms; ++t) {
      std::vector<Expr> factors;
      factors.push_back(Expr::rational(1 + pick(3), 1 + pick(2)));
      for (int v = 0; v < n; ++v)
        if (int p = pick(3); p > 0)
          factors.push_back(Expr::power(Expr::variable(vars[static_cast<std::size_t>(v)]),
                                        static_cast<long long>(p)));
      terms.push_back(Expr::product(std::move(factors)));
    }
    return Expr::sum(std::move(terms));
  };

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Expr> rhs;
    for (int i = 0; i < n; ++i) {
      Expr f = posynomial();
      if (pick(2)) f = Expr::quotient(f, posynomial());
      rhs.push_back(f);
    }
    OdeSystem sys(vars, rhs);
    if (!sys.validation().ok()) continue;
    try {
      TorsionMatrix tm = torsion_matrix(sys);
      choose_normalizer(tm, sys);
      return sys;
    } catch (const Error&) {
      continue;  // flat torsion or ill-placed zeros; redraw
    }
  }
  throw Error("random_rational_system: no usable draw in 100 attempts");
}

/// Random strictly monotone web maps with constant phi_0'. Components are
/// affine, exp-affine, or cubic-plus-linear pieces; roughly half are
/// decreasing. Images of [1,2]-boxes stay moderate.
inline WebMap random_web_map(const OdeSystem& sys, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto coeff = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  auto component = [&](const std::string& var) {
    Expr x = Expr::variable(var);
    double sgn = unit(rng) < 0.5 ? 1.0 : -1.0;
    switch (rng() % 3) {
      case 0:  // affine
        return Expr::sum({Expr::product({Expr::real(sgn * coeff(0.5, 2.0)), x}),
                          Expr::real(coeff(-1.0, 1.0))});
      case 1:  // exp-affine
        return Expr::sum(
            {Expr::product({Expr::real(sgn * coeff(0.5, 1.5)),
                            Expr::exp(Expr::product({Expr::real(coeff(0.2, 0.7)), x}))}),
             Expr::real(coeff(-1.0, 1.0))});
      default: {  // cubic plus linear around a shifted center
        Expr u = Expr::sum({x, Expr::real(coeff(-0.5, 0.5))});
        return Expr::sum(
            {Expr::product({Expr::real(sgn * coeff(0.1, 0.5)), Expr::power(u, 3)}),
             Expr::product({Expr::real(sgn * coeff(0.5, 1.5)), u}),
             Expr::real(coeff(-1.0, 1.0))});
      }
    }
  };

  Expr phi0 = Expr::sum({Expr::product({Expr::real(coeff(0.5, 2.0)),
                                        Expr::variable("t")}),
                         Expr::real(coeff(-1.0, 1.0))});
  std::vector<MapComponent> space;
  for (int i = 0; i < sys.dimension(); ++i)
    space.push_back(MapComponent::symbolic(component(sys.variable(i)),
                                           sys.variable(i)));
  WebMap map(MapComponent::symbolic(phi0, "t"), std::move(space));
  map.check_monotone(sys.box());
  return map;
}

}  // namespace webgeo::testing
