#include <cmath>
#include <limits>

#include "webgeo/errors.hpp"
#include "webgeo/expr.hpp"

namespace webgeo {

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, std::string_view var) {
  switch (e.kind()) {
    case NodeKind::Constant:
      return Expr::integer(0);

    case NodeKind::Variable:
      return Expr::integer(e.name() == var ? 1 : 0);

    case NodeKind::Sum: {
      std::vector<Expr> terms;
      for (const Expr& t : e.operands()) terms.push_back(differentiate(t, var));
      return Expr::sum(std::move(terms));
    }

    case NodeKind::Product: {
      auto ops = e.operands();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].is_constant()) continue;
        std::vector<Expr> factors;
        factors.reserve(ops.size());
        for (std::size_t j = 0; j < ops.size(); ++j)
          factors.push_back(j == i ? differentiate(ops[j], var) : ops[j]);
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }

    case NodeKind::Power: {
      const Expr& u = e.base();
      const Expr& a = e.exponent();
      Expr du = differentiate(u, var);
      if (a.is_constant()) {
        // a * u^(a-1) * u'
        Expr am1 = Expr::constant(a.number() - Number::integer(1));
        return Expr::product({a, Expr::power(u, am1), std::move(du)});
      }
      // u^a * (a' ln u + a u'/u)
      Expr da = differentiate(a, var);
      Expr inner = Expr::sum({Expr::product({std::move(da), Expr::ln(u)}),
                              Expr::product({a, std::move(du),
                                             Expr::power(u, -1)})});
      return Expr::product({e, std::move(inner)});
    }

    case NodeKind::Call: {
      const Expr& u = e.argument();
      Expr du = differentiate(u, var);
      switch (e.fn()) {
        case Func::Ln:
          // d ln u = u'/u; also the derivative of ln|u| wherever u != 0.
          return Expr::product({std::move(du), Expr::power(u, -1)});
        case Func::Exp:
          return Expr::product({e, std::move(du)});
        case Func::Sin:
          return Expr::product({Expr::cos(u), std::move(du)});
        case Func::Cos:
          return Expr::negate(Expr::product({Expr::sin(u), std::move(du)}));
        case Func::Abs:
          // u/|u| * u'
          return Expr::product(
              {u, Expr::power(Expr::abs(u), -1), std::move(du)});
      }
      return Expr::integer(0);
    }

    case NodeKind::Inverse: {
      // d g^{-1}(y) = y' / g'(g^{-1}(y))
      Expr darg = differentiate(e.argument(), var);
      if (darg.is_zero()) return darg;
      Expr gprime = differentiate(e.inverse_target(), e.inverse_var());
      Expr gprime_at = substitute(gprime, {{e.inverse_var(), e}});
      return Expr::quotient(std::move(darg), std::move(gprime_at));
    }
  }
  return Expr::integer(0);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void fault(const char* reason, const Expr& e, const Env& env) {
  throw DomainFault(reason, e.str(), env.describe());
}

// Solves forward(xi) = y for xi on a monotone branch around `bracket`,
// expanding the bracket geometrically until it straddles y. Bisection with a
// Newton polish; accurate to a few ulp so that downstream finite differences
// stay quiet.
double solve_inverse(const Expr& node, double y, const Env& outer);

double eval(const Expr& e, const Env& env) {
  switch (e.kind()) {
    case NodeKind::Constant:
      return e.number().to_double();

    case NodeKind::Variable: {
      if (const double* v = env.find(e.name())) return *v;
      throw UnknownVariable(e.name(), 0);
    }

    case NodeKind::Sum: {
      double acc = 0.0;
      for (const Expr& t : e.operands()) acc += eval(t, env);
      if (!std::isfinite(acc)) fault("non-finite sum", e, env);
      return acc;
    }

    case NodeKind::Product: {
      double acc = 1.0;
      for (const Expr& f : e.operands()) acc *= eval(f, env);
      if (!std::isfinite(acc)) fault("non-finite product", e, env);
      return acc;
    }

    case NodeKind::Power: {
      double b = eval(e.base(), env);
      double a = eval(e.exponent(), env);
      if (b == 0.0) {
        if (a > 0.0) return 0.0;
        if (a == 0.0) return 1.0;
        fault("division by zero", e, env);
      }
      if (b < 0.0 && std::nearbyint(a) != a)
        fault("negative base with fractional power", e, env);
      double v = std::pow(b, a);
      if (!std::isfinite(v)) fault("non-finite power", e, env);
      return v;
    }

    case NodeKind::Call: {
      double u = eval(e.argument(), env);
      double v = 0.0;
      switch (e.fn()) {
        case Func::Ln:
          if (u <= 0.0) fault("ln of nonpositive value", e, env);
          v = std::log(u);
          break;
        case Func::Exp:
          v = std::exp(u);
          break;
        case Func::Sin:
          v = std::sin(u);
          break;
        case Func::Cos:
          v = std::cos(u);
          break;
        case Func::Abs:
          v = std::fabs(u);
          break;
      }
      if (!std::isfinite(v)) fault("non-finite function value", e, env);
      return v;
    }

    case NodeKind::Inverse: {
      double y = eval(e.argument(), env);
      return solve_inverse(e, y, env);
    }
  }
  fault("unhandled node", e, env);
}

double solve_inverse(const Expr& node, double y, const Env& outer) {
  const Expr& g = node.inverse_target();
  const std::string& var = node.inverse_var();
  Env local;
  local.set(var, 0.0);
  auto g_at = [&](double x) {
    local.set(var, x);
    return eval(g, local);
  };

  Interval b = node.inverse_bracket();
  double lo = b.lo, hi = b.hi;
  if (!(lo < hi)) {
    lo -= 0.5;
    hi += 0.5;
  }
  double flo = g_at(lo), fhi = g_at(hi);
  const bool increasing = fhi >= flo;

  double span = hi - lo;
  for (int i = 0; i < 200 && ((increasing && (y < flo || y > fhi)) ||
                              (!increasing && (y > flo || y < fhi)));
       ++i) {
    span *= 1.5;
    if (increasing ? y < flo : y > flo) {
      lo -= span;
      flo = g_at(lo);
    } else {
      hi += span;
      fhi = g_at(hi);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw InversionFailure("cannot bracket " + std::to_string(y) +
                             " for inverse of '" + g.str() + "'");
  }
  if (increasing ? (y < flo || y > fhi) : (y > flo || y < fhi))
    throw InversionFailure("cannot bracket " + std::to_string(y) +
                           " for inverse of '" + g.str() + "'");

  // Bisection to a tight bracket.
  for (int i = 0; i < 90 && hi - lo > 1e-14 * (1.0 + std::fabs(lo)); ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = g_at(mid);
    if ((fm <= y) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);

  // Newton polish.
  Expr gprime = differentiate(g, var);
  for (int i = 0; i < 4; ++i) {
    local.set(var, x);
    double fx = eval(g, local) - y;
    double dfx = eval(gprime, local);
    if (dfx == 0.0) break;
    double step = fx / dfx;
    double next = x - step;
    if (!std::isfinite(next)) break;
    x = next;
    if (std::fabs(step) <= 1e-16 * (1.0 + std::fabs(x))) break;
  }
  (void)outer;
  return x;
}

}  // namespace

double evaluate(const Expr& e, const Env& env) { return eval(e, env); }

// ---------------------------------------------------------------------------
// Substitution and canonical rebuild

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  switch (e.kind()) {
    case NodeKind::Constant:
      return e;
    case NodeKind::Variable: {
      auto it = bindings.find(e.name());
      return it == bindings.end() ? e : it->second;
    }
    case NodeKind::Sum: {
      std::vector<Expr> kids;
      for (const Expr& k : e.operands()) kids.push_back(substitute(k, bindings));
      return Expr::sum(std::move(kids));
    }
    case NodeKind::Product: {
      std::vector<Expr> kids;
      for (const Expr& k : e.operands()) kids.push_back(substitute(k, bindings));
      return Expr::product(std::move(kids));
    }
    case NodeKind::Power:
      return Expr::power(substitute(e.base(), bindings),
                         substitute(e.exponent(), bindings));
    case NodeKind::Call:
      return Expr::call(e.fn(), substitute(e.argument(), bindings));
    case NodeKind::Inverse:
      // The forward map is closed over its bound variable; only the argument
      // sees outer bindings.
      return Expr::inverse_of(e.inverse_target(), e.inverse_var(),
                              substitute(e.argument(), bindings),
                              e.inverse_bracket());
  }
  return e;
}

Expr recanonicalized(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Variable:
      return e;
    case NodeKind::Sum: {
      std::vector<Expr> kids;
      for (const Expr& k : e.operands()) kids.push_back(recanonicalized(k));
      return Expr::sum(std::move(kids));
    }
    case NodeKind::Product: {
      std::vector<Expr> kids;
      for (const Expr& k : e.operands()) kids.push_back(recanonicalized(k));
      return Expr::product(std::move(kids));
    }
    case NodeKind::Power:
      return Expr::power(recanonicalized(e.base()),
                         recanonicalized(e.exponent()));
    case NodeKind::Call:
      return Expr::call(e.fn(), recanonicalized(e.argument()));
    case NodeKind::Inverse:
      return Expr::inverse_of(recanonicalized(e.inverse_target()),
                              e.inverse_var(), recanonicalized(e.argument()),
                              e.inverse_bracket());
  }
  return e;
}

}  // namespace webgeo
