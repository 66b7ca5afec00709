#include "webgeo/web_map.hpp"

#include <cmath>

#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

// Structural inversion of y = g(x) for a chain of invertible univariate
// steps. `value` starts as the expression for y and is peeled until g is the
// bare variable. Returns the expression for x in terms of `value`'s
// variables, or nothing when a step has no closed form.
std::optional<Expr> invert_chain(Expr g, const std::string& var, Expr value) {
  for (int guard = 0; guard < 64; ++guard) {
    if (!g.depends_on(var)) return std::nullopt;

    switch (g.kind()) {
      case NodeKind::Variable:
        return value;

      case NodeKind::Sum: {
        // Split off the part independent of var; the dependent remainder
        // must be a single chain.
        std::vector<Expr> dep, indep;
        for (const Expr& t : g.operands())
          (t.depends_on(var) ? dep : indep).push_back(t);
        if (dep.size() != 1) return std::nullopt;
        value = Expr::sum({value, Expr::negate(Expr::sum(std::move(indep)))});
        g = dep.front();
        continue;
      }

      case NodeKind::Product: {
        std::vector<Expr> dep, indep;
        for (const Expr& f : g.operands())
          (f.depends_on(var) ? dep : indep).push_back(f);
        if (dep.size() != 1) return std::nullopt;
        value = Expr::quotient(value, Expr::product(std::move(indep)));
        g = dep.front();
        continue;
      }

      case NodeKind::Power: {
        if (g.exponent().depends_on(var)) return std::nullopt;
        const Expr& e = g.exponent();
        if (!e.is_constant() || !e.number().exact()) return std::nullopt;
        long long num = e.number().num(), den = e.number().den();
        // x^(p/q) inverts as y^(q/p) when the overall map is monotone:
        // odd p keeps the sign, q in {1,2} covers roots we can re-apply.
        if (den != 1 && den != 2) return std::nullopt;
        if (num % 2 == 0) return std::nullopt;  // even power, not injective
        value = Expr::power(value, Expr::rational(den, num));
        g = g.base();
        continue;
      }

      case NodeKind::Call: {
        Expr arg = g.argument();
        switch (g.fn()) {
          case Func::Ln:
            value = Expr::exp(value);
            break;
          case Func::Exp:
            value = Expr::ln(value);
            break;
          default:
            return std::nullopt;  // sin/cos/abs are not globally injective
        }
        g = std::move(arg);
        continue;
      }

      case NodeKind::Inverse: {
        // The inverse of an inverse node is its forward map.
        if (g.argument().kind() != NodeKind::Variable) return std::nullopt;
        const Expr fwd = g.inverse_target();
        value = substitute(fwd, {{g.inverse_var(), value}});
        return value;
      }

      case NodeKind::Constant:
        return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

MapComponent MapComponent::symbolic(Expr forward, std::string var) {
  MapComponent c;
  c.forward_ = std::move(forward);
  c.var_ = std::move(var);
  return c;
}

MapComponent MapComponent::numeric(std::function<double(double)> value,
                                   std::function<double(double)> derivative,
                                   std::function<double(double)> inverse) {
  MapComponent c;
  c.value_fn_ = std::move(value);
  c.deriv_fn_ = std::move(derivative);
  c.inverse_fn_ = std::move(inverse);
  c.var_ = "x";
  return c;
}

double MapComponent::value(double x) const {
  if (!forward_) return value_fn_(x);
  Env env;
  env.set(var_, x);
  return evaluate(*forward_, env);
}

double MapComponent::derivative(double x) const {
  if (!forward_) return deriv_fn_(x);
  Env env;
  env.set(var_, x);
  return evaluate(differentiate(*forward_, var_), env);
}

double MapComponent::inverse(double y) const {
  if (!forward_) return inverse_fn_(y);
  Expr inv = Expr::inverse_of(*forward_, var_, Expr::variable("y"),
                              Interval{-1.0, 1.0});
  Env env;
  env.set("y", y);
  return evaluate(inv, env);
}

std::optional<Expr> MapComponent::inverse_expr(const std::string& out_var,
                                               Interval domain) const {
  if (!forward_) return std::nullopt;
  if (auto closed = invert_chain(*forward_, var_, Expr::variable(out_var)))
    return closed;
  return Expr::inverse_of(*forward_, var_, Expr::variable(out_var), domain);
}

WebMap::WebMap(MapComponent time, std::vector<MapComponent> space)
    : time_(std::move(time)), space_(std::move(space)) {
  for (std::size_t i = 0; i < space_.size(); ++i) {
    const MapComponent& c = space_[i];
    if (!c.is_symbolic()) continue;
    std::set<std::string> vars;
    c.forward().collect_variables(vars);
    vars.erase(c.var());
    if (!vars.empty())
      throw InvalidSystem("map component " + std::to_string(i + 1) +
                          " depends on '" + *vars.begin() +
                          "'; web transformations are componentwise");
  }
  if (time_.is_symbolic()) {
    std::set<std::string> vars;
    time_.forward().collect_variables(vars);
    vars.erase(time_.var());
    if (!vars.empty())
      throw InvalidSystem("time component depends on '" + *vars.begin() + "'");
  }
}

WebMap WebMap::identity(const OdeSystem& sys) {
  std::vector<MapComponent> space;
  for (int i = 0; i < sys.dimension(); ++i)
    space.push_back(
        MapComponent::symbolic(Expr::variable(sys.variable(i)), sys.variable(i)));
  return WebMap(MapComponent::symbolic(Expr::variable("t"), "t"), std::move(space));
}

Point WebMap::apply(const Point& p) const {
  Point out;
  out.t = time_.value(p.t);
  out.x.reserve(p.x.size());
  for (std::size_t i = 0; i < p.x.size(); ++i)
    out.x.push_back(space_[i].value(p.x[i]));
  return out;
}

std::vector<int> WebMap::orientation(const Box& box) const {
  std::vector<int> signs;
  signs.push_back(time_.derivative(box.t.center()) >= 0 ? 1 : -1);
  for (std::size_t i = 0; i < space_.size(); ++i)
    signs.push_back(space_[i].derivative(box.x[i].center()) >= 0 ? 1 : -1);
  return signs;
}

void WebMap::check_monotone(const Box& box) const {
  auto check = [](const MapComponent& c, const Interval& iv,
                  const std::string& label) {
    const int grid = 21;
    int sign = 0;
    for (int k = 0; k < grid; ++k) {
      double x = iv.lo + iv.width() * k / (grid - 1);
      double d = c.derivative(x);
      if (!std::isfinite(d) || std::fabs(d) < 1e-12)
        throw InversionFailure("component " + label +
                               " has a vanishing derivative near " +
                               std::to_string(x));
      int s = d > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (s != sign)
        throw InversionFailure("component " + label +
                               " changes monotonicity inside the box");
    }
  };
  check(time_, box.t, "phi0");
  for (std::size_t i = 0; i < space_.size(); ++i)
    check(space_[i], box.x[i], "phi" + std::to_string(i + 1));
}

}  // namespace webgeo
