#include "webgeo/scalar_match.hpp"

#include <cmath>
#include <memory>

#include "webgeo/errors.hpp"
#include "webgeo/quadrature.hpp"

namespace webgeo {

ScalarMatch match_scalar_systems(const Expr& f, const std::string& var_src,
                                 const Expr& F, const std::string& var_dst,
                                 double x0, double X0, Interval range,
                                 int grid_points) {
  auto eval1 = [](const Expr& e, const std::string& var, double x) {
    Env env;
    env.set(var, x);
    return evaluate(e, env);
  };

  double f0 = eval1(f, var_src, x0);
  double F0 = eval1(F, var_dst, X0);
  if (f0 == 0.0 || F0 == 0.0)
    throw QuadratureFailure("right-hand side vanishes at the anchor");
  if ((f0 > 0.0) != (F0 > 0.0))
    throw SignMismatch(
        "1/f and 1/F have opposite signs; no monotone matching map passes "
        "through the anchor");

  // Expressions are captured by value; the returned map outlives the call.
  auto L = std::make_shared<Quadrature>(
      [f, var_src, eval1](double x) { return 1.0 / eval1(f, var_src, x); },
      x0, range);
  auto M = std::make_shared<Quadrature>(
      [F, var_dst, eval1](double X) { return 1.0 / eval1(F, var_dst, X); },
      X0, Interval{X0 - 0.5, X0 + 0.5});

  const double offset = M->value(X0) - L->value(x0);  // 0 by anchoring
  auto phi = [L, M, offset](double x) { return M->invert(L->value(x) + offset); };
  auto phi_deriv = [phi, F, var_dst, eval1, f, var_src](double x) {
    // Exact relation along the matching map.
    return eval1(F, var_dst, phi(x)) / eval1(f, var_src, x);
  };
  auto phi_inverse = [L, M, offset](double y) {
    return L->invert(M->value(y) - offset);
  };

  ScalarMatch out{
      WebMap(MapComponent::symbolic(Expr::variable("t"), "t"),
             {MapComponent::numeric(phi, phi_deriv, phi_inverse)}),
      0.0,
      {}};

  // Independent residual check: central-difference derivative of phi_1.
  const int n = grid_points < 2 ? 2 : grid_points;
  const double h = 1e-4 * std::max(1.0, 0.5 * (std::fabs(range.lo) + std::fabs(range.hi)));
  for (int k = 0; k < n; ++k) {
    double x = range.lo + range.width() * k / (n - 1);
    double p = phi(x);
    double dp = (phi(x + h) - phi(x - h)) / (2.0 * h);
    double lhs = eval1(F, var_dst, p);
    double rhs = dp * eval1(f, var_src, x);
    double res = std::fabs(lhs - rhs) / (1.0 + std::fabs(lhs));
    out.table.push_back({x, p, res});
    out.max_residual = std::max(out.max_residual, res);
  }
  return out;
}

}  // namespace webgeo
