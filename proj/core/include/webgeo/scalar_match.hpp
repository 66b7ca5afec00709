#pragma once

#include <string>
#include <vector>

#include "webgeo/expr.hpp"
#include "webgeo/interval.hpp"
#include "webgeo/web_map.hpp"

namespace webgeo {

/// Result of matching two scalar autonomous equations dx/dt = f(x) and
/// dX/dT = F(X) by a web transformation through the anchor (x0, X0).
///
/// The matching map is phi_0 = identity and
///   phi_1 = M^{-1}( L(x) - L(x0) + M(X0) ),
/// where L and M are numeric antiderivatives of 1/f and 1/F. This realizes
/// the defining relation F(phi_1(x)) = phi_1'(x) f(x); the residual table
/// checks it independently with a central-difference derivative of phi_1.
struct ScalarMatch {
  WebMap map;
  double max_residual = 0.0;

  struct Row {
    double x;
    double phi;
    double residual;
  };
  std::vector<Row> table;  // grid over the requested range
};

/// f and F are expressions in `var_src` resp. `var_dst`, both nonvanishing
/// near their anchors. The residual grid has `grid_points` samples over
/// `range` (around x0). Throws SignMismatch when 1/f and 1/F have opposite
/// signs, and QuadratureFailure when integration or inversion fails.
ScalarMatch match_scalar_systems(const Expr& f, const std::string& var_src,
                                 const Expr& F, const std::string& var_dst,
                                 double x0, double X0, Interval range,
                                 int grid_points = 101);

}  // namespace webgeo
