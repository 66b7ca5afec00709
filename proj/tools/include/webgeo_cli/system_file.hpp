#pragma once

#include <string>
#include <vector>

#include "webgeo/ode_system.hpp"
#include "webgeo/web_map.hpp"

namespace webgeo::cli {

/// Parses a system definition document:
///
///   # comment
///   vars: x1 x2
///   f1 = x1*x2
///   f2 = x2
///   box: x1 in [1,2]
///
/// One `fi = <expr>` per declared variable; `box:` lines are optional and
/// default to [1,2]. Variable names match [A-Za-z][A-Za-z0-9_]*; `t` and the
/// function names are reserved. Right-hand sides may mention t syntactically
/// (validation reports it as an autonomy violation).
OdeSystem parse_system_text(const std::string& text);
OdeSystem load_system_file(const std::string& path);

/// Parses a map document over the source system's variables:
///
///   phi0 = 2*t + 1
///   phi1 = exp(x1)
///   phi2 = 3*x2 - 1
///
/// phi0 is an expression in t; phi_i in the i-th source variable alone.
/// Monotonicity on the source box is checked numerically.
WebMap parse_map_text(const std::string& text, const OdeSystem& src);
WebMap load_map_file(const std::string& path, const OdeSystem& src);

}  // namespace webgeo::cli
