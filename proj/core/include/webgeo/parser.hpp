#pragma once

#include <span>
#include <string>
#include <string_view>

#include "webgeo/expr.hpp"

namespace webgeo {

/// Parses infix expression text over the given variable names.
///
/// Grammar: `^` (right-associative) > unary minus > `*` `/` > `+` `-`,
/// parentheses, function application `fn(arg)` for ln/exp/sin/cos/sqrt/abs,
/// and numeric literals. Integer literals become exact rationals; literals
/// with a decimal point or exponent become doubles. Throws SyntaxError with
/// a 0-based byte offset, or UnknownVariable for identifiers that are neither
/// declared variables nor function names.
Expr parse_expression(std::string_view text,
                      std::span<const std::string> variables);

/// True when `name` is usable as a variable: matches
/// [A-Za-z][A-Za-z0-9_]* and does not collide with a function name.
bool valid_variable_name(std::string_view name);

}  // namespace webgeo
