#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webgeo/env.hpp"
#include "webgeo/interval.hpp"
#include "webgeo/number.hpp"

namespace webgeo {

enum class NodeKind { Constant, Variable, Sum, Product, Power, Call, Inverse };

/// Unary functions kept as explicit nodes. sqrt is normalized to a rational
/// power at construction and only reappears in printed output.
enum class Func { Ln, Exp, Sin, Cos, Abs };

struct ExprNode;

/// Immutable symbolic expression with value semantics.
///
/// Every factory returns a canonical tree: sums and products are flattened
/// with sorted operands, constants are folded exactly (rational arithmetic
/// until it overflows), like terms are collected (x - x becomes 0), powers of
/// a common base are merged (x/x becomes 1, valid off the zero set of x), and
/// the inverse pairs ln(exp u) -> u, exp(ln u) -> u are rewritten; the latter
/// holds where u > 0, which is the regime all numeric work in this library
/// restricts itself to. Negation and quotients are representational sugar:
/// they canonicalize to products with a -1 coefficient resp. negative powers,
/// and the printer restores the usual surface form.
///
/// Structural equality of canonical trees is the library's notion of symbolic
/// equality; it is deliberately weaker than mathematical equality (no zero
/// test for mixed transcendental identities), and every consumer that needs
/// more backs it with numeric sampling.
class Expr {
 public:
  /// Zero.
  Expr();

  static Expr constant(const Number& n);
  static Expr integer(long long v);
  static Expr rational(long long num, long long den);
  static Expr real(double v);
  static Expr variable(std::string name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, Expr exponent);
  static Expr power(Expr base, long long exponent);
  static Expr quotient(Expr num, Expr den);
  static Expr negate(Expr e);
  static Expr call(Func fn, Expr argument);
  static Expr ln(Expr e) { return call(Func::Ln, std::move(e)); }
  static Expr exp(Expr e) { return call(Func::Exp, std::move(e)); }
  static Expr sin(Expr e) { return call(Func::Sin, std::move(e)); }
  static Expr cos(Expr e) { return call(Func::Cos, std::move(e)); }
  static Expr abs(Expr e) { return call(Func::Abs, std::move(e)); }
  static Expr sqrt(Expr e);

  /// The inverse function of a strictly monotone univariate map `forward`
  /// (an expression in `var` alone), applied to `argument`. Evaluation
  /// solves forward(xi) = y numerically starting from `bracket`, expanding
  /// it as needed; differentiation uses the inverse-function rule, so the
  /// node composes with the rest of the calculus. The bracket is an
  /// evaluation hint and does not take part in structural identity.
  static Expr inverse_of(Expr forward, std::string var, Expr argument,
                         Interval bracket);

  NodeKind kind() const;
  const Number& number() const;       // Constant
  const std::string& name() const;    // Variable
  std::span<const Expr> operands() const;  // Sum / Product
  const Expr& base() const;           // Power
  const Expr& exponent() const;       // Power
  Func fn() const;                    // Call
  const Expr& argument() const;       // Call / Inverse
  const Expr& inverse_target() const;      // Inverse: the forward map
  const std::string& inverse_var() const;  // Inverse: its bound variable
  Interval inverse_bracket() const;

  bool is_constant() const { return kind() == NodeKind::Constant; }
  bool is_zero() const;
  bool is_one() const;
  /// Constant with an exact integer value.
  bool is_integer() const;
  bool depends_on(std::string_view var) const;
  void collect_variables(std::set<std::string>& out) const;

  /// Canonical total order used for operand sorting. 0 iff structurally equal.
  static int compare(const Expr& a, const Expr& b);
  bool operator==(const Expr& o) const { return compare(*this, o) == 0; }
  bool operator!=(const Expr& o) const { return !(*this == o); }

  /// Grammar-compatible rendering; re-parsing yields an equal canonical tree
  /// (inverse nodes excepted — they have no surface syntax).
  std::string str() const;

  std::size_t hash() const;

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  friend struct ExprBuilder;
  std::shared_ptr<const ExprNode> node_;
};

std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Partial derivative with respect to `var`; total on well-formed trees.
/// ln differentiates by the logarithmic rule d(ln u) = du/u, which is also
/// the derivative of ln|u| wherever u is nonzero.
Expr differentiate(const Expr& e, std::string_view var);

/// IEEE-double evaluation. Throws DomainFault (carrying the offending
/// subexpression and the point) on log of a nonpositive value, division by
/// zero, fractional powers of negative values, and non-finite results;
/// throws InversionFailure when an inverse node cannot be bracketed.
double evaluate(const Expr& e, const Env& env);

/// Simultaneous substitution; bindings missing from the tree are ignored.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

/// Rebuilds the tree bottom-up through the canonical factories. Used to
/// check idempotence of canonicalization; a no-op on already-canonical trees.
Expr recanonicalized(const Expr& e);

}  // namespace webgeo
