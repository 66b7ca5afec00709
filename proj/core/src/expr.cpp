#include "webgeo/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "webgeo/errors.hpp"

namespace webgeo {

struct ExprNode {
  NodeKind kind;
  Number num;             // Constant
  std::string name;       // Variable; Inverse: bound variable
  Func fn{Func::Ln};      // Call
  std::vector<Expr> kids; // Sum/Product: operands; Power: {base, exponent};
                          // Call: {argument}; Inverse: {forward, argument}
  Interval bracket{0.0, 1.0};  // Inverse
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h * 1099511628211ull ^ (v + 0x9e3779b97f4a7c15ull + (h << 6));
}

std::shared_ptr<const ExprNode> finish(ExprNode node) {
  std::size_t h = static_cast<std::size_t>(node.kind) * 0x9e3779b9;
  switch (node.kind) {
    case NodeKind::Constant:
      h = mix(h, node.num.hash());
      break;
    case NodeKind::Variable:
      h = mix(h, std::hash<std::string>{}(node.name));
      break;
    case NodeKind::Call:
      h = mix(h, static_cast<std::size_t>(node.fn));
      break;
    case NodeKind::Inverse:
      h = mix(h, std::hash<std::string>{}(node.name));
      break;
    default:
      break;
  }
  for (const Expr& k : node.kids) h = mix(h, k.hash());
  node.hash = h;
  return std::make_shared<const ExprNode>(std::move(node));
}

int kind_rank(NodeKind k) {
  switch (k) {
    case NodeKind::Constant: return 0;
    case NodeKind::Variable: return 1;
    case NodeKind::Call: return 2;
    case NodeKind::Inverse: return 3;
    case NodeKind::Power: return 4;
    case NodeKind::Product: return 5;
    case NodeKind::Sum: return 6;
  }
  return 7;
}

}  // namespace

struct ExprBuilder {
  static Expr wrap(ExprNode node) { return Expr(finish(std::move(node))); }

  static const ExprNode& node(const Expr& e) { return *e.node_; }

  static Expr raw_sum(std::vector<Expr> kids) {
    ExprNode n;
    n.kind = NodeKind::Sum;
    n.kids = std::move(kids);
    return wrap(std::move(n));
  }

  static Expr raw_product(std::vector<Expr> kids) {
    ExprNode n;
    n.kind = NodeKind::Product;
    n.kids = std::move(kids);
    return wrap(std::move(n));
  }

  static Expr raw_power(Expr base, Expr exponent) {
    ExprNode n;
    n.kind = NodeKind::Power;
    n.kids = {std::move(base), std::move(exponent)};
    return wrap(std::move(n));
  }

  static Expr raw_call(Func fn, Expr arg) {
    ExprNode n;
    n.kind = NodeKind::Call;
    n.fn = fn;
    n.kids = {std::move(arg)};
    return wrap(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = Expr::integer(0);
  return z;
}
const Expr& one_expr() {
  static const Expr o = Expr::integer(1);
  return o;
}

bool expr_less(const Expr& a, const Expr& b) { return Expr::compare(a, b) < 0; }

// Splits a canonical term into (rational coefficient, constant-free core).
// The core of a constant is 1.
std::pair<Number, Expr> split_term(const Expr& t) {
  if (t.is_constant()) return {t.number(), one_expr()};
  if (t.kind() == NodeKind::Product) {
    auto ops = t.operands();
    if (ops.front().is_constant()) {
      if (ops.size() == 2) return {ops.front().number(), ops[1]};
      std::vector<Expr> rest(ops.begin() + 1, ops.end());
      return {ops.front().number(), ExprBuilder::raw_product(std::move(rest))};
    }
  }
  return {Number::integer(1), t};
}

// coefficient * core with both already canonical; coefficient nonzero and
// core != 1.
Expr make_term(const Number& coeff, const Expr& core) {
  if (coeff.is_one()) return core;
  std::vector<Expr> kids;
  kids.push_back(Expr::constant(coeff));
  if (core.kind() == NodeKind::Product) {
    auto ops = core.operands();
    kids.insert(kids.end(), ops.begin(), ops.end());
  } else {
    kids.push_back(core);
  }
  return ExprBuilder::raw_product(std::move(kids));
}

// Splits a canonical factor into (base, exponent).
std::pair<Expr, Expr> split_factor(const Expr& f) {
  if (f.kind() == NodeKind::Power) return {f.base(), f.exponent()};
  return {f, one_expr()};
}

}  // namespace

// ---------------------------------------------------------------------------
// Factories

Expr::Expr() { *this = zero_expr(); }

Expr Expr::constant(const Number& n) {
  ExprNode node;
  node.kind = NodeKind::Constant;
  node.num = n;
  return ExprBuilder::wrap(std::move(node));
}

Expr Expr::integer(long long v) { return constant(Number::integer(v)); }

Expr Expr::rational(long long num, long long den) {
  return constant(Number::rational(num, den));
}

Expr Expr::real(double v) { return constant(Number::real(v)); }

Expr Expr::variable(std::string name) {
  ExprNode node;
  node.kind = NodeKind::Variable;
  node.name = std::move(name);
  return ExprBuilder::wrap(std::move(node));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (Expr& t : terms) {
    if (t.kind() == NodeKind::Sum) {
      auto ops = t.operands();
      flat.insert(flat.end(), ops.begin(), ops.end());
    } else {
      flat.push_back(std::move(t));
    }
  }

  Number constant_part = Number::integer(0);
  std::vector<std::pair<Expr, Number>> collected;  // core -> coefficient
  for (const Expr& t : flat) {
    auto [coeff, core] = split_term(t);
    if (core.is_one()) {
      constant_part = constant_part + coeff;
      continue;
    }
    bool merged = false;
    for (auto& entry : collected)
      if (entry.first == core) {
        entry.second = entry.second + coeff;
        merged = true;
        break;
      }
    if (!merged) collected.emplace_back(core, coeff);
  }

  std::vector<Expr> out;
  out.reserve(collected.size() + 1);
  for (auto& [core, coeff] : collected)
    if (!coeff.is_zero()) out.push_back(make_term(coeff, core));
  if (!constant_part.is_zero()) out.push_back(constant(constant_part));

  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out.front();
  std::sort(out.begin(), out.end(), expr_less);
  return ExprBuilder::raw_sum(std::move(out));
}

Expr Expr::product(std::vector<Expr> factors) {
  // Flattening and base collection may expose new products (a merged power
  // can fold or distribute); loop until the factor set is stable.
  for (int pass = 0; pass < 16; ++pass) {
    std::vector<Expr> flat;
    flat.reserve(factors.size());
    bool reflatten = false;
    for (Expr& f : factors) {
      if (f.kind() == NodeKind::Product) {
        auto ops = f.operands();
        flat.insert(flat.end(), ops.begin(), ops.end());
      } else {
        flat.push_back(std::move(f));
      }
    }

    Number coeff = Number::integer(1);
    std::vector<std::pair<Expr, std::vector<Expr>>> bases;  // base -> exponents
    for (const Expr& f : flat) {
      if (f.is_constant()) {
        coeff = coeff * f.number();
        continue;
      }
      auto [base, expn] = split_factor(f);
      bool merged = false;
      for (auto& entry : bases)
        if (entry.first == base) {
          entry.second.push_back(expn);
          merged = true;
          break;
        }
      if (!merged) bases.push_back({base, {expn}});
    }
    if (coeff.is_zero()) return zero_expr();

    std::vector<Expr> out;
    out.reserve(bases.size() + 1);
    for (auto& [base, exps] : bases) {
      Expr total = exps.size() == 1 ? exps.front() : sum(std::move(exps));
      if (total.is_zero()) continue;  // x * 1/x -> 1, off the zero set of x
      Expr factor = total.is_one() ? base : power(base, total);
      if (factor.is_constant()) {
        coeff = coeff * factor.number();
        continue;
      }
      if (factor.kind() == NodeKind::Product) reflatten = true;
      out.push_back(std::move(factor));
    }
    if (coeff.is_zero()) return zero_expr();

    if (reflatten) {
      if (!coeff.is_one()) out.push_back(constant(coeff));
      factors = std::move(out);
      continue;
    }

    if (out.empty()) return constant(coeff);
    if (coeff.is_one() && out.size() == 1) return out.front();
    if (!coeff.is_one()) out.push_back(constant(coeff));
    std::sort(out.begin(), out.end(), expr_less);
    if (out.size() == 1) return out.front();
    return ExprBuilder::raw_product(std::move(out));
  }
  assert(false && "product canonicalization did not stabilize");
  return zero_expr();
}

Expr Expr::power(Expr base, long long exponent) {
  return power(std::move(base), integer(exponent));
}

Expr Expr::power(Expr base, Expr exponent) {
  if (exponent.is_zero()) return one_expr();  // x^0 -> 1, off the zero set
  if (exponent.is_one()) return base;
  if (base.is_one()) return one_expr();

  const bool exp_const = exponent.is_constant();
  const bool exp_int = exponent.is_integer();

  if (base.is_zero() && exp_const) {
    const Number& e = exponent.number();
    if (!e.negative() && !e.is_zero()) return zero_expr();
    // 0^negative stays symbolic and faults at evaluation time.
  }

  if (base.is_constant() && exp_int) {
    if (auto folded =
            Number::pow_integer(base.number(), exponent.number().num()))
      return constant(*folded);
  }

  // Exact square roots of rationals: (p/q)^(k/2) with p, q perfect squares.
  if (base.is_constant() && exp_const && !exp_int && exponent.number().exact() &&
      exponent.number().den() == 2 && base.number().exact() &&
      !base.number().negative()) {
    auto isqrt = [](long long v) -> long long {
      if (v < 0 || v > 4000000000000000000LL) return -1;
      long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
      while (r > 0 && r * r > v) --r;
      while ((r + 1) * (r + 1) <= v) ++r;
      return r * r == v ? r : -1;
    };
    long long sn = isqrt(base.number().num());
    long long sd = isqrt(base.number().den());
    if (sn >= 0 && sd > 0) {
      if (auto folded = Number::pow_integer(Number::rational(sn, sd),
                                            exponent.number().num()))
        return constant(*folded);
    }
  }

  if (base.kind() == NodeKind::Power && exp_int) {
    // (u^a)^n = u^(a n) for integer n.
    Expr inner_base = base.base();
    Expr merged = product({base.exponent(), exponent});
    return power(std::move(inner_base), std::move(merged));
  }

  if (base.kind() == NodeKind::Product && exp_int) {
    std::vector<Expr> distributed;
    for (const Expr& f : base.operands())
      distributed.push_back(power(f, exponent));
    return product(std::move(distributed));
  }

  return ExprBuilder::raw_power(std::move(base), std::move(exponent));
}

Expr Expr::quotient(Expr num, Expr den) {
  return product({std::move(num), power(std::move(den), -1)});
}

Expr Expr::negate(Expr e) { return product({integer(-1), std::move(e)}); }

Expr Expr::sqrt(Expr e) { return power(std::move(e), rational(1, 2)); }

Expr Expr::call(Func fn, Expr argument) {
  switch (fn) {
    case Func::Ln:
      if (argument.is_one()) return zero_expr();
      if (argument.kind() == NodeKind::Call && argument.fn() == Func::Exp)
        return argument.argument();  // ln(exp u) = u, total
      if (argument.is_constant() && !argument.number().exact()) {
        double v = argument.number().to_double();
        if (v > 0.0) return real(std::log(v));
      }
      break;
    case Func::Exp:
      if (argument.is_zero()) return one_expr();
      if (argument.kind() == NodeKind::Call && argument.fn() == Func::Ln)
        return argument.argument();  // exp(ln u) = u, valid where u > 0
      if (argument.is_constant() && !argument.number().exact()) {
        double v = std::exp(argument.number().to_double());
        if (std::isfinite(v)) return real(v);
      }
      break;
    case Func::Sin:
      if (argument.is_zero()) return zero_expr();
      if (argument.is_constant() && !argument.number().exact())
        return real(std::sin(argument.number().to_double()));
      break;
    case Func::Cos:
      if (argument.is_zero()) return one_expr();
      if (argument.is_constant() && !argument.number().exact())
        return real(std::cos(argument.number().to_double()));
      break;
    case Func::Abs:
      if (argument.is_constant()) {
        const Number& v = argument.number();
        return v.negative() ? constant(-v) : argument;
      }
      if (argument.kind() == NodeKind::Call &&
          (argument.fn() == Func::Abs || argument.fn() == Func::Exp))
        return argument;  // |.| idempotent; exp is positive
      break;
  }
  return ExprBuilder::raw_call(fn, std::move(argument));
}

Expr Expr::inverse_of(Expr forward, std::string var, Expr argument,
                      Interval bracket) {
  if (forward.kind() == NodeKind::Variable && forward.name() == var)
    return argument;  // identity map
  ExprNode node;
  node.kind = NodeKind::Inverse;
  node.name = std::move(var);
  node.kids = {std::move(forward), std::move(argument)};
  node.bracket = bracket;
  return ExprBuilder::wrap(std::move(node));
}

// ---------------------------------------------------------------------------
// Observers

NodeKind Expr::kind() const { return node_->kind; }
const Number& Expr::number() const { return node_->num; }
const std::string& Expr::name() const { return node_->name; }
std::span<const Expr> Expr::operands() const { return node_->kids; }
const Expr& Expr::base() const { return node_->kids[0]; }
const Expr& Expr::exponent() const { return node_->kids[1]; }
Func Expr::fn() const { return node_->fn; }

const Expr& Expr::argument() const {
  return node_->kind == NodeKind::Inverse ? node_->kids[1] : node_->kids[0];
}

const Expr& Expr::inverse_target() const { return node_->kids[0]; }
const std::string& Expr::inverse_var() const { return node_->name; }
Interval Expr::inverse_bracket() const { return node_->bracket; }

bool Expr::is_zero() const { return is_constant() && node_->num.is_zero(); }
bool Expr::is_one() const { return is_constant() && node_->num.is_one(); }
bool Expr::is_integer() const {
  return is_constant() && node_->num.is_integer();
}

bool Expr::depends_on(std::string_view var) const {
  switch (kind()) {
    case NodeKind::Constant:
      return false;
    case NodeKind::Variable:
      return node_->name == var;
    case NodeKind::Inverse:
      // The forward map is closed over its own bound variable.
      return argument().depends_on(var);
    default:
      for (const Expr& k : node_->kids)
        if (k.depends_on(var)) return true;
      return false;
  }
}

void Expr::collect_variables(std::set<std::string>& out) const {
  switch (kind()) {
    case NodeKind::Constant:
      return;
    case NodeKind::Variable:
      out.insert(node_->name);
      return;
    case NodeKind::Inverse:
      argument().collect_variables(out);
      return;
    default:
      for (const Expr& k : node_->kids) k.collect_variables(out);
  }
}

std::size_t Expr::hash() const { return node_->hash; }

int Expr::compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case NodeKind::Constant:
      return Number::compare(a.number(), b.number());
    case NodeKind::Variable:
      return a.name().compare(b.name());
    case NodeKind::Call: {
      if (a.fn() != b.fn())
        return static_cast<int>(a.fn()) < static_cast<int>(b.fn()) ? -1 : 1;
      return compare(a.argument(), b.argument());
    }
    case NodeKind::Inverse: {
      if (int c = compare(a.inverse_target(), b.inverse_target())) return c;
      if (int c = a.inverse_var().compare(b.inverse_var())) return c;
      return compare(a.argument(), b.argument());
    }
    case NodeKind::Power: {
      if (int c = compare(a.base(), b.base())) return c;
      return compare(a.exponent(), b.exponent());
    }
    case NodeKind::Product:
    case NodeKind::Sum: {
      auto oa = a.operands(), ob = b.operands();
      std::size_t m = std::min(oa.size(), ob.size());
      for (std::size_t i = 0; i < m; ++i)
        if (int c = compare(oa[i], ob[i])) return c;
      if (oa.size() != ob.size()) return oa.size() < ob.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

}  // namespace webgeo
