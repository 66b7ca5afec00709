#include <cstdio>
#include <ostream>
#include <string>

#include "webgeo/expr.hpp"

namespace webgeo {

namespace {

// Precedence levels used for parenthesization, mirroring the parser:
// sum = 1, product/quotient = 2, power = 3, atom = 4.
enum Prec { kSum = 1, kProduct = 2, kPower = 3, kAtom = 4 };

std::string render(const Expr& e, int parent);

std::string render_number(const Number& n) {
  if (n.exact()) {
    std::string s = std::to_string(n.num());
    if (n.den() != 1) s += "/" + std::to_string(n.den());
    return s;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", n.to_double());
  std::string s(buf);
  // Decimal literals must stay decimal through a re-parse.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Ln: return "ln";
    case Func::Exp: return "exp";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Abs: return "abs";
  }
  return "?";
}

bool is_half(const Number& n) {
  return n.exact() && n.num() == 1 && n.den() == 2;
}

// Renders a product (or a lone factor) as numerator/denominator, pulling
// negative exponents below the bar. `leading_minus` is reported to the
// caller instead of being printed so sums can typeset "a - b".
struct QuotientParts {
  std::string text;
  bool negative = false;
};

QuotientParts render_quotient(const Expr& e) {
  std::vector<Expr> factors;
  if (e.kind() == NodeKind::Product) {
    auto ops = e.operands();
    factors.assign(ops.begin(), ops.end());
  } else {
    factors.push_back(e);
  }

  QuotientParts out;
  std::vector<std::string> num, den;
  for (const Expr& f : factors) {
    if (f.is_constant()) {
      const Number& c = f.number();
      if (c.exact()) {
        long long p = c.num(), q = c.den();
        if (p < 0) {
          out.negative = !out.negative;
          p = -p;
        }
        if (p != 1 || (q == 1 && factors.size() == 1))
          num.push_back(std::to_string(p));
        if (q != 1) den.push_back(std::to_string(q));
      } else {
        double v = c.to_double();
        if (v < 0) out.negative = !out.negative;
        num.push_back(render_number(Number::real(v < 0 ? -v : v)));
      }
      continue;
    }
    if (f.kind() == NodeKind::Power && f.exponent().is_constant() &&
        f.exponent().number().negative()) {
      Expr flipped = Expr::power(f.base(), Expr::constant(-f.exponent().number()));
      den.push_back(render(flipped, kProduct + 1));
      continue;
    }
    num.push_back(render(f, kProduct));
  }

  std::string ns;
  if (num.empty()) {
    ns = "1";
  } else {
    for (std::size_t i = 0; i < num.size(); ++i) {
      if (i) ns += "*";
      ns += num[i];
    }
  }
  if (den.empty()) {
    out.text = ns;
    return out;
  }
  std::string ds;
  if (den.size() == 1) {
    ds = den.front();
  } else {
    ds = "(";
    for (std::size_t i = 0; i < den.size(); ++i) {
      if (i) ds += "*";
      ds += den[i];
    }
    ds += ")";
  }
  out.text = ns + "/" + ds;
  return out;
}

std::string render(const Expr& e, int parent) {
  switch (e.kind()) {
    case NodeKind::Constant: {
      std::string s = render_number(e.number());
      bool neg = e.number().negative();
      bool fraction = e.number().exact() && e.number().den() != 1;
      if ((neg && parent > kSum) || (fraction && parent > kProduct))
        return "(" + s + ")";
      return s;
    }

    case NodeKind::Variable:
      return e.name();

    case NodeKind::Sum: {
      std::string s;
      bool first = true;
      for (const Expr& t : e.operands()) {
        QuotientParts part = render_quotient(t);
        if (first) {
          s += (part.negative ? "-" : "") + part.text;
          first = false;
        } else {
          s += (part.negative ? " - " : " + ") + part.text;
        }
      }
      if (parent > kSum) return "(" + s + ")";
      return s;
    }

    case NodeKind::Product: {
      QuotientParts part = render_quotient(e);
      std::string s = (part.negative ? "-" : "") + part.text;
      if (parent > kProduct || (part.negative && parent > kSum))
        return "(" + s + ")";
      return s;
    }

    case NodeKind::Power: {
      const Expr& b = e.base();
      const Expr& x = e.exponent();
      if (x.is_constant() && is_half(x.number()))
        return "sqrt(" + render(b, kSum) + ")";
      if (x.is_constant() && x.number().negative()) {
        QuotientParts part = render_quotient(e);
        std::string s = (part.negative ? "-" : "") + part.text;
        if (parent > kProduct || (part.negative && parent > kSum))
          return "(" + s + ")";
        return s;
      }
      // Power is right-associative, so a power base must be parenthesized;
      // other composite bases get parens from their own parent check.
      std::string bs = render(b, kAtom);
      if (b.kind() == NodeKind::Power) bs = "(" + bs + ")";
      std::string xs = render(x, kPower);
      return bs + "^" + xs;
    }

    case NodeKind::Call:
      return std::string(func_name(e.fn())) + "(" +
             render(e.argument(), kSum) + ")";

    case NodeKind::Inverse:
      // No surface syntax; rendered for diagnostics only.
      return "inverse(" + e.inverse_var() + ": " +
             render(e.inverse_target(), kSum) + ")(" +
             render(e.argument(), kSum) + ")";
  }
  return "?";
}

}  // namespace

std::string Expr::str() const { return render(*this, kSum); }

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  return os << e.str();
}

}  // namespace webgeo
