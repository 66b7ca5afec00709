#include "webgeo/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>

#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

std::optional<Func> function_by_name(std::string_view s) {
  if (s == "ln") return Func::Ln;
  if (s == "exp") return Func::Exp;
  if (s == "sin") return Func::Sin;
  if (s == "cos") return Func::Cos;
  if (s == "abs") return Func::Abs;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> vars)
      : text_(text), vars_(vars) {}

  Expr parse() {
    if (text_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw SyntaxError("empty expression", 0);
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError("unexpected input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      Expr rhs = parse_product();
      lhs = c == '+' ? Expr::sum({lhs, rhs})
                     : Expr::sum({lhs, Expr::negate(rhs)});
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      Expr rhs = parse_unary();
      lhs = c == '*' ? Expr::product({lhs, rhs}) : Expr::quotient(lhs, rhs);
    }
  }

  Expr parse_unary() {
    if (peek() == '-') {
      ++pos_;
      return Expr::negate(parse_unary());
    }
    if (peek() == '+') {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (peek() == '^') {
      ++pos_;
      // Right-associative; the exponent admits a sign: x^-2.
      Expr expo = parse_unary();
      return Expr::power(base, expo);
    }
    return base;
  }

  Expr parse_atom() {
    char c = peek();
    std::size_t start = pos_;
    if (c == '\0') throw SyntaxError("unexpected end of expression", pos_);

    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      if (peek() != ')') throw SyntaxError("expected ')'", pos_);
      ++pos_;
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number(start);

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_identifier(start);

    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number(std::size_t start) {
    bool decimal = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      decimal = true;
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        decimal = true;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to a following identifier, not the number
      }
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token == ".") throw SyntaxError("malformed number", start);
    if (!decimal && token.size() <= 18) {
      return Expr::integer(std::strtoll(token.c_str(), nullptr, 10));
    }
    return Expr::real(std::strtod(token.c_str(), nullptr));
  }

  Expr parse_identifier(std::size_t start) {
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));

    if (auto fn = function_by_name(name); fn || name == "sqrt") {
      if (peek() != '(')
        throw SyntaxError("expected '(' after function '" + name + "'", pos_);
      ++pos_;
      Expr arg = parse_sum();
      if (peek() != ')') throw SyntaxError("expected ')'", pos_);
      ++pos_;
      return fn ? Expr::call(*fn, arg) : Expr::sqrt(arg);
    }

    for (const std::string& v : vars_)
      if (v == name) return Expr::variable(name);
    throw UnknownVariable(name, start);
  }

  std::string_view text_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text,
                      std::span<const std::string> variables) {
  return Parser(text, variables).parse();
}

bool valid_variable_name(std::string_view name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !function_by_name(name) && name != "sqrt" && name != "inverse";
}

}  // namespace webgeo
