#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

namespace webgeo {

/// Exact rational scalar with a double fallback.
///
/// Arithmetic stays exact while both operands are exact and the result fits
/// in 64 bits; anything else degrades to a double value. This keeps small
/// structure constants like 3/2 exact through long symbolic pipelines without
/// pulling in arbitrary-precision arithmetic.
class Number {
 public:
  Number() : exact_(true), num_(0), den_(1), real_(0.0) {}

  static Number integer(long long v) { return Number(v, 1); }

  /// d must be nonzero. The sign lives in the numerator.
  static Number rational(long long n, long long d) { return Number(n, d); }

  static Number real(double v) {
    Number x;
    x.exact_ = false;
    x.real_ = v;
    return x;
  }

  bool exact() const { return exact_; }
  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return exact_ && den_ == 1; }

  double to_double() const {
    return exact_ ? static_cast<double>(num_) / static_cast<double>(den_)
                  : real_;
  }

  bool is_zero() const { return exact_ ? num_ == 0 : real_ == 0.0; }
  bool is_one() const { return exact_ ? (num_ == 1 && den_ == 1) : real_ == 1.0; }
  bool negative() const { return exact_ ? num_ < 0 : real_ < 0.0; }

  friend Number operator+(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) {
      __int128 n = static_cast<__int128>(a.num_) * b.den_ +
                   static_cast<__int128>(b.num_) * a.den_;
      __int128 d = static_cast<__int128>(a.den_) * b.den_;
      if (auto r = from_i128(n, d)) return *r;
    }
    return real(a.to_double() + b.to_double());
  }

  friend Number operator*(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) {
      __int128 n = static_cast<__int128>(a.num_) * b.num_;
      __int128 d = static_cast<__int128>(a.den_) * b.den_;
      if (auto r = from_i128(n, d)) return *r;
    }
    return real(a.to_double() * b.to_double());
  }

  Number operator-() const {
    if (exact_ && num_ != std::numeric_limits<long long>::min())
      return Number(-num_, den_);
    return real(-to_double());
  }

  friend Number operator-(const Number& a, const Number& b) { return a + (-b); }

  /// Empty when the value is zero.
  std::optional<Number> reciprocal() const {
    if (is_zero()) return std::nullopt;
    if (exact_) return Number(num_ < 0 ? -den_ : den_,
                              num_ < 0 ? -num_ : num_);
    return real(1.0 / real_);
  }

  /// base^e for integer e. Empty when the result is undefined (0 to a
  /// negative power) or does not fit in a finite double.
  static std::optional<Number> pow_integer(const Number& base, long long e) {
    if (e == 0) return integer(1);
    if (base.is_zero()) {
      if (e < 0) return std::nullopt;
      return integer(0);
    }
    if (base.exact_ && std::llabs(e) <= 512) {
      bool invert = e < 0;
      unsigned long long k = invert ? -static_cast<unsigned long long>(e) : e;
      __int128 n = 1, d = 1, bn = base.num_, bd = base.den_;
      bool ok = true;
      while (k && ok) {
        if (k & 1) {
          ok = mul_checked(n, bn) && mul_checked(d, bd);
        }
        k >>= 1;
        if (k && ok) ok = mul_checked(bn, bn) && mul_checked(bd, bd);
      }
      if (ok) {
        if (invert) std::swap(n, d);
        if (auto r = from_i128(n, d)) return *r;
      }
    }
    double v = std::pow(base.to_double(), static_cast<double>(e));
    if (!std::isfinite(v)) return std::nullopt;
    return real(v);
  }

  /// Value order with a deterministic tie-break: equal values compare the
  /// exact flavor first. compare(a, b) == 0 iff a and b are structurally the
  /// same constant.
  static int compare(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) {
      __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
      __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
      if (lhs != rhs) return lhs < rhs ? -1 : 1;
      return 0;
    }
    double av = a.to_double(), bv = b.to_double();
    if (av != bv) return av < bv ? -1 : 1;
    if (a.exact_ != b.exact_) return a.exact_ ? -1 : 1;
    return 0;
  }

  bool operator==(const Number& o) const { return compare(*this, o) == 0; }

  std::size_t hash() const {
    if (exact_)
      return std::hash<long long>{}(num_) * 1315423911u ^
             std::hash<long long>{}(den_);
    return std::hash<double>{}(real_);
  }

 private:
  Number(long long n, long long d) : exact_(true), real_(0.0) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = n;
    den_ = d;
  }

  static bool mul_checked(__int128& acc, __int128 f) {
    acc *= f;
    constexpr __int128 lim = static_cast<__int128>(1) << 100;
    return acc < lim && acc > -lim;
  }

  static std::optional<Number> from_i128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 an = n < 0 ? -n : n;
    __int128 g = gcd128(an, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = std::numeric_limits<long long>::max();
    if (n > lim || n < -lim || d > lim) return std::nullopt;
    Number r;
    r.exact_ = true;
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  bool exact_;
  long long num_ = 0;
  long long den_ = 1;
  double real_;
};

}  // namespace webgeo
