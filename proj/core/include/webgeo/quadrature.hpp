#pragma once

#include <functional>
#include <vector>

#include "webgeo/interval.hpp"

namespace webgeo {

/// Numeric antiderivative of a sign-definite integrand, anchored at a base
/// point: value(x) = integral from x0 to x. Built for the scalar matching
/// construction where the integrand is 1/f with f nonvanishing; strict
/// monotonicity of the result is enforced at construction and makes the
/// inversion well posed.
///
/// Integration is adaptive Gauss-Kronrod (G7/K15) refinement to the given
/// absolute tolerance. Values are cached on a monotone node table that grows
/// as evaluations and inversions extend the covered range; the cache is
/// append-only and not synchronized, so confine each instance to one worker.
class Quadrature {
 public:
  Quadrature(std::function<double(double)> integrand, double base_point,
             Interval initial, double abs_tol = 1e-12);

  double base_point() const { return x0_; }
  /// Sign of the integrand (constant by construction).
  int direction() const { return sign_; }

  double value(double x) const;

  /// Solves value(x) = y, extending the covered range adaptively.
  /// The residual |value(invert(y)) - y| stays below 1e-10 by construction
  /// (the node table is integrated to a tighter tolerance than that).
  double invert(double y) const;

 private:
  struct Node {
    double x;
    double v;  // value(x)
  };

  double integrate(double a, double b) const;
  double integrate_adaptive(double a, double b, double tol, int depth) const;
  void extend_to(double x) const;
  const Node& node(std::size_t i) const { return table_[i]; }

  std::function<double(double)> f_;
  double x0_;
  double tol_;
  int sign_ = 0;
  mutable std::vector<Node> table_;  // ascending in x
};

}  // namespace webgeo
