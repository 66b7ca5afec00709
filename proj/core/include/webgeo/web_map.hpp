#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "webgeo/expr.hpp"
#include "webgeo/ode_system.hpp"

namespace webgeo {

/// One strictly monotone coordinate map of a product diffeomorphism: either
/// a symbolic expression in its single variable, or (for maps produced by
/// the scalar matching construction) a numeric evaluator triple.
class MapComponent {
 public:
  static MapComponent symbolic(Expr forward, std::string var);
  static MapComponent numeric(std::function<double(double)> value,
                              std::function<double(double)> derivative,
                              std::function<double(double)> inverse);

  bool is_symbolic() const { return forward_.has_value(); }
  const Expr& forward() const { return *forward_; }
  const std::string& var() const { return var_; }

  double value(double x) const;
  double derivative(double x) const;
  double inverse(double y) const;

  /// Inverse as an expression in `out_var`. Structural inversion handles
  /// chains of affine pieces, exp/ln, odd reciprocals and square roots;
  /// anything else falls back to an inverse node solved numerically over
  /// `domain`. Empty only for numeric components.
  std::optional<Expr> inverse_expr(const std::string& out_var,
                                   Interval domain) const;

 private:
  std::optional<Expr> forward_;
  std::string var_;
  std::function<double(double)> value_fn_, deriv_fn_, inverse_fn_;
};

/// A web transformation: (t, x_1, ..., x_n) -> (phi_0(t), phi_1(x_1), ...,
/// phi_n(x_n)), each component depending on its own coordinate alone.
class WebMap {
 public:
  WebMap(MapComponent time, std::vector<MapComponent> space);

  static WebMap identity(const OdeSystem& sys);

  int dimension() const { return static_cast<int>(space_.size()); }
  const MapComponent& time() const { return time_; }
  const MapComponent& space(int i) const {  // 0-based
    return space_[static_cast<std::size_t>(i)];
  }

  Point apply(const Point& p) const;

  /// Derivative signs at the interval centers (orientation data).
  std::vector<int> orientation(const Box& box) const;

  /// Verifies every component's derivative is bounded away from zero with a
  /// constant sign on a sampled grid of the box; throws InversionFailure.
  void check_monotone(const Box& box) const;

 private:
  MapComponent time_;
  std::vector<MapComponent> space_;
};

}  // namespace webgeo
