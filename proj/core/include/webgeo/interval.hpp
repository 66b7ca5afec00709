#pragma once

namespace webgeo {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double center() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double x, double margin = 0.0) const {
    return x >= lo + margin && x <= hi - margin;
  }
  /// Interval with endpoints in ascending order.
  static Interval ordered(double a, double b) {
    return a <= b ? Interval{a, b} : Interval{b, a};
  }
};

}  // namespace webgeo
