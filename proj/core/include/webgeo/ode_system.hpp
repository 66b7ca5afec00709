#pragma once

#include <string>
#include <vector>

#include "webgeo/expr.hpp"
#include "webgeo/interval.hpp"

namespace webgeo {

/// Sampling region: one interval per state variable, plus a time interval
/// (the dynamics never depend on it; points still carry a t value).
struct Box {
  std::vector<Interval> x;
  Interval t{1.0, 2.0};

  static Box unit(int n) {
    Box b;
    b.x.assign(static_cast<std::size_t>(n), Interval{1.0, 2.0});
    return b;
  }
};

/// A point of the extended phase space (t, x_1, ..., x_n).
struct Point {
  double t = 0.0;
  std::vector<double> x;
};

struct ValidationReport {
  int n = 0;
  /// 1-based indices of right-hand sides that mention t.
  std::vector<int> nonautonomous;
  /// 1-based indices of right-hand sides vanishing (or faulting) at the box
  /// center.
  std::vector<int> vanishing_at_center;
  /// Human-readable notes: corner vanishing, evaluation faults, ...
  std::vector<std::string> notes;

  bool autonomous() const { return nonautonomous.empty(); }
  bool ok() const { return nonautonomous.empty() && vanishing_at_center.empty(); }
};

/// A first-order autonomous system dx_i/dt = f_i(x_1, ..., x_n) with named
/// state variables and a sampling box. Construction runs the validation spot
/// check (autonomy, nonvanishing right-hand sides at the box center and
/// corners); failures are recorded, not thrown, so that diagnostic tooling
/// can still inspect a bad system.
class OdeSystem {
 public:
  OdeSystem(std::vector<std::string> variables, std::vector<Expr> rhs,
            Box box);
  OdeSystem(std::vector<std::string> variables, std::vector<Expr> rhs);

  int dimension() const { return static_cast<int>(rhs_.size()); }
  const std::vector<std::string>& variables() const { return vars_; }
  const std::string& variable(int i) const { return vars_[static_cast<std::size_t>(i)]; }
  const std::vector<Expr>& rhs() const { return rhs_; }
  const Expr& rhs(int i) const { return rhs_[static_cast<std::size_t>(i)]; }
  const Box& box() const { return box_; }

  Point box_center() const;
  Env env_at(const Point& p) const;
  const ValidationReport& validation() const { return report_; }

 private:
  std::vector<std::string> vars_;
  std::vector<Expr> rhs_;
  Box box_;
  ValidationReport report_;
};

/// Re-runs the construction-time checks and returns the report.
ValidationReport validate_system(const OdeSystem& sys);

}  // namespace webgeo
