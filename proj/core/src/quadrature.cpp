#include "webgeo/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kKronrodX[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};

constexpr double kKronrodW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};

constexpr double kGaussW[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

}  // namespace

Quadrature::Quadrature(std::function<double(double)> integrand,
                       double base_point, Interval initial, double abs_tol)
    : f_(std::move(integrand)), x0_(base_point), tol_(abs_tol) {
  if (!(initial.lo <= x0_ && x0_ <= initial.hi)) {
    initial.lo = std::min(initial.lo, x0_);
    initial.hi = std::max(initial.hi, x0_);
  }
  // Sign definiteness scan.
  const int grid = 33;
  for (int k = 0; k < grid; ++k) {
    double x = initial.lo + initial.width() * k / (grid - 1);
    double v = f_(x);
    if (!std::isfinite(v) || v == 0.0)
      throw QuadratureFailure("integrand not sign-definite at " +
                              std::to_string(x));
    int s = v > 0 ? 1 : -1;
    if (sign_ == 0) sign_ = s;
    if (s != sign_)
      throw QuadratureFailure("integrand changes sign inside the interval");
  }
  table_.push_back({x0_, 0.0});
  extend_to(initial.lo);
  extend_to(initial.hi);
}

double Quadrature::integrate(double a, double b) const {
  return integrate_adaptive(a, b, tol_, 0);
}

double Quadrature::integrate_adaptive(double a, double b, double tol,
                                      int depth) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    double fx = f_(mid + half * kKronrodX[i]);
    if (!std::isfinite(fx))
      throw QuadratureFailure("integrand not finite near " +
                              std::to_string(mid + half * kKronrodX[i]));
    kronrod += kKronrodW[i] * fx;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * fx;
  }
  kronrod *= half;
  gauss *= half;
  double err = std::fabs(kronrod - gauss);
  if (err <= tol || std::fabs(half) < 1e-14) {
    if (depth >= 48 && err > tol * 16)
      throw QuadratureFailure("adaptive refinement did not converge");
    return kronrod;
  }
  if (depth >= 48)
    throw QuadratureFailure("adaptive refinement did not converge");
  return integrate_adaptive(a, mid, 0.5 * tol, depth + 1) +
         integrate_adaptive(mid, b, 0.5 * tol, depth + 1);
}

void Quadrature::extend_to(double x) const {
  // Grow the node table outward. Steps scale with the distance from the
  // base point so covering a huge range costs a logarithmic number of
  // segments; value() still integrates adaptively inside a segment.
  auto step_near = [&](double at) {
    return std::max(0.25, 0.05 * std::fabs(at - x0_));
  };
  while (table_.back().x < x) {
    const Node& last = table_.back();
    double nx = std::min(x, last.x + step_near(last.x));
    table_.push_back({nx, last.v + integrate(last.x, nx)});
  }
  while (table_.front().x > x) {
    const Node& first = table_.front();
    double nx = std::max(x, first.x - step_near(first.x));
    table_.insert(table_.begin(), {nx, first.v - integrate(nx, first.x)});
  }
}

double Quadrature::value(double x) const {
  extend_to(x);
  // Nearest node at or below x.
  auto it = std::upper_bound(
      table_.begin(), table_.end(), x,
      [](double v, const Node& n) { return v < n.x; });
  if (it != table_.begin()) --it;
  return it->v + integrate(it->x, x);
}

double Quadrature::invert(double y) const {
  // Expand the covered range until the cached values straddle y. The table
  // values are strictly monotone with slope of constant sign.
  const bool increasing = sign_ > 0;
  int guard = 0, stall = 0;
  while ((increasing && table_.back().v < y) ||
         (!increasing && table_.back().v > y)) {
    double before = table_.back().v;
    extend_to(table_.back().x + std::max(1.0, std::fabs(table_.back().x)));
    if (std::fabs(table_.back().v - before) < 1e-13 * (1.0 + std::fabs(y)))
      ++stall;
    else
      stall = 0;
    if (stall >= 3 || ++guard > 200)
      throw QuadratureFailure("inversion target out of reach (integral "
                              "saturates before " +
                              std::to_string(y) + ")");
  }
  guard = stall = 0;
  while ((increasing && table_.front().v > y) ||
         (!increasing && table_.front().v < y)) {
    double before = table_.front().v;
    extend_to(table_.front().x - std::max(1.0, std::fabs(table_.front().x)));
    if (std::fabs(table_.front().v - before) < 1e-13 * (1.0 + std::fabs(y)))
      ++stall;
    else
      stall = 0;
    if (stall >= 3 || ++guard > 200)
      throw QuadratureFailure("inversion target out of reach (integral "
                              "saturates before " +
                              std::to_string(y) + ")");
  }

  // Bracketing segment in the node table.
  std::size_t lo = 0, hi = table_.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if ((table_[mid].v <= y) == increasing)
      lo = mid;
    else
      hi = mid;
  }

  // Bisection-safeguarded secant on value() inside the segment, followed by
  // a Newton polish (the derivative is just the integrand).
  double a = table_[lo].x, b = table_[hi].x;
  double fa = table_[lo].v - y, fb = table_[hi].v - y;
  double x = 0.5 * (a + b);
  for (int it = 0; it < 80; ++it) {
    double cand = (fb - fa) != 0.0 ? (a - fa * (b - a) / (fb - fa))
                                   : 0.5 * (a + b);
    if (!(cand > a && cand < b)) cand = 0.5 * (a + b);
    double fc = value(cand) - y;
    if ((fc <= 0.0) == (fa <= 0.0)) {
      a = cand;
      fa = fc;
    } else {
      b = cand;
      fb = fc;
    }
    x = cand;
    if (std::fabs(fc) < 1e-13 || b - a < 1e-15 * (1.0 + std::fabs(a))) break;
  }
  for (int it = 0; it < 3; ++it) {
    double fx = value(x) - y;
    double dfx = f_(x);
    if (dfx == 0.0) break;
    double next = x - fx / dfx;
    if (!std::isfinite(next)) break;
    x = next;
  }
  return x;
}

}  // namespace webgeo
