#include "webgeo/ode_system.hpp"

#include <cassert>
#include <cmath>

#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

ValidationReport run_checks(const OdeSystem& sys) {
  ValidationReport rep;
  rep.n = sys.dimension();
  const int n = sys.dimension();

  for (int i = 0; i < n; ++i)
    if (sys.rhs(i).depends_on("t")) rep.nonautonomous.push_back(i + 1);

  auto probe = [&](const Point& p, const char* where, bool center) {
    Env env = sys.env_at(p);
    for (int i = 0; i < n; ++i) {
      try {
        double v = evaluate(sys.rhs(i), env);
        if (std::fabs(v) < 1e-12) {
          if (center)
            rep.vanishing_at_center.push_back(i + 1);
          else
            rep.notes.push_back("f" + std::to_string(i + 1) +
                                " vanishes at box " + where + " (" +
                                env.describe() + ")");
        }
      } catch (const Error& err) {
        if (center)
          rep.vanishing_at_center.push_back(i + 1);
        rep.notes.push_back("f" + std::to_string(i + 1) +
                            " not evaluable at box " + where + ": " +
                            err.what());
      }
    }
  };

  probe(sys.box_center(), "center", true);

  // Corners: exhaustive for small n, which is the only regime this library
  // targets; beyond 12 state variables the check samples nothing extra.
  if (n <= 12) {
    const auto& box = sys.box().x;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Point p;
      p.t = sys.box().t.center();
      p.x.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        p.x[static_cast<std::size_t>(i)] =
            (mask >> i) & 1u ? box[static_cast<std::size_t>(i)].hi
                             : box[static_cast<std::size_t>(i)].lo;
      probe(p, "corner", false);
    }
  }
  return rep;
}

}  // namespace

OdeSystem::OdeSystem(std::vector<std::string> variables, std::vector<Expr> rhs,
                     Box box)
    : vars_(std::move(variables)), rhs_(std::move(rhs)), box_(std::move(box)) {
  assert(vars_.size() == rhs_.size());
  assert(box_.x.size() == rhs_.size());
  report_ = run_checks(*this);
}

OdeSystem::OdeSystem(std::vector<std::string> variables, std::vector<Expr> rhs)
    : vars_(std::move(variables)),
      rhs_(std::move(rhs)),
      box_(Box::unit(static_cast<int>(rhs_.size()))) {
  assert(vars_.size() == rhs_.size());
  report_ = run_checks(*this);
}

Point OdeSystem::box_center() const {
  Point p;
  p.t = box_.t.center();
  for (const Interval& iv : box_.x) p.x.push_back(iv.center());
  return p;
}

Env OdeSystem::env_at(const Point& p) const {
  Env env;
  env.set("t", p.t);
  for (std::size_t i = 0; i < vars_.size(); ++i) env.set(vars_[i], p.x[i]);
  return env;
}

ValidationReport validate_system(const OdeSystem& sys) {
  return run_checks(sys);
}

}  // namespace webgeo
