#include "webgeo/coframe.hpp"

#include <cmath>
#include <cstdio>

#include "webgeo/errors.hpp"
#include "webgeo/sampling.hpp"

namespace webgeo {

namespace {

const Expr& zero() {
  static const Expr z = Expr::integer(0);
  return z;
}

void require_usable(const OdeSystem& sys) {
  const ValidationReport& rep = sys.validation();
  if (!rep.autonomous())
    throw InvalidSystem("system is not autonomous: f" +
                        std::to_string(rep.nonautonomous.front()) +
                        " depends on t");
  if (!rep.vanishing_at_center.empty())
    throw InvalidSystem("f" + std::to_string(rep.vanishing_at_center.front()) +
                        " vanishes at the box center");
}

}  // namespace

bool identically_zero(const Expr& e, const OdeSystem& sys) {
  if (e.is_zero()) return true;
  if (e.is_constant()) return false;

  std::vector<Point> pts = random_points(sys.box(), 8, /*seed=*/0x5eed);
  pts.push_back(sys.box_center());
  for (const Point& p : pts) {
    try {
      if (std::fabs(evaluate(e, sys.env_at(p))) > 1e-9) return false;
    } catch (const Error&) {
      // Not evaluable here; inconclusive at this point.
    }
  }
  return true;
}

TorsionMatrix torsion_matrix(const OdeSystem& sys) {
  const int n = sys.dimension();
  if (n < 2)
    throw DimensionError(
        "torsion is empty for a scalar equation; use the explicit matching "
        "construction instead");
  require_usable(sys);

  std::vector<Expr> entries(static_cast<std::size_t>(n) * n, zero());
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      // f_j * d(ln f_i)/dx_j, with the log derivative expanded so no ln node
      // is ever materialized: f_j * (df_i/dx_j) / f_i.
      Expr dfi = differentiate(sys.rhs(i - 1), sys.variable(j - 1));
      Expr ell = Expr::product(
          {sys.rhs(j - 1), std::move(dfi), Expr::power(sys.rhs(i - 1), -1)});
      entries[static_cast<std::size_t>((i - 1) * n + (j - 1))] = std::move(ell);
    }
  }
  return TorsionMatrix(n, std::move(entries));
}

NormalizerChoice choose_normalizer(const TorsionMatrix& torsion,
                                   const OdeSystem& sys) {
  const int n = torsion.dimension();
  Env center = sys.env_at(sys.box_center());

  bool any_nonzero = false;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      const Expr& ell = torsion.entry(i, j);
      if (identically_zero(ell, sys)) continue;
      any_nonzero = true;
      try {
        if (std::fabs(evaluate(ell, center)) > 1e-12)
          return NormalizerChoice{i, j, ell};
      } catch (const Error&) {
        // Not evaluable at the center; try the next entry.
      }
    }
  }
  if (!any_nonzero)
    throw FlatTorsion(
        "all torsion coefficients vanish identically; the one-loop "
        "normalization is unavailable");
  throw FlatTorsion(
      "no torsion coefficient is nonzero at the box center; move the box or "
      "treat the normalizer as ill-conditioned");
}

InvariantCoframe invariant_coframe(const OdeSystem& sys,
                                   const NormalizerChoice& choice) {
  const int n = sys.dimension();
  std::vector<Expr> scales;
  scales.reserve(static_cast<std::size_t>(n) + 1);
  scales.push_back(choice.value);
  for (int i = 0; i < n; ++i)
    scales.push_back(Expr::quotient(choice.value, sys.rhs(i)));

  Env center = sys.env_at(sys.box_center());
  for (int k = 0; k <= n; ++k) {
    double v = evaluate(scales[static_cast<std::size_t>(k)], center);
    if (std::fabs(v) < 1e-12)
      throw InvalidSystem("coframe scale " + std::to_string(k) +
                          " vanishes at the box center");
  }
  return InvariantCoframe(std::move(scales), choice);
}

// ---------------------------------------------------------------------------
// Structure functions

const Expr& StructureFunctions::coefficient(int k, int i, int j) const {
  auto it = coeffs_.find({k, i, j});
  return it == coeffs_.end() ? zero() : it->second;
}

std::vector<StructureFunctions::Slot> StructureFunctions::slots(int n) {
  std::vector<Slot> out;
  for (int j = 1; j <= n; ++j) out.push_back({0, 0, j});
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j)
      if (j != k) out.push_back({k, std::min(j, k), std::max(j, k)});
  return out;
}

std::string StructureFunctions::slot_label(const Slot& s) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "c^%d_{%d%d}", s.k, s.i, s.j);
  return buf;
}

std::vector<Expr> StructureFunctions::stacked() const {
  std::vector<Expr> out;
  for (const Slot& s : slots(n_)) out.push_back(coefficient(s.k, s.i, s.j));
  return out;
}

StructureFunctions structure_functions(const OdeSystem& sys,
                                       const InvariantCoframe& cf) {
  const int n = sys.dimension();
  std::map<std::tuple<int, int, int>, Expr> coeffs;

  // d theta^0 = d(s_0) ^ dt = sum_j (ds_0/dx_j) dx_j ^ dt
  //           = sum_j -(ds_0/dx_j) / (s_0 s_j) theta^0 ^ theta^j.
  for (int j = 1; j <= n; ++j) {
    Expr ds0 = differentiate(cf.scale(0), sys.variable(j - 1));
    Expr c = Expr::negate(Expr::quotient(
        std::move(ds0), Expr::product({cf.scale(0), cf.scale(j)})));
    coeffs.emplace(std::make_tuple(0, 0, j), std::move(c));
  }

  // d theta^k = d(s_k) ^ dx_k = sum_{j != k} (ds_k/dx_j) dx_j ^ dx_k, and
  // dx_j ^ dx_k = theta^j ^ theta^k / (s_j s_k). Autonomy kills the dt term.
  for (int k = 1; k <= n; ++k) {
    for (int j = 1; j <= n; ++j) {
      if (j == k) continue;
      Expr dsk = differentiate(cf.scale(k), sys.variable(j - 1));
      Expr c = Expr::quotient(std::move(dsk),
                              Expr::product({cf.scale(j), cf.scale(k)}));
      if (j > k) c = Expr::negate(std::move(c));  // reorder to theta^k ^ theta^j
      coeffs.emplace(std::make_tuple(k, std::min(j, k), std::max(j, k)),
                     std::move(c));
    }
  }
  return StructureFunctions(n, std::move(coeffs));
}

double NumericStructure::at(int k, int i, int j) const {
  auto all = StructureFunctions::slots(n);
  for (std::size_t s = 0; s < all.size(); ++s)
    if (all[s].k == k && all[s].i == i && all[s].j == j) return values[s];
  return 0.0;
}

NumericStructure numeric_structure_oracle(const OdeSystem& sys,
                                          const InvariantCoframe& cf,
                                          const Point& p, double step) {
  const int n = sys.dimension();
  auto scale_at = [&](int k, const Point& q) {
    return evaluate(cf.scale(k), sys.env_at(q));
  };
  auto d_scale = [&](int k, int j) {
    // Central difference of s_k along x_j.
    Point hi = p, lo = p;
    hi.x[static_cast<std::size_t>(j - 1)] += step;
    lo.x[static_cast<std::size_t>(j - 1)] -= step;
    return (scale_at(k, hi) - scale_at(k, lo)) / (2.0 * step);
  };

  NumericStructure out;
  out.n = n;
  for (const auto& slot : StructureFunctions::slots(n)) {
    double c;
    if (slot.k == 0) {
      c = -d_scale(0, slot.j) / (scale_at(0, p) * scale_at(slot.j, p));
    } else {
      int j = slot.i == slot.k ? slot.j : slot.i;
      c = d_scale(slot.k, j) / (scale_at(j, p) * scale_at(slot.k, p));
      if (j > slot.k) c = -c;
    }
    out.values.push_back(c);
  }
  return out;
}

}  // namespace webgeo
