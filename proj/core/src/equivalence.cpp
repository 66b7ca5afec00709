#include "webgeo/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "webgeo/errors.hpp"
#include "webgeo/sampling.hpp"

namespace webgeo {

int numeric_rank(const std::vector<std::vector<double>>& rows,
                 double* sigma_max);  // rank.cpp

OdeSystem pushforward(const OdeSystem& sys, const WebMap& map) {
  const int n = sys.dimension();
  if (map.dimension() != n)
    throw InvalidSystem("map dimension does not match the system");
  map.check_monotone(sys.box());

  // phi_0' must be a constant expression, otherwise the image system picks
  // up explicit time dependence.
  if (!map.time().is_symbolic())
    throw NonAutonomousResult("time component has no symbolic derivative");
  Expr dphi0 = differentiate(map.time().forward(), map.time().var());
  if (!dphi0.is_constant())
    throw NonAutonomousResult("time component derivative '" + dphi0.str() +
                              "' is not constant");
  if (dphi0.is_zero())
    throw InversionFailure("time component is not monotone");

  // Inverse expressions, one per state coordinate, written in the image
  // coordinate of the same name.
  std::map<std::string, Expr> backward;
  for (int i = 0; i < n; ++i) {
    const MapComponent& c = map.space(i);
    if (!c.is_symbolic())
      throw InvalidSystem("pushforward needs symbolic map components");
    auto inv = c.inverse_expr(sys.variable(i), sys.box().x[static_cast<std::size_t>(i)]);
    if (!inv)
      throw InversionFailure("component phi" + std::to_string(i + 1) +
                             " is not invertible");
    backward.emplace(sys.variable(i), *inv);
  }

  std::vector<Expr> image_rhs;
  for (int i = 0; i < n; ++i) {
    Expr dphi = differentiate(map.space(i).forward(), map.space(i).var());
    Expr e = Expr::quotient(Expr::product({std::move(dphi), sys.rhs(i)}), dphi0);
    image_rhs.push_back(substitute(e, backward));
  }

  Box image_box;
  image_box.t = Interval::ordered(map.time().value(sys.box().t.lo),
                                  map.time().value(sys.box().t.hi));
  for (int i = 0; i < n; ++i) {
    const Interval& iv = sys.box().x[static_cast<std::size_t>(i)];
    image_box.x.push_back(Interval::ordered(map.space(i).value(iv.lo),
                                            map.space(i).value(iv.hi)));
  }
  return OdeSystem(sys.variables(), std::move(image_rhs), std::move(image_box));
}

namespace {

struct CoframePipeline {
  NormalizerChoice choice;
  InvariantCoframe coframe;
  StructureFunctions structure;
};

CoframePipeline build_pipeline(const OdeSystem& sys) {
  TorsionMatrix torsion = torsion_matrix(sys);
  NormalizerChoice choice = choose_normalizer(torsion, sys);
  InvariantCoframe cf = invariant_coframe(sys, choice);
  StructureFunctions sf = structure_functions(sys, cf);
  return {std::move(choice), std::move(cf), std::move(sf)};
}

}  // namespace

EquivVerdict verify_pullback(const OdeSystem& src, const OdeSystem& dst,
                             const WebMap& map, int samples) {
  if (src.dimension() != dst.dimension())
    throw PolicyMismatch("systems have different dimensions");
  map.check_monotone(src.box());

  InvariantCoframe cf_src = [&] {
    TorsionMatrix t = torsion_matrix(src);
    return invariant_coframe(src, choose_normalizer(t, src));
  }();
  InvariantCoframe cf_dst = [&] {
    TorsionMatrix t = torsion_matrix(dst);
    return invariant_coframe(dst, choose_normalizer(t, dst));
  }();

  if (cf_src.normalizer().row != cf_dst.normalizer().row ||
      cf_src.normalizer().col != cf_dst.normalizer().col)
    throw PolicyMismatch(
        "normalizer index pairs differ (" +
        std::to_string(cf_src.normalizer().row) + "," +
        std::to_string(cf_src.normalizer().col) + ") vs (" +
        std::to_string(cf_dst.normalizer().row) + "," +
        std::to_string(cf_dst.normalizer().col) + ")");

  const int n = src.dimension();
  double max_residual = 0.0;
  std::vector<Point> pts = random_points(src.box(), samples, /*seed=*/0xc0f2a3e);
  for (const Point& p : pts) {
    Point q = map.apply(p);
    Env env_p = src.env_at(p);
    Env env_q = dst.env_at(q);
    for (int k = 0; k <= n; ++k) {
      double S = evaluate(cf_dst.scale(k), env_q);
      double s = evaluate(cf_src.scale(k), env_p);
      double d = k == 0 ? map.time().derivative(p.t)
                        : map.space(k - 1).derivative(p.x[static_cast<std::size_t>(k - 1)]);
      double lhs = S * d;
      double res = std::fabs(lhs - s) / (1.0 + std::fabs(s));
      if (res > max_residual) max_residual = res;
      if (res > 1e-6) {
        RefutationWitness w;
        w.invariant = "coframe scale s_" + std::to_string(k);
        w.a_lo = w.a_hi = s;
        w.b_lo = w.b_hi = lhs;
        w.gap = res;
        return EquivVerdict::refuted(std::move(w));
      }
    }
  }
  return EquivVerdict::verified(max_residual, samples);
}

SignatureSample signature_sample(const OdeSystem& sys, int grid) {
  if (sys.dimension() < 2)
    throw DimensionError("signatures need n >= 2");
  CoframePipeline pipe = build_pipeline(sys);

  SignatureSample out;
  out.dimension = sys.dimension();
  out.normalizer_row = pipe.choice.row;
  out.normalizer_col = pipe.choice.col;
  auto slots = StructureFunctions::slots(sys.dimension());
  for (const auto& s : slots)
    out.labels.push_back(StructureFunctions::slot_label(s));
  std::vector<Expr> stacked = pipe.structure.stacked();

  HaltonSequence seq(sys.dimension());
  out.requested = static_cast<std::size_t>(grid);
  for (int k = 0; k < grid; ++k) {
    Point p = seq.next(sys.box());
    std::vector<double> vec;
    vec.reserve(stacked.size());
    try {
      Env env = sys.env_at(p);
      for (const Expr& c : stacked) {
        double v = evaluate(c, env);
        vec.push_back(v);
      }
    } catch (const DomainFault&) {
      ++out.skipped;
      continue;
    }
    out.points.push_back(std::move(p));
    out.values.push_back(std::move(vec));
  }
  if (out.skipped * 5 > out.requested)
    throw IllConditionedNormalizer(out.skipped, out.requested);
  return out;
}

namespace {

struct Range {
  double lo, hi;
};

std::vector<Range> per_invariant_ranges(const SignatureSample& s) {
  std::vector<Range> out(s.labels.size(),
                         {std::numeric_limits<double>::infinity(),
                          -std::numeric_limits<double>::infinity()});
  for (const auto& vec : s.values)
    for (std::size_t i = 0; i < vec.size(); ++i) {
      out[i].lo = std::min(out[i].lo, vec[i]);
      out[i].hi = std::max(out[i].hi, vec[i]);
    }
  return out;
}

bool all_constant(const std::vector<Range>& r) {
  for (const auto& iv : r) {
    double scale = 1.0 + std::max(std::fabs(iv.lo), std::fabs(iv.hi));
    if (iv.hi - iv.lo > 1e-7 * scale) return false;
  }
  return true;
}

}  // namespace

EquivVerdict compare_signatures(const SignatureSample& a,
                                const SignatureSample& b) {
  if (a.dimension != b.dimension)
    throw PolicyMismatch("signatures have different dimensions");
  if (a.normalizer_row != b.normalizer_row ||
      a.normalizer_col != b.normalizer_col)
    throw PolicyMismatch(
        "signatures were sampled under different normalizer choices (" +
        std::to_string(a.normalizer_row) + "," + std::to_string(a.normalizer_col) +
        ") vs (" + std::to_string(b.normalizer_row) + "," +
        std::to_string(b.normalizer_col) + ")");
  if (a.values.empty() || b.values.empty())
    throw InsufficientProbes("a signature sample is empty");

  std::vector<Range> ra = per_invariant_ranges(a);
  std::vector<Range> rb = per_invariant_ranges(b);
  const double tol = 1e-6;

  MatchStats stats;
  stats.points = static_cast<int>(std::min(a.values.size(), b.values.size()));
  stats.invariants = static_cast<int>(ra.size());

  if (all_constant(ra) && all_constant(rb)) {
    for (std::size_t i = 0; i < ra.size(); ++i) {
      double va = 0.5 * (ra[i].lo + ra[i].hi);
      double vb = 0.5 * (rb[i].lo + rb[i].hi);
      if (std::fabs(va - vb) > tol) {
        RefutationWitness w;
        w.invariant = a.labels[i];
        w.a_lo = w.a_hi = va;
        w.b_lo = w.b_hi = vb;
        w.gap = std::fabs(va - vb);
        return EquivVerdict::refuted(std::move(w));
      }
    }
    return EquivVerdict::not_refuted(stats);
  }

  // Range-overlap screen for nonconstant signatures.
  for (std::size_t i = 0; i < ra.size(); ++i) {
    double gap = std::max(rb[i].lo - ra[i].hi, ra[i].lo - rb[i].hi);
    stats.worst_overlap_gap = std::max(stats.worst_overlap_gap, gap);
    if (gap > tol) {
      RefutationWitness w;
      w.invariant = a.labels[i];
      w.a_lo = ra[i].lo;
      w.a_hi = ra[i].hi;
      w.b_lo = rb[i].lo;
      w.b_hi = rb[i].hi;
      w.gap = gap;
      return EquivVerdict::refuted(std::move(w));
    }
  }
  return EquivVerdict::not_refuted(stats);
}

SymmetryEstimate symmetry_dimension(const OdeSystem& sys, int probes) {
  const int n = sys.dimension();
  if (n < 2) throw DimensionError("symmetry estimation needs n >= 2");
  CoframePipeline pipe = build_pipeline(sys);
  std::vector<Expr> stacked = pipe.structure.stacked();

  SymmetryEstimate est;
  est.n = n;

  std::vector<Point> pts =
      random_points(sys.box(), probes, /*seed=*/0xd1a60, /*margin_frac=*/0.05);
  for (const Point& p : pts) {
    // Jacobian of the invariant vector in (t, x_1, ..., x_n) by central
    // differences; rows are invariants, columns coordinates.
    std::vector<std::vector<double>> jac(
        stacked.size(), std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    bool usable = true;
    for (int col = 0; col <= n && usable; ++col) {
      double width = col == 0 ? sys.box().t.width()
                              : sys.box().x[static_cast<std::size_t>(col - 1)].width();
      double h = 1e-4 * std::max(width, 1.0);
      Point hi = p, lo = p;
      if (col == 0) {
        hi.t += h;
        lo.t -= h;
      } else {
        hi.x[static_cast<std::size_t>(col - 1)] += h;
        lo.x[static_cast<std::size_t>(col - 1)] -= h;
      }
      try {
        Env env_hi = sys.env_at(hi), env_lo = sys.env_at(lo);
        for (std::size_t r = 0; r < stacked.size(); ++r)
          jac[r][static_cast<std::size_t>(col)] =
              (evaluate(stacked[r], env_hi) - evaluate(stacked[r], env_lo)) /
              (2.0 * h);
      } catch (const DomainFault&) {
        usable = false;
      }
    }
    if (!usable) continue;

    double sigma_max = 0.0;
    int rank = numeric_rank(jac, &sigma_max);
    est.per_probe_rank.push_back(rank);
    est.top_singular_values.push_back(sigma_max);
    est.rank = std::max(est.rank, rank);
    ++est.probes_used;
  }

  if (est.probes_used < 3)
    throw InsufficientProbes("only " + std::to_string(est.probes_used) +
                             " probe points were evaluable");
  est.dimension = std::clamp(n + 1 - est.rank, 0, n + 1);
  return est;
}

}  // namespace webgeo
