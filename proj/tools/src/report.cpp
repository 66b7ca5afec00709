#include "webgeo_cli/report.hpp"

#include <cstdio>

namespace webgeo::cli {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Report::SystemEcho echo_system(const OdeSystem& sys) {
  Report::SystemEcho e;
  e.n = sys.dimension();
  e.vars = sys.variables();
  for (const Expr& f : sys.rhs()) e.rhs.push_back(f.str());
  e.box = sys.box().x;
  return e;
}

Report::VerdictEcho echo_verdict(const EquivVerdict& v) {
  Report::VerdictEcho e;
  switch (v.kind()) {
    case EquivVerdict::Kind::VerifiedByMap:
      e.kind = "VerifiedByMap";
      e.max_residual = v.max_residual();
      e.stats = v.stats();
      break;
    case EquivVerdict::Kind::NotRefuted:
      e.kind = "NotRefuted";
      e.stats = v.stats();
      break;
    case EquivVerdict::Kind::RefutedByInvariant:
      e.kind = "RefutedByInvariant";
      e.witness = v.witness();
      break;
  }
  return e;
}

json Report::to_json() const {
  json out = json::object();
  if (system) {
    json s;
    s["n"] = system->n;
    s["vars"] = system->vars;
    s["rhs"] = system->rhs;
    json box = json::object();
    for (std::size_t i = 0; i < system->box.size(); ++i)
      box[system->vars[i]] = {system->box[i].lo, system->box[i].hi};
    s["box"] = box;
    out["system"] = s;
  }
  if (!torsion.empty()) {
    json t = json::array();
    for (const auto& e : torsion)
      t.push_back({{"i", e.i}, {"j", e.j}, {"expr", e.expr}});
    out["torsion"] = t;
  }
  if (normalizer)
    out["normalizer"] = {{"row", normalizer->row},
                         {"col", normalizer->col},
                         {"expr", normalizer->expr}};
  if (!coframe.empty()) out["coframe"] = coframe;
  if (!structure.empty()) {
    json s = json::array();
    for (const auto& e : structure)
      s.push_back({{"k", e.k},
                   {"i", e.i},
                   {"j", e.j},
                   {"label", e.label},
                   {"expr", e.expr},
                   {"value", e.value}});
    out["structure"] = s;
  }
  if (point) {
    json p;
    p["t"] = point->t;
    p["x"] = point->x;
    out["point"] = p;
  }
  if (verdict) {
    json v;
    v["kind"] = verdict->kind;
    if (verdict->max_residual) v["max_residual"] = *verdict->max_residual;
    if (verdict->witness) {
      const auto& w = *verdict->witness;
      v["witness"] = {{"invariant", w.invariant},
                      {"a", {w.a_lo, w.a_hi}},
                      {"b", {w.b_lo, w.b_hi}},
                      {"gap", w.gap}};
    }
    if (verdict->stats) {
      v["points"] = verdict->stats->points;
      v["invariants"] = verdict->stats->invariants;
    }
    out["verdict"] = v;
  }
  if (symmetry) {
    out["symmetry_dimension"] = {
        {"dimension", symmetry->dimension},
        {"rank", symmetry->rank},
        {"n", symmetry->n},
        {"probes_used", symmetry->probes_used},
        {"per_probe_rank", symmetry->per_probe_rank},
        {"top_singular_values", symmetry->top_singular_values}};
  }
  if (!diagnostics.empty()) out["diagnostics"] = diagnostics;
  return out;
}

void Report::render_text(std::ostream& os) const {
  if (system) {
    os << "system: n = " << system->n << "\n";
    for (std::size_t i = 0; i < system->vars.size(); ++i)
      os << "  f" << i + 1 << " = " << system->rhs[i] << "   (" << system->vars[i]
         << " in [" << fmt17(system->box[i].lo) << ", " << fmt17(system->box[i].hi)
         << "])\n";
  }
  if (!torsion.empty()) {
    os << "torsion:\n";
    for (const auto& e : torsion)
      os << "  l_" << e.i << e.j << " = " << e.expr << "\n";
  }
  if (normalizer)
    os << "normalizer: pair (" << normalizer->row << "," << normalizer->col
       << "), value " << normalizer->expr << "\n";
  if (!coframe.empty()) {
    os << "invariant coframe:\n";
    for (std::size_t k = 0; k < coframe.size(); ++k) {
      os << "  theta^" << k << " = (" << coframe[k] << ") ";
      os << (k == 0 ? "dt" : "dx" + std::to_string(k)) << "\n";
    }
  }
  if (!structure.empty()) {
    os << "structure functions";
    if (point) {
      os << " (values at t=" << fmt17(point->t);
      for (std::size_t i = 0; i < point->x.size(); ++i)
        os << ", x" << i + 1 << "=" << fmt17(point->x[i]);
      os << ")";
    }
    os << ":\n";
    for (const auto& e : structure)
      os << "  " << e.label << " = " << e.expr << " = " << fmt17(e.value) << "\n";
  }
  if (verdict) {
    os << "verdict: " << verdict->kind << "\n";
    if (verdict->max_residual)
      os << "  max residual = " << fmt17(*verdict->max_residual) << "\n";
    if (verdict->witness) {
      const auto& w = *verdict->witness;
      os << "  witness " << w.invariant << ": [" << fmt17(w.a_lo) << ", "
         << fmt17(w.a_hi) << "] vs [" << fmt17(w.b_lo) << ", " << fmt17(w.b_hi)
         << "], gap " << fmt17(w.gap) << "\n";
    }
    if (verdict->stats && !verdict->witness)
      os << "  points = " << verdict->stats->points
         << ", invariants = " << verdict->stats->invariants << "\n";
  }
  if (symmetry) {
    os << "symmetry dimension: " << symmetry->dimension << " (n = " << symmetry->n
       << ", classifying rank = " << symmetry->rank << ", probes = "
       << symmetry->probes_used << ")\n";
    os << "  top singular values:";
    for (double s : symmetry->top_singular_values) os << " " << fmt17(s);
    os << "\n";
  }
  for (const std::string& d : diagnostics) os << "note: " << d << "\n";
}

}  // namespace webgeo::cli
