#include "webgeo_cli/commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "webgeo/coframe.hpp"
#include "webgeo/equivalence.hpp"
#include "webgeo/errors.hpp"
#include "webgeo/parser.hpp"
#include "webgeo/scalar_match.hpp"
#include "webgeo_cli/report.hpp"
#include "webgeo_cli/system_file.hpp"

namespace webgeo::cli {

namespace {

Point parse_point(const std::string& text, int n) {
  std::vector<double> vals;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      vals.push_back(std::stod(tok));
    } catch (...) {
      throw Error("--point expects comma-separated numbers");
    }
  }
  if (static_cast<int>(vals.size()) != n + 1)
    throw Error("--point needs " + std::to_string(n + 1) +
                " values: t,x1,...,x" + std::to_string(n));
  Point p;
  p.t = vals[0];
  p.x.assign(vals.begin() + 1, vals.end());
  return p;
}

void emit(const Report& report, bool as_json, std::ostream& out) {
  if (as_json)
    out << report.to_json().dump(2) << "\n";
  else
    report.render_text(out);
}

int cmd_invariants(const std::string& file, bool as_json,
                   const std::string& point_arg, std::ostream& out,
                   std::ostream& err) {
  OdeSystem sys = load_system_file(file);
  Report report;
  report.system = echo_system(sys);
  for (const std::string& note : sys.validation().notes)
    report.diagnostics.push_back(note);

  if (sys.dimension() == 1) {
    report.diagnostics.push_back(
        "n = 1: torsion is empty and carries no invariants; any two scalar "
        "autonomous equations with compatible orientation are locally web "
        "equivalent. Use the solve1 command to construct the matching map.");
    emit(report, as_json, out);
    return kOk;
  }

  TorsionMatrix torsion = torsion_matrix(sys);
  const int n = sys.dimension();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j)
        report.torsion.push_back({i, j, torsion.entry(i, j).str()});

  NormalizerChoice choice;
  try {
    choice = choose_normalizer(torsion, sys);
  } catch (const FlatTorsion&) {
    emit(report, as_json, out);
    err << "error (normalization): all torsion vanishes; normalization "
           "unavailable\n";
    return kFlatTorsion;
  }
  report.normalizer = Report::NormalizerEcho{choice.row, choice.col,
                                             choice.value.str()};

  InvariantCoframe cf = invariant_coframe(sys, choice);
  for (const Expr& s : cf.scales()) report.coframe.push_back(s.str());

  StructureFunctions sf = structure_functions(sys, cf);
  Point at = point_arg.empty() ? sys.box_center() : parse_point(point_arg, n);
  report.point = at;
  Env env = sys.env_at(at);
  for (const auto& slot : StructureFunctions::slots(n)) {
    const Expr& c = sf.coefficient(slot.k, slot.i, slot.j);
    report.structure.push_back({slot.k, slot.i, slot.j,
                                StructureFunctions::slot_label(slot), c.str(),
                                evaluate(c, env)});
  }
  emit(report, as_json, out);
  return kOk;
}

int cmd_check(const std::string& file_a, const std::string& file_b,
              const std::string& map_file, int samples, bool as_json,
              std::ostream& out, std::ostream& err) {
  OdeSystem a = load_system_file(file_a);
  OdeSystem b = load_system_file(file_b);
  if (a.dimension() != b.dimension())
    throw PolicyMismatch("systems have different dimensions (" +
                         std::to_string(a.dimension()) + " vs " +
                         std::to_string(b.dimension()) + ")");
  if (a.dimension() == 1)
    throw DimensionError(
        "scalar systems carry no invariants to compare; use solve1");

  EquivVerdict verdict = [&] {
    if (!map_file.empty()) {
      WebMap map = load_map_file(map_file, a);
      return verify_pullback(a, b, map, samples);
    }
    return compare_signatures(signature_sample(a, samples),
                              signature_sample(b, samples));
  }();

  Report report;
  report.verdict = echo_verdict(verdict);
  emit(report, as_json, out);
  if (verdict.kind() == EquivVerdict::Kind::RefutedByInvariant) {
    err << "refuted by invariant " << verdict.witness().invariant << "\n";
    return kRefuted;
  }
  return kOk;
}

int cmd_solve1(const std::string& file_a, const std::string& file_b,
               std::vector<double> anchor, std::vector<double> range,
               const std::string& out_csv, bool as_json, std::ostream& out,
               std::ostream& err) {
  OdeSystem a = load_system_file(file_a);
  OdeSystem b = load_system_file(file_b);
  if (a.dimension() != 1 || b.dimension() != 1)
    throw DimensionError("solve1 expects two scalar systems (n = 1)");

  double x0 = anchor.empty() ? a.box().x[0].center() : anchor[0];
  double X0 = anchor.empty() ? b.box().x[0].center() : anchor[1];
  Interval span = range.empty() ? a.box().x[0] : Interval{range[0], range[1]};
  if (!(span.lo < span.hi)) throw Error("--range expects a < b");

  ScalarMatch match = match_scalar_systems(a.rhs(0), a.variable(0), b.rhs(0),
                                           b.variable(0), x0, X0, span);

  if (!out_csv.empty()) {
    std::ofstream csv(out_csv, std::ios::binary);
    if (!csv) throw Error("cannot write '" + out_csv + "'");
    csv << "x,phi1,residual\r\n";
    for (const auto& row : match.table)
      csv << fmt17(row.x) << "," << fmt17(row.phi) << ","
          << fmt17(row.residual) << "\r\n";
  }

  Report report;
  Report::VerdictEcho v;
  v.kind = match.max_residual < 1e-6 ? "VerifiedByMap" : "ResidualAboveTolerance";
  v.max_residual = match.max_residual;
  report.verdict = v;
  report.diagnostics.push_back(
      "phi1(" + fmt17(x0) + ") = " + fmt17(match.map.space(0).value(x0)) +
      "; anchor image " + fmt17(X0));
  report.diagnostics.push_back("grid points: " +
                               std::to_string(match.table.size()));
  emit(report, as_json, out);

  if (match.max_residual >= 1e-6) {
    err << "matching residual " << fmt17(match.max_residual)
        << " above tolerance 1e-6\n";
    return kScalarMatchFailure;
  }
  return kOk;
}

int cmd_symdim(const std::string& file, int probes, bool as_json,
               std::ostream& out, std::ostream& err) {
  (void)err;
  OdeSystem sys = load_system_file(file);
  if (sys.dimension() < 2)
    throw DimensionError("symdim expects n >= 2");
  SymmetryEstimate est = symmetry_dimension(sys, probes);
  Report report;
  report.system = echo_system(sys);
  report.symmetry = Report::SymmetryEcho{
      est.dimension,        est.rank, est.n, est.probes_used,
      est.per_probe_rank,   est.top_singular_values};
  emit(report, as_json, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"differential invariants of autonomous ODE systems under web "
               "transformations"};
  app.require_subcommand(1);

  std::string file, file_a, file_b, map_file, point_arg, out_csv;
  bool as_json = false;
  int samples = 100, probes = 12;
  std::vector<double> anchor, range;

  CLI::App* invariants =
      app.add_subcommand("invariants", "torsion, coframe, structure functions");
  invariants->add_option("file", file, "system definition file")->required();
  invariants->add_flag("--json", as_json, "emit a JSON report");
  invariants->add_option("--point", point_arg,
                         "evaluation point t,x1,...,xn (default: box center)");

  CLI::App* check = app.add_subcommand(
      "check", "test web equivalence of two systems (refutation screen, or "
               "verification against a map)");
  check->add_option("fileA", file_a, "first system")->required();
  check->add_option("fileB", file_b, "second system")->required();
  check->add_option("--map", map_file, "map file phi0..phin; verify pullback");
  check->add_option("--samples", samples, "sample count (default 100)");
  check->add_flag("--json", as_json, "emit a JSON report");

  CLI::App* solve1 = app.add_subcommand(
      "solve1", "construct the matching map for two scalar equations");
  solve1->add_option("fileA", file_a, "source system (n=1)")->required();
  solve1->add_option("fileB", file_b, "target system (n=1)")->required();
  solve1->add_option("--anchor", anchor, "anchor pair x0 X0")->expected(2);
  solve1->add_option("--range", range, "construction range a b")->expected(2);
  solve1->add_option("--out", out_csv, "CSV output path (x, phi1, residual)");
  solve1->add_flag("--json", as_json, "emit a JSON report");

  CLI::App* symdim = app.add_subcommand(
      "symdim", "estimate the symmetry group dimension (n + 1 - rank)");
  symdim->add_option("file", file, "system definition file")->required();
  symdim->add_option("--probes", probes, "probe points (default 12)");
  symdim->add_flag("--json", as_json, "emit a JSON report");

  std::vector<const char*> argv;
  argv.push_back("webgeo");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kOk;
    }
    err << "error (usage): " << e.what() << "\n";
    return kErrorUsage;
  }

  try {
    if (invariants->parsed())
      return cmd_invariants(file, as_json, point_arg, out, err);
    if (check->parsed())
      return cmd_check(file_a, file_b, map_file, samples, as_json, out, err);
    if (solve1->parsed())
      return cmd_solve1(file_a, file_b, anchor, range, out_csv, as_json, out, err);
    if (symdim->parsed())
      return cmd_symdim(file, probes, as_json, out, err);
  } catch (const SignMismatch& e) {
    err << "error (sign mismatch): " << e.what() << "\n";
    return kScalarMatchFailure;
  } catch (const QuadratureFailure& e) {
    err << "error (quadrature): " << e.what() << "\n";
    return kScalarMatchFailure;
  } catch (const FlatTorsion& e) {
    err << "error (normalization): " << e.what() << "\n";
    return kFlatTorsion;
  } catch (const SyntaxError& e) {
    err << "error (parse): " << e.what() << "\n";
    return kErrorUsage;
  } catch (const UnknownVariable& e) {
    err << "error (parse): " << e.what() << "\n";
    return kErrorUsage;
  } catch (const DomainFault& e) {
    err << "error (evaluation): " << e.what() << "\n";
    return kErrorUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kErrorUsage;
  }
  err << "error (usage): no subcommand\n";
  return kErrorUsage;
}

}  // namespace webgeo::cli
