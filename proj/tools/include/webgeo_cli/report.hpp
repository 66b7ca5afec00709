#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "webgeo/equivalence.hpp"
#include "webgeo/ode_system.hpp"

namespace webgeo::cli {

/// %.17g — both renderers print numbers through this, so text and JSON agree
/// to full double precision.
std::string fmt17(double v);

/// Structured command output, rendered as pretty text or as a JSON object
/// with stable keys: system, torsion, normalizer, coframe, structure,
/// verdict, symmetry_dimension, diagnostics.
struct Report {
  struct SystemEcho {
    int n = 0;
    std::vector<std::string> vars;
    std::vector<std::string> rhs;
    std::vector<Interval> box;
  };
  struct TorsionEntry {
    int i, j;
    std::string expr;
  };
  struct NormalizerEcho {
    int row, col;
    std::string expr;
  };
  struct StructureEntry {
    int k, i, j;
    std::string label;
    std::string expr;
    double value;  // at the report point
  };
  struct VerdictEcho {
    std::string kind;  // VerifiedByMap | NotRefuted | RefutedByInvariant
    std::optional<double> max_residual;
    std::optional<RefutationWitness> witness;
    std::optional<MatchStats> stats;
  };
  struct SymmetryEcho {
    int dimension, rank, n, probes_used;
    std::vector<int> per_probe_rank;
    std::vector<double> top_singular_values;
  };

  std::optional<SystemEcho> system;
  std::vector<TorsionEntry> torsion;
  std::optional<NormalizerEcho> normalizer;
  std::vector<std::string> coframe;  // scale expressions s_0 .. s_n
  std::vector<StructureEntry> structure;
  std::optional<Point> point;  // where structure values were taken
  std::optional<VerdictEcho> verdict;
  std::optional<SymmetryEcho> symmetry;
  std::vector<std::string> diagnostics;

  nlohmann::json to_json() const;
  void render_text(std::ostream& os) const;
};

Report::SystemEcho echo_system(const OdeSystem& sys);
Report::VerdictEcho echo_verdict(const EquivVerdict& v);

}  // namespace webgeo::cli
