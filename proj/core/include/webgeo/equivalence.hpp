#pragma once

#include <optional>
#include <string>
#include <vector>

#include "webgeo/coframe.hpp"
#include "webgeo/ode_system.hpp"
#include "webgeo/web_map.hpp"

namespace webgeo {

/// Transports a system through a web transformation: the image system is
/// F_i(X) = phi_i'(x) f_i(x) / phi_0', evaluated at x = phi_i^{-1}(X_i),
/// with the image box. The time component must have a constant derivative
/// (NonAutonomousResult otherwise — anything else leaves the autonomous
/// class); components without a closed-form inverse contribute inverse
/// nodes that are solved numerically during evaluation.
OdeSystem pushforward(const OdeSystem& sys, const WebMap& map);

struct RefutationWitness {
  std::string invariant;  // slot label, e.g. "c^0_{02}"
  double a_lo = 0.0, a_hi = 0.0;
  double b_lo = 0.0, b_hi = 0.0;
  double gap = 0.0;
};

struct MatchStats {
  int points = 0;
  int invariants = 0;
  double worst_overlap_gap = 0.0;  // <= 0 when all ranges overlap
};

/// Outcome of an equivalence check. A signature comparison can refute or
/// fail to refute; only a pullback verification against an explicit map can
/// verify.
class EquivVerdict {
 public:
  enum class Kind { RefutedByInvariant, NotRefuted, VerifiedByMap };

  static EquivVerdict refuted(RefutationWitness w) {
    EquivVerdict v;
    v.kind_ = Kind::RefutedByInvariant;
    v.witness_ = std::move(w);
    return v;
  }
  static EquivVerdict not_refuted(MatchStats s) {
    EquivVerdict v;
    v.kind_ = Kind::NotRefuted;
    v.stats_ = s;
    return v;
  }
  static EquivVerdict verified(double max_residual, int points) {
    EquivVerdict v;
    v.kind_ = Kind::VerifiedByMap;
    v.max_residual_ = max_residual;
    v.stats_.points = points;
    return v;
  }

  Kind kind() const { return kind_; }
  double max_residual() const { return max_residual_; }
  const RefutationWitness& witness() const { return *witness_; }
  const MatchStats& stats() const { return stats_; }

 private:
  Kind kind_ = Kind::NotRefuted;
  double max_residual_ = 0.0;
  std::optional<RefutationWitness> witness_;
  MatchStats stats_;
};

/// Checks the pullback identity of the invariant coframes at `samples`
/// random points p of src's box: S_k(map(p)) * d(map_k)(p) = s_k(p) for
/// every diagonal slot k. Both coframes are built under the same normalizer
/// policy; PolicyMismatch if the chosen index pairs differ. Residuals are
/// relative; tolerance 1e-6.
EquivVerdict verify_pullback(const OdeSystem& src, const OdeSystem& dst,
                             const WebMap& map, int samples);

/// Values of the stacked structure-function invariants on a low-discrepancy
/// point set. Points where evaluation faults (the normalizer vanishes, a
/// log leaves its domain) are skipped and counted; more than 20% skipped
/// raises IllConditionedNormalizer.
class SignatureSample {
 public:
  int dimension = 0;
  int normalizer_row = 0, normalizer_col = 0;
  std::vector<std::string> labels;
  std::vector<Point> points;
  std::vector<std::vector<double>> values;  // one invariant vector per point
  std::size_t skipped = 0;
  std::size_t requested = 0;
};

SignatureSample signature_sample(const OdeSystem& sys, int grid);

/// Necessary-condition screen: refutes when some invariant's value ranges
/// are disjoint (beyond 1e-6), otherwise NotRefuted. Never verifies — a
/// finite sample cannot prove equivalence.
EquivVerdict compare_signatures(const SignatureSample& a,
                                const SignatureSample& b);

struct SymmetryEstimate {
  int dimension = 0;  // n + 1 - rank, clamped to [0, n + 1]
  int rank = 0;       // max observed rank of the classifying map
  int n = 0;
  int probes_used = 0;
  std::vector<int> per_probe_rank;
  std::vector<double> top_singular_values;  // per probe
};

/// Estimates the rank of the classifying map p -> (c^k_{ij}(p)) by central
/// finite differences of the invariant vector at `probes` interior points
/// (the t column vanishes by autonomy) and returns n + 1 - rank. Singular
/// values below max(1e-8 * sigma_max, 1e-12) count as zero.
SymmetryEstimate symmetry_dimension(const OdeSystem& sys, int probes);

}  // namespace webgeo
