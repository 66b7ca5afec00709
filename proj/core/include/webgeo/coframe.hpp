#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "webgeo/ode_system.hpp"

namespace webgeo {

/// Off-diagonal torsion invariants of an autonomous system: entry (i, j),
/// i != j, holds f_j * (d f_i / d x_j) / f_i in canonical form. Indices are
/// 1-based to match the usual subscript notation in reports.
class TorsionMatrix {
 public:
  TorsionMatrix(int n, std::vector<Expr> entries)
      : n_(n), entries_(std::move(entries)) {}

  int dimension() const { return n_; }
  const Expr& entry(int i, int j) const {
    return entries_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))];
  }

 private:
  int n_;
  std::vector<Expr> entries_;  // row-major, diagonal slots hold 0
};

/// Requires n >= 2 (DimensionError otherwise; the scalar case has no
/// torsion and is handled by the explicit matching construction) and a
/// system passing validation (InvalidSystem otherwise).
TorsionMatrix torsion_matrix(const OdeSystem& sys);

/// The torsion entry chosen to pin the scale-group parameter. Row-major
/// lexicographically first entry that is not identically zero and does not
/// vanish at the box center.
struct NormalizerChoice {
  int row = 0;  // 1-based
  int col = 0;
  Expr value;
};

/// Throws FlatTorsion when no usable entry exists (all torsion identically
/// zero, or every nonzero entry vanishes at the box center).
NormalizerChoice choose_normalizer(const TorsionMatrix& torsion,
                                   const OdeSystem& sys);

/// Coframe diagonal in the coordinate cobasis: theta^0 = scale(0) dt,
/// theta^i = scale(i) dx_i, with scale(0) the normalizing invariant and
/// scale(i) = scale(0) / f_i.
class InvariantCoframe {
 public:
  InvariantCoframe(std::vector<Expr> scales, NormalizerChoice choice)
      : scales_(std::move(scales)), choice_(std::move(choice)) {}

  int dimension() const { return static_cast<int>(scales_.size()) - 1; }
  const Expr& scale(int k) const { return scales_[static_cast<std::size_t>(k)]; }
  const std::vector<Expr>& scales() const { return scales_; }
  const NormalizerChoice& normalizer() const { return choice_; }

 private:
  std::vector<Expr> scales_;
  NormalizerChoice choice_;
};

InvariantCoframe invariant_coframe(const OdeSystem& sys,
                                   const NormalizerChoice& choice);

/// Coefficients of d theta^k = sum_{i<j} c(k,i,j) theta^i ^ theta^j.
/// Because the coframe is diagonal, c(0,i,j) vanishes unless 0 is one of
/// {i,j}, and c(k,i,j) for k >= 1 vanishes unless k is one of {i,j}; only
/// the structurally possible slots are stored.
class StructureFunctions {
 public:
  struct Slot {
    int k, i, j;  // i < j
  };

  StructureFunctions(int n, std::map<std::tuple<int, int, int>, Expr> coeffs)
      : n_(n), coeffs_(std::move(coeffs)) {}

  int dimension() const { return n_; }
  /// Zero expression for slots outside the stored sparsity pattern.
  const Expr& coefficient(int k, int i, int j) const;

  /// Canonical stacking order of the structurally possible slots; shared by
  /// signature vectors, reports, and the numeric oracle.
  static std::vector<Slot> slots(int n);
  static std::string slot_label(const Slot& s);

  /// Coefficients in slots() order.
  std::vector<Expr> stacked() const;

 private:
  int n_;
  std::map<std::tuple<int, int, int>, Expr> coeffs_;
};

/// Exterior derivative of the coframe, expressed back in the coframe basis.
/// Computed from first principles: d(s_k) is expanded in coordinate
/// differentials, each dx_j is rewritten as theta^j / s_j (and dt as
/// theta^0 / s_0), and antisymmetric coefficients are collected.
StructureFunctions structure_functions(const OdeSystem& sys,
                                       const InvariantCoframe& cf);

/// Same coefficients with every symbolic derivative replaced by a central
/// finite difference of the coframe scales at p — an oracle independent of
/// the symbolic differentiation path. p must be interior with margin >= step.
struct NumericStructure {
  int n = 0;
  std::vector<double> values;  // slots() order
  double at(int k, int i, int j) const;
};

NumericStructure numeric_structure_oracle(const OdeSystem& sys,
                                          const InvariantCoframe& cf,
                                          const Point& p, double step);

/// Heuristic zero test used by the normalizer search: canonical zero, or
/// numerically zero at the box center and eight deterministic sample points.
/// Borderline expressions surface later as domain faults rather than being
/// silently misclassified.
bool identically_zero(const Expr& e, const OdeSystem& sys);

}  // namespace webgeo
