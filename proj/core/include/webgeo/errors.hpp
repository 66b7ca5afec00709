#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace webgeo {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or file text. `offset` is a 0-based byte index into
/// the offending string.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

/// Identifier that is neither a declared variable nor a known function.
class UnknownVariable : public Error {
 public:
  UnknownVariable(std::string name, std::size_t offset)
      : Error("unknown variable '" + name + "' (at byte offset " +
              std::to_string(offset) + ")"),
        name(std::move(name)),
        offset(offset) {}
  std::string name;
  std::size_t offset;
};

/// Numeric evaluation left the domain of an operation (log of a nonpositive
/// value, division by zero, negative base with fractional power, ...).
/// Carries the offending subexpression and the evaluation point.
class DomainFault : public Error {
 public:
  DomainFault(std::string reason, std::string subexpression, std::string at)
      : Error(reason + " in '" + subexpression + "' at {" + at + "}"),
        reason(std::move(reason)),
        subexpression(std::move(subexpression)),
        at(std::move(at)) {}
  std::string reason;
  std::string subexpression;
  std::string at;
};

/// Operation requires a different system dimension (e.g. torsion needs n >= 2).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// System fails a hard validity precondition of the pipeline.
class InvalidSystem : public Error {
 public:
  using Error::Error;
};

/// Every torsion coefficient vanishes identically; the one-loop normalization
/// has nothing to fix the group parameter against.
class FlatTorsion : public Error {
 public:
  using Error::Error;
};

/// Pushforward would leave the autonomous class (time component has a
/// nonconstant derivative).
class NonAutonomousResult : public Error {
 public:
  using Error::Error;
};

/// A map component could not be inverted on the requested interval.
class InversionFailure : public Error {
 public:
  using Error::Error;
};

/// The two scalar equations have reciprocal slopes of opposite sign; no
/// monotone matching map passes through the anchor.
class SignMismatch : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration failed to reach the requested tolerance.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// Two signature samples were produced under different normalizer choices
/// and cannot be compared.
class PolicyMismatch : public Error {
 public:
  using Error::Error;
};

/// Too few evaluable probe points for a rank estimate.
class InsufficientProbes : public Error {
 public:
  using Error::Error;
};

/// More than the tolerated share of sample points fell on zeros of the
/// normalizing invariant.
class IllConditionedNormalizer : public Error {
 public:
  IllConditionedNormalizer(std::size_t skipped, std::size_t total)
      : Error("normalizer vanishes on " + std::to_string(skipped) + " of " +
              std::to_string(total) + " sample points"),
        skipped(skipped),
        total(total) {}
  std::size_t skipped;
  std::size_t total;
};

}  // namespace webgeo
