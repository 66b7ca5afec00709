#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace webgeo::cli {

/// Exit codes shared by all subcommands:
///   0  success (report produced, NotRefuted, VerifiedByMap)
///   1  parse, validation, domain, or policy errors
///   2  flat torsion (normalization unavailable)
///   3  refuted by an invariant
///   4  scalar matching failure (sign mismatch, quadrature, residual)
enum ExitCode {
  kOk = 0,
  kErrorUsage = 1,
  kFlatTorsion = 2,
  kRefuted = 3,
  kScalarMatchFailure = 4,
};

/// Dispatches `args` (without the program name) to the subcommands
/// invariants / check / solve1 / symdim. All output goes to the given
/// streams; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace webgeo::cli
