#pragma once

#include <stdexcept>
#include <string>

namespace bellfield {

// Correlation requested where the intensity differences carry no variance
// (alpha*beta == 0, or a fixed hidden phase).
struct ZeroVarianceError : std::domain_error {
  using std::domain_error::domain_error;
};

// A detector-pair intensity sum vanished and a ratio is undefined.
struct DegenerateIntensities : std::domain_error {
  using std::domain_error::domain_error;
};

// A matrix expected to be symmetric differs from its transpose beyond 1e-12.
struct NonSymmetricError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed moment targets for the discrete joint-existence test
// (out-of-range indices, duplicate pairs, |target| > 1). A solvable-but-
// infeasible target set is a normal `feasible = false` return, not a throw.
struct InfeasibleTargets : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input text could not be parsed (JSON config, CSV table, matrix file).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input parsed but failed validation (negative amplitude, unknown mode, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure; the message carries the offending path.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bellfield
