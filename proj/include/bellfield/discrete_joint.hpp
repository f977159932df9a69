#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace bellfield {

// One pairwise raw-moment constraint E[X_i X_j] = moment, i < j.
struct PairTarget {
  int i = 0;
  int j = 1;
  double moment = 0.0;
};

// A probability vector over {-1,+1}^n; atom index bit k set means X_k = +1.
struct DiscreteAtoms {
  int n = 0;
  std::vector<double> probabilities;
};

struct DiscreteJointResult {
  bool feasible = false;
  double tolerance = 1e-9;
  std::optional<DiscreteAtoms> witness;
  double max_constraint_residual = 0.0;  // at the witness
};

// Decides whether some distribution on {-1,+1}^n has the given first
// moments and the given pairwise raw moments (unlisted pairs are free).
// Exact decision by phase-1 simplex over the 2^n atoms; n <= 5. Throws
// InfeasibleTargets on malformed input (bad indices, duplicate pairs,
// |target| > 1); an honest "no such distribution" is feasible = false.
DiscreteJointResult joint_exists_discrete(int n,
                                          const std::vector<double>& means,
                                          const std::vector<PairTarget>& pairs,
                                          double tol = 1e-9);

namespace linalg {

struct Phase1Result {
  bool feasible = false;
  Eigen::VectorXd x;       // a nonnegative solution of A x = b when feasible
  double objective = 0.0;  // residual mass left on the artificial variables
};

// Finds x >= 0 with A x = b, or reports infeasibility, by minimizing the
// sum of artificial variables with Bland's rule (no cycling). Feasible
// when the optimum is <= tol.
Phase1Result phase1_simplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            double tol = 1e-9);

}  // namespace linalg

}  // namespace bellfield
