#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bellfield {

// Sign convention for the pairwise correlation of two settings:
// rho_ij = -sin(theta_i - theta_j) (first_minus_second) or
// rho_ij = -sin(theta_j - theta_i) (second_minus_first). The two give
// different matrices for the same angle list; second_minus_first is the
// default used by every built-in analysis.
enum class SignConvention { first_minus_second, second_minus_first };

struct AngleSet {
  std::vector<double> angles;  // radians
  SignConvention convention = SignConvention::second_minus_first;
};

// Symmetric, unit-diagonal, entries in [-1, 1].
struct CorrelationMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd entries;
};

// Throws NonSymmetricError / ValidationError when the invariants fail.
void validate(const CorrelationMatrix& matrix);

// rho_ij from the angle set under its convention; diagonal exactly 1.
CorrelationMatrix build_correlation_matrix(const AngleSet& angles);

// Ascending spectrum via cyclic Jacobi rotations.
std::vector<double> eigenvalues_symmetric(const CorrelationMatrix& matrix);

// Relative floor for calling a spectrum nonnegative: min eigenvalue >=
// -tol * max(1, max eigenvalue). Boundary cases (an exactly singular
// correlation matrix) must pass.
inline constexpr double kPsdTolerance = 1e-9;

struct ChshResult {
  double value = 0.0;
  bool violated = false;  // |value| > 2
};

// S = rho(t1,t2) - rho(t1,t2') + rho(t1',t2) + rho(t1',t2').
ChshResult chsh_value(const std::function<double(double, double)>& rho,
                      double theta1, double theta2, double theta1_prime,
                      double theta2_prime);

struct Bell3Result {
  double value = 0.0;
  bool satisfied = false;  // value >= -1
};

// rho12 + rho13 + rho23, necessary >= -1 for three +-1 variables.
Bell3Result bell3_sum(double rho12, double rho13, double rho23);

// A mean-zero Gaussian with the given correlation matrix; exists exactly
// when the matrix is positive semidefinite.
struct GaussianWitness {
  CorrelationMatrix covariance;
};

struct ContinuousJointResult {
  bool exists = false;
  std::vector<double> eigenvalues;  // ascending
  double tolerance = kPsdTolerance;
  std::optional<GaussianWitness> witness;
};

ContinuousJointResult joint_exists_continuous(const CorrelationMatrix& matrix,
                                              double tol = kPsdTolerance);

// Draws from the witness distribution (row = draw). Works on singular
// covariances by factoring through the eigendecomposition with negative
// roundoff eigenvalues clamped to zero.
Eigen::MatrixXd sample_gaussian(const GaussianWitness& witness,
                                std::int64_t draws, std::uint64_t seed);

// The four measured CHSH correlations, in the fixed variable order
// (theta1, theta1', theta2, theta2'). Positions (0,2), (0,3), (1,2), (1,3)
// of the 4x4 matrix are measured; (0,1) and (2,3) are free.
struct ChshCorrelations {
  double rho_12 = 0.0;    // corr(theta1,  theta2)
  double rho_12p = 0.0;   // corr(theta1,  theta2')
  double rho_1p2 = 0.0;   // corr(theta1', theta2)
  double rho_1p2p = 0.0;  // corr(theta1', theta2')
};

// The completed 4x4 unit-diagonal matrix for a candidate missing pair.
Eigen::Matrix4d chsh_matrix(const ChshCorrelations& measured, double rho_11p,
                            double rho_22p);

struct CompletionResult {
  double rho_11p = 0.0;  // corr(theta1, theta1') at the best completion
  double rho_22p = 0.0;  // corr(theta2, theta2') at the best completion
  double min_eigenvalue = 0.0;
  bool any_psd_completion = false;
  bool grid_point_psd = false;  // some point of the raw grid already passes
};

// Searches the two missing entries over [-1,1]^2 on a uniform grid (ties
// broken toward the lexicographically smallest grid point), then sharpens
// the best point by pattern search. min eigenvalue is concave in the
// entries, so the local refinement converges to the global optimum; it is
// needed because a feasible completion may be a single boundary point
// lying between grid points.
CompletionResult complete_chsh_matrix(const ChshCorrelations& measured,
                                      double grid_step = 0.01);

}  // namespace bellfield
