#include "bellfield/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellfield/errors.hpp"
#include "bellfield/linalg.hpp"
#include "bellfield/rng.hpp"

namespace bellfield {

void validate(const CorrelationMatrix& matrix) {
  const auto& m = matrix.entries;
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw ValidationError("correlation matrix must be square, n >= 2");
  }
  if (!matrix.labels.empty() &&
      static_cast<Eigen::Index>(matrix.labels.size()) != m.rows()) {
    throw ValidationError("correlation matrix labels do not match its size");
  }
  if (!linalg::is_symmetric(m)) {
    throw NonSymmetricError("correlation matrix is not symmetric within 1e-12");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 1.0) {
      throw ValidationError("correlation matrix diagonal must be exactly 1");
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > 1.0 + 1e-12) {
        throw ValidationError("correlation matrix entries must lie in [-1,1]");
      }
    }
  }
}

CorrelationMatrix build_correlation_matrix(const AngleSet& set) {
  const auto n = static_cast<Eigen::Index>(set.angles.size());
  if (n < 2) {
    throw ValidationError("build_correlation_matrix: needs at least 2 angles");
  }
  CorrelationMatrix out;
  out.entries = Eigen::MatrixXd::Identity(n, n);
  out.labels.reserve(set.angles.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.labels.push_back("theta" + std::to_string(i + 1));
  }
  const double sign =
      set.convention == SignConvention::second_minus_first ? 1.0 : -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double rho = -std::sin(sign * (set.angles[static_cast<std::size_t>(j)] -
                                           set.angles[static_cast<std::size_t>(i)]));
      out.entries(i, j) = rho;
      out.entries(j, i) = rho;
    }
  }
  validate(out);
  return out;
}

std::vector<double> eigenvalues_symmetric(const CorrelationMatrix& matrix) {
  validate(matrix);
  const auto eig = linalg::jacobi_symmetric_eigen(matrix.entries);
  return std::vector<double>(eig.eigenvalues.data(),
                             eig.eigenvalues.data() + eig.eigenvalues.size());
}

ChshResult chsh_value(const std::function<double(double, double)>& rho,
                      double theta1, double theta2, double theta1_prime,
                      double theta2_prime) {
  const double s = rho(theta1, theta2) - rho(theta1, theta2_prime) +
                   rho(theta1_prime, theta2) + rho(theta1_prime, theta2_prime);
  return ChshResult{s, std::abs(s) > 2.0};
}

Bell3Result bell3_sum(double rho12, double rho13, double rho23) {
  const double s = rho12 + rho13 + rho23;
  return Bell3Result{s, s >= -1.0};
}

ContinuousJointResult joint_exists_continuous(const CorrelationMatrix& matrix,
                                              double tol) {
  ContinuousJointResult result;
  result.eigenvalues = eigenvalues_symmetric(matrix);
  result.tolerance = tol;
  const double min_eig = result.eigenvalues.front();
  const double max_eig = result.eigenvalues.back();
  result.exists = min_eig >= -tol * std::max(1.0, max_eig);
  if (result.exists) {
    result.witness = GaussianWitness{matrix};
  }
  return result;
}

Eigen::MatrixXd sample_gaussian(const GaussianWitness& witness,
                                std::int64_t draws, std::uint64_t seed) {
  const Eigen::MatrixXd& cov = witness.covariance.entries;
  const auto n = cov.rows();
  const auto eig = linalg::jacobi_symmetric_eigen(cov);

  Eigen::MatrixXd factor(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    factor.col(j) =
        eig.eigenvectors.col(j) * std::sqrt(std::max(eig.eigenvalues(j), 0.0));
  }

  Eigen::MatrixXd out(draws, n);
  for (std::int64_t i = 0; i < draws; ++i) {
    Eigen::VectorXd z(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      z(k) = rng::normal(seed, static_cast<std::uint64_t>(i) *
                                   static_cast<std::uint64_t>(n) +
                               static_cast<std::uint64_t>(k));
    }
    out.row(i) = (factor * z).transpose();
  }
  return out;
}

Eigen::Matrix4d chsh_matrix(const ChshCorrelations& measured, double rho_11p,
                            double rho_22p) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 1) = m(1, 0) = rho_11p;
  m(0, 2) = m(2, 0) = measured.rho_12;
  m(0, 3) = m(3, 0) = measured.rho_12p;
  m(1, 2) = m(2, 1) = measured.rho_1p2;
  m(1, 3) = m(3, 1) = measured.rho_1p2p;
  m(2, 3) = m(3, 2) = rho_22p;
  return m;
}

namespace {

double min_eigenvalue_of_completion(const ChshCorrelations& measured, double x,
                                    double y) {
  const auto eig =
      linalg::jacobi_symmetric_eigen(Eigen::MatrixXd(chsh_matrix(measured, x, y)));
  return eig.eigenvalues(0);
}

double max_eigenvalue_of_completion(const ChshCorrelations& measured, double x,
                                    double y) {
  const auto eig =
      linalg::jacobi_symmetric_eigen(Eigen::MatrixXd(chsh_matrix(measured, x, y)));
  return eig.eigenvalues(3);
}

}  // namespace

CompletionResult complete_chsh_matrix(const ChshCorrelations& measured,
                                      double grid_step) {
  if (grid_step <= 0.0 || grid_step > 2.0) {
    throw ValidationError("complete_chsh_matrix: grid_step must be in (0,2]");
  }
  for (double rho : {measured.rho_12, measured.rho_12p, measured.rho_1p2,
                     measured.rho_1p2p}) {
    if (std::abs(rho) > 1.0) {
      throw ValidationError(
          "complete_chsh_matrix: measured correlations must lie in [-1,1]");
    }
  }

  const auto steps = static_cast<long>(std::llround(2.0 / grid_step));
  auto grid_value = [&](long k) {
    return std::min(1.0, -1.0 + static_cast<double>(k) * grid_step);
  };

  double best_x = -1.0;
  double best_y = -1.0;
  double best_min = -std::numeric_limits<double>::infinity();
  bool grid_psd = false;
  for (long kx = 0; kx <= steps; ++kx) {
    const double x = grid_value(kx);
    for (long ky = 0; ky <= steps; ++ky) {
      const double y = grid_value(ky);
      const double mn = min_eigenvalue_of_completion(measured, x, y);
      if (mn > best_min) {  // strict: ties keep the lexicographically first
        best_min = mn;
        best_x = x;
        best_y = y;
      }
      if (!grid_psd) {
        const double mx = max_eigenvalue_of_completion(measured, x, y);
        if (mn >= -kPsdTolerance * std::max(1.0, mx)) grid_psd = true;
      }
    }
  }

  // Pattern-search refinement. The PSD set of a completion problem can be
  // a single point between grid nodes (it is whenever a measured entry is
  // +-1), so the grid alone can miss a feasible completion; concavity of
  // the minimum eigenvalue makes this local ascent globally convergent.
  double step = grid_step;
  while (step > 1e-10) {
    bool moved = false;
    const double candidates[4][2] = {{best_x + step, best_y},
                                     {best_x - step, best_y},
                                     {best_x, best_y + step},
                                     {best_x, best_y - step}};
    for (const auto& c : candidates) {
      const double x = std::clamp(c[0], -1.0, 1.0);
      const double y = std::clamp(c[1], -1.0, 1.0);
      const double mn = min_eigenvalue_of_completion(measured, x, y);
      if (mn > best_min) {
        best_min = mn;
        best_x = x;
        best_y = y;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }

  CompletionResult result;
  result.rho_11p = best_x;
  result.rho_22p = best_y;
  result.min_eigenvalue = best_min;
  result.grid_point_psd = grid_psd;
  const double mx = max_eigenvalue_of_completion(measured, best_x, best_y);
  result.any_psd_completion = best_min >= -kPsdTolerance * std::max(1.0, mx);
  return result;
}

}  // namespace bellfield
