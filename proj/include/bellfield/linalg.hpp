#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bellfield/errors.hpp"

namespace bellfield::linalg {

template <typename Scalar>
struct SymmetricEigenResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // columns; a = eigenvectors * diag * eigenvectors^T
  int sweeps = 0;
};

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& a,
                  typename Derived::Scalar tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  return (a.derived() - a.derived().transpose()).cwiseAbs().maxCoeff() <= tol;
}

// Full spectrum of a symmetric matrix by cyclic Jacobi rotations. Sweeps
// until the off-diagonal Frobenius norm drops below off_tol or max_sweeps
// is reached; convergence is quadratic, so a handful of sweeps suffices at
// these sizes. Throws NonSymmetricError when the input is not symmetric
// within 1e-12.
template <typename Derived>
SymmetricEigenResult<typename Derived::Scalar> jacobi_symmetric_eigen(
    const Eigen::MatrixBase<Derived>& input,
    typename Derived::Scalar off_tol = 1e-14, int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  if (!is_symmetric(input)) {
    throw NonSymmetricError(
        "jacobi_symmetric_eigen: input is not symmetric within 1e-12");
  }

  const Eigen::Index n = input.rows();
  Matrix a = input.derived();
  Matrix v = Matrix::Identity(n, n);

  auto off_norm = [&]() {
    Scalar s = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += 2 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (sweep < max_sweeps && off_norm() >= off_tol) {
    ++sweep;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;

        const Scalar tau = (a(q, q) - a(p, p)) / (2 * apq);
        // Smaller-magnitude root of t^2 + 2 tau t - 1 = 0.
        const Scalar t = (tau >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(tau) + std::sqrt(1 + tau * tau));
        const Scalar c = 1 / std::sqrt(1 + t * t);
        const Scalar s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0;
        a(q, p) = 0;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigenResult<Scalar> result;
  result.eigenvalues = a.diagonal();
  result.eigenvectors = v;
  result.sweeps = sweep;

  // Ascending order, eigenvector columns permuted alongside.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    return result.eigenvalues(l) < result.eigenvalues(r);
  });
  Vector sorted_vals(n);
  Matrix sorted_vecs(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted_vals(i) = result.eigenvalues(order[static_cast<std::size_t>(i)]);
    sorted_vecs.col(i) =
        result.eigenvectors.col(order[static_cast<std::size_t>(i)]);
  }
  result.eigenvalues = std::move(sorted_vals);
  result.eigenvectors = std::move(sorted_vecs);
  return result;
}

// Determinant by cofactor expansion along the first row. Exponential in n;
// meant for the n <= 4 matrices handled here, where it serves as a route
// independent of the eigensolver.
template <typename Derived>
typename Derived::Scalar determinant_cofactor(
    const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix a = input.derived();
  const Eigen::Index n = a.rows();
  if (n != a.cols()) {
    throw std::invalid_argument("determinant_cofactor: matrix must be square");
  }
  if (n == 0) return Scalar(1);
  if (n == 1) return a(0, 0);
  Scalar det = 0;
  Scalar sign = 1;
  for (Eigen::Index j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    det += sign * a(0, j) * determinant_cofactor(minor);
    sign = -sign;
  }
  return det;
}

}  // namespace bellfield::linalg
