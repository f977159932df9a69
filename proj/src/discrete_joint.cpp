#include "bellfield/discrete_joint.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "bellfield/errors.hpp"

namespace bellfield {

namespace linalg {

Phase1Result phase1_simplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            double tol) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();

  // Tableau [A | I | b] with rows flipped so b >= 0; artificial variables
  // n..n+m-1 form the starting basis.
  Eigen::MatrixXd t(m, n + m + 1);
  t.setZero();
  for (Eigen::Index r = 0; r < m; ++r) {
    const double flip = b(r) < 0.0 ? -1.0 : 1.0;
    t.row(r).head(n) = flip * a.row(r);
    t(r, n + r) = 1.0;
    t(r, n + m) = flip * b(r);
  }

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) basis[static_cast<std::size_t>(r)] = n + r;

  // Phase-1 cost row: minimize the sum of artificials. Reduced costs start
  // as -(column sums over A), zero on the artificials themselves.
  Eigen::VectorXd cost(n + m);
  cost.setZero();
  for (Eigen::Index j = 0; j < n; ++j) cost(j) = -t.col(j).head(m).sum();
  double objective = t.col(n + m).head(m).sum();

  const double pivot_eps = 1e-11;
  while (true) {
    // Bland: entering = lowest index with a negative reduced cost.
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (cost(j) < -pivot_eps) {
        entering = j;
        break;
      }
    }
    if (entering < 0) break;

    // Ratio test; ties again resolved toward the lowest basis index.
    Eigen::Index leaving = -1;
    double best_ratio = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      const double coef = t(r, entering);
      if (coef <= pivot_eps) continue;
      const double ratio = t(r, n + m) / coef;
      if (leaving < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis[static_cast<std::size_t>(r)] <
                                      basis[static_cast<std::size_t>(leaving)])) {
        leaving = r;
        best_ratio = ratio;
      }
    }
    if (leaving < 0) break;  // unbounded cannot happen with x >= 0 and sum p

    // Pivot.
    t.row(leaving) /= t(leaving, entering);
    for (Eigen::Index r = 0; r < m; ++r) {
      if (r != leaving && t(r, entering) != 0.0) {
        t.row(r) -= t(r, entering) * t.row(leaving);
      }
    }
    const double factor = cost(entering);
    cost -= factor * t.row(leaving).head(n + m);
    objective -= factor * t(leaving, n + m);
    basis[static_cast<std::size_t>(leaving)] = entering;
  }

  Phase1Result result;
  result.objective = std::max(objective, 0.0);
  result.feasible = objective <= tol;
  result.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index var = basis[static_cast<std::size_t>(r)];
    if (var < n) result.x(var) = std::max(t(r, n + m), 0.0);
  }
  return result;
}

}  // namespace linalg

DiscreteJointResult joint_exists_discrete(int n,
                                          const std::vector<double>& means,
                                          const std::vector<PairTarget>& pairs,
                                          double tol) {
  if (n < 1 || n > 5) {
    throw InfeasibleTargets("joint_exists_discrete: n must be in 1..5");
  }
  if (means.size() != static_cast<std::size_t>(n)) {
    throw InfeasibleTargets("joint_exists_discrete: need one mean per variable");
  }
  for (double m : means) {
    if (std::abs(m) > 1.0) {
      throw InfeasibleTargets("joint_exists_discrete: |mean| > 1");
    }
  }
  std::set<std::pair<int, int>> seen;
  for (const PairTarget& p : pairs) {
    if (p.i < 0 || p.j < 0 || p.i >= n || p.j >= n || p.i == p.j) {
      throw InfeasibleTargets("joint_exists_discrete: bad pair indices");
    }
    if (!seen.insert({std::min(p.i, p.j), std::max(p.i, p.j)}).second) {
      throw InfeasibleTargets("joint_exists_discrete: duplicate pair");
    }
    if (std::abs(p.moment) > 1.0) {
      throw InfeasibleTargets("joint_exists_discrete: |pair moment| > 1");
    }
  }

  const int atoms = 1 << n;
  const auto sign_of = [](int atom, int k) {
    return (atom >> k) & 1 ? 1.0 : -1.0;
  };

  const Eigen::Index rows = 1 + n + static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd a(rows, atoms);
  Eigen::VectorXd b(rows);
  for (int atom = 0; atom < atoms; ++atom) a(0, atom) = 1.0;
  b(0) = 1.0;
  for (int k = 0; k < n; ++k) {
    for (int atom = 0; atom < atoms; ++atom) a(1 + k, atom) = sign_of(atom, k);
    b(1 + k) = means[static_cast<std::size_t>(k)];
  }
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const Eigen::Index r = 1 + n + static_cast<Eigen::Index>(p);
    for (int atom = 0; atom < atoms; ++atom) {
      a(r, atom) = sign_of(atom, pairs[p].i) * sign_of(atom, pairs[p].j);
    }
    b(r) = pairs[p].moment;
  }

  const auto lp = linalg::phase1_simplex(a, b, tol);

  DiscreteJointResult result;
  result.feasible = lp.feasible;
  result.tolerance = tol;
  if (lp.feasible) {
    DiscreteAtoms witness;
    witness.n = n;
    witness.probabilities.assign(lp.x.data(), lp.x.data() + atoms);
    result.max_constraint_residual = (a * lp.x - b).cwiseAbs().maxCoeff();
    result.witness = std::move(witness);
  }
  return result;
}

}  // namespace bellfield
