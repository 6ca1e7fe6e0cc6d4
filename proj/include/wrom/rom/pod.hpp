#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace wrom::rom {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct PodOptions {
  int max_modes = -1;              // negative: keep every non-negligible mode
  double energy_tolerance = 0.0;   // > 0: smallest N capturing (1 - tol) of the total energy
};

struct PodResult {
  Eigen::MatrixXd basis;        // X-orthonormal columns
  Eigen::VectorXd eigenvalues;  // full retained spectrum, ordered by decreasing magnitude
  bool symmetric = true;        // false when signed weights forced the nonsymmetric route
};

/// Weighted POD of the snapshot columns. With non-negative weights the
/// eigenproblem is solved on P^{1/2} C P^{1/2}; with any negative weight on
/// the nonsymmetric P C directly.
PodResult weighted_pod(const Eigen::MatrixXd& snapshots, const Eigen::VectorXd& weights, const SparseMatrix& x,
                       const PodOptions& options = {});

/// Two-pass modified Gram-Schmidt of `v` against the X-orthonormal columns of
/// `basis`. Appends the normalized result and returns true, or returns false
/// when the remainder falls below `drop` times the original X-norm.
bool orthonormalize_append(Eigen::MatrixXd& basis, Eigen::VectorXd v, const SparseMatrix& x, double drop = 1e-10);

/// sum_i w_i || s_i - P s_i ||_X^2 with P the X-orthogonal projector onto the
/// first `n` columns of an X-orthonormal basis.
double weighted_projection_error(const Eigen::MatrixXd& snapshots, const Eigen::VectorXd& weights,
                                 const Eigen::MatrixXd& basis, int n, const SparseMatrix& x);

}  // namespace wrom::rom
