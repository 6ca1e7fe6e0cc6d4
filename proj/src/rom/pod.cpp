#include "wrom/rom/pod.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "wrom/errors.hpp"

namespace wrom::rom {

namespace {

constexpr double kNegligible = 1e-12;

int retained_count(const Eigen::VectorXd& eigenvalues, const PodOptions& options) {
  int n = static_cast<int>(eigenvalues.size());
  if (options.energy_tolerance > 0.0) {
    const double total = eigenvalues.cwiseAbs().sum();
    double acc = 0.0;
    for (int i = 0; i < eigenvalues.size(); ++i) {
      acc += std::abs(eigenvalues[i]);
      if (acc >= (1.0 - options.energy_tolerance) * total) {
        n = i + 1;
        break;
      }
    }
  }
  if (options.max_modes >= 0) n = std::min(n, options.max_modes);
  return n;
}

}  // namespace

bool orthonormalize_append(Eigen::MatrixXd& basis, Eigen::VectorXd v, const SparseMatrix& x, double drop) {
  if (basis.cols() > 0 && basis.rows() != v.size()) throw std::invalid_argument("orthonormalize_append: length mismatch");
  const double original = std::sqrt(std::max(0.0, v.dot(x * v)));
  if (original == 0.0 || !std::isfinite(original)) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
      v -= basis.col(j).dot(x * v) * basis.col(j);
    }
  }
  const double remainder = std::sqrt(std::max(0.0, v.dot(x * v)));
  if (remainder < drop * original) return false;
  basis.conservativeResize(v.size(), basis.cols() + 1);
  basis.col(basis.cols() - 1) = v / remainder;
  return true;
}

PodResult weighted_pod(const Eigen::MatrixXd& snapshots, const Eigen::VectorXd& weights, const SparseMatrix& x,
                       const PodOptions& options) {
  const Eigen::Index m = snapshots.cols();
  if (m < 1) throw std::invalid_argument("weighted_pod: no snapshots");
  if (weights.size() != m) throw std::invalid_argument("weighted_pod: one weight per snapshot required");
  if (x.rows() != snapshots.rows() || x.cols() != snapshots.rows()) {
    throw std::invalid_argument("weighted_pod: inner product does not match the snapshot length");
  }
  if (weights.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("weighted_pod: all weights are zero");

  PodResult result;
  result.basis.resize(snapshots.rows(), 0);
  if (snapshots.cwiseAbs().maxCoeff() == 0.0) return result;

  const Eigen::MatrixXd xs = x * snapshots;
  Eigen::MatrixXd c = snapshots.transpose() * xs;
  c = 0.5 * (c + c.transpose());

  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd candidates;  // unnormalized basis directions, one per eigenvalue

  if (weights.minCoeff() >= 0.0) {
    const Eigen::VectorXd root = weights.cwiseSqrt();
    Eigen::MatrixXd w = root.asDiagonal() * c * root.asDiagonal();
    w = 0.5 * (w + w.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w);
    if (eig.info() != Eigen::Success) throw NumericalFailure("weighted_pod: symmetric eigensolver failed");
    const Eigen::VectorXd lambda = eig.eigenvalues().reverse();
    const Eigen::MatrixXd z = eig.eigenvectors().rowwise().reverse();
    const double top = lambda[0];
    if (lambda.minCoeff() < -kNegligible * std::max(top, 0.0)) {
      std::ostringstream msg;
      msg << "weighted_pod: negative eigenvalue " << lambda.minCoeff() << " against largest " << top;
      throw NumericalFailure(msg.str());
    }
    int kept = 0;
    while (kept < lambda.size() && lambda[kept] > kNegligible * top) ++kept;
    eigenvalues = lambda.head(kept);
    candidates = snapshots * root.asDiagonal() * z.leftCols(kept);
    for (int i = 0; i < kept; ++i) candidates.col(i) /= std::sqrt(lambda[i]);
  } else {
    result.symmetric = false;
    const Eigen::MatrixXd pc = weights.asDiagonal() * c;
    Eigen::EigenSolver<Eigen::MatrixXd> eig(pc);
    if (eig.info() != Eigen::Success) throw NumericalFailure("weighted_pod: nonsymmetric eigensolver failed");
    const Eigen::VectorXcd lambda = eig.eigenvalues();
    std::vector<int> order(lambda.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(lambda[a]) > std::abs(lambda[b]); });
    const double top = std::abs(lambda[order[0]]);
    std::vector<int> kept;
    for (int i : order) {
      if (std::abs(lambda[i]) > kNegligible * top) kept.push_back(i);
    }
    eigenvalues.resize(static_cast<Eigen::Index>(kept.size()));
    candidates.resize(snapshots.rows(), static_cast<Eigen::Index>(kept.size()));
    const Eigen::MatrixXcd vectors = eig.eigenvectors();
    for (std::size_t i = 0; i < kept.size(); ++i) {
      eigenvalues[static_cast<Eigen::Index>(i)] = lambda[kept[i]].real();
      candidates.col(static_cast<Eigen::Index>(i)) = snapshots * vectors.col(kept[i]).real();
    }
  }

  result.eigenvalues = eigenvalues;
  const int n = retained_count(eigenvalues, options);
  for (int i = 0; i < n; ++i) orthonormalize_append(result.basis, candidates.col(i), x);
  return result;
}

double weighted_projection_error(const Eigen::MatrixXd& snapshots, const Eigen::VectorXd& weights,
                                 const Eigen::MatrixXd& basis, int n, const SparseMatrix& x) {
  if (n < 0 || n > basis.cols()) throw std::invalid_argument("weighted_projection_error: bad truncation");
  const Eigen::MatrixXd z = basis.leftCols(n);
  const Eigen::MatrixXd residual = snapshots - z * (z.transpose() * (x * snapshots));
  const Eigen::MatrixXd xr = x * residual;
  double total = 0.0;
  for (Eigen::Index i = 0; i < snapshots.cols(); ++i) total += weights[i] * residual.col(i).dot(xr.col(i));
  return total;
}

}  // namespace wrom::rom
