#include "wrom/fom/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wrom/errors.hpp"

namespace wrom::fom {

namespace {

using Lu = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

std::string describe(const FlowParameter& y) {
  std::ostringstream os;
  os.precision(17);
  os << "(L1=" << y.L1 << ", h1=" << y.h1 << ", L2=" << y.L2 << ", h2=" << y.h2 << ", v_max=" << y.vmax << ")";
  return os.str();
}

void factorize(Lu& lu, const SparseMatrix& k, const FlowParameter& y) {
  lu.analyzePattern(k);
  lu.factorize(k);
  if (lu.info() != Eigen::Success) {
    throw NumericalFailure("saddle-point factorization failed at " + describe(y) + ": " + lu.lastErrorMessage());
  }
}

TruthSolution assemble_solution(const AffineModel& model, const FlowParameter& y, const Eigen::VectorXd& unknowns) {
  const int nf = model.free_velocity_size();
  TruthSolution sol;
  sol.parameter = y;
  sol.velocity = model.extend_velocity(unknowns.head(nf)) + y.vmax * model.lifting();
  sol.pressure = unknowns.tail(model.pressure_size());
  return sol;
}

}  // namespace

SparseMatrix saddle_point_matrix(const AffineModel& model, const SparseMatrix& a_full, const SparseMatrix& b_full) {
  const SparseMatrix& sel = model.free_selection();
  const SparseMatrix a = sel * a_full * sel.transpose();
  const SparseMatrix b = b_full * sel.transpose();
  const int nf = model.free_velocity_size();
  const int np = model.pressure_size();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nonZeros() + 2 * b.nonZeros());
  for (int c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  for (int c = 0; c < b.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(b, c); it; ++it) {
      t.emplace_back(nf + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nf + it.row(), it.value());
    }
  }
  SparseMatrix k(nf + np, nf + np);
  k.setFromTriplets(t.begin(), t.end());
  k.makeCompressed();
  return k;
}

TruthSolution solve_stokes(const AffineModel& model, const FlowParameter& y) {
  const SparseMatrix b = model.b(y);
  const SparseMatrix k = saddle_point_matrix(model, model.a(y), b);
  const int nf = model.free_velocity_size();
  Eigen::VectorXd rhs(nf + model.pressure_size());
  rhs.head(nf) = model.restrict_velocity(model.f(y));
  rhs.tail(model.pressure_size()) = model.g(y);

  Lu lu;
  factorize(lu, k, y);
  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) throw NumericalFailure("Stokes solve produced non-finite values at " + describe(y));
  TruthSolution sol = assemble_solution(model, y, x);
  sol.diagnostics.residual_norms.push_back((k * x - rhs).norm());
  sol.diagnostics.divergence_residual = (b * sol.velocity).norm();
  return sol;
}

TruthSolution solve_navier_stokes(const AffineModel& model, const FlowParameter& y, const NewtonOptions& options,
                                  const TruthSolution* initial_guess) {
  const int nf = model.free_velocity_size();
  const int np = model.pressure_size();
  const SparseMatrix& sel = model.free_selection();
  const SparseMatrix a = model.a(y);
  const SparseMatrix b = model.b(y);
  Eigen::VectorXd forcing = Eigen::VectorXd::Zero(model.velocity_size());
  const Eigen::VectorXd theta_fs = model.theta_fs(y);
  for (int q = 0; q < kAffineTerms; ++q) forcing += theta_fs[q] * model.body_force_blocks()[q];

  // residual of the momentum and continuity equations at total velocity u
  const auto residual = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& p) {
    Eigen::VectorXd r(nf + np);
    r.head(nf) = sel * (a * u + b.transpose() * p + model.convection_residual(y, u) - forcing);
    r.tail(np) = b * u;
    return r;
  };

  const Eigen::VectorXd lift = y.vmax * model.lifting();
  const double reference = residual(lift, Eigen::VectorXd::Zero(np)).norm();

  TruthSolution sol = initial_guess ? *initial_guess : solve_stokes(model, y);
  sol.parameter = y;
  sol.diagnostics = {};
  Eigen::VectorXd u = sol.velocity;
  Eigen::VectorXd p = sol.pressure;

  double last = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd r = residual(u, p);
    last = r.norm();
    sol.diagnostics.residual_norms.push_back(last);
    if (last <= options.tolerance * reference || last == 0.0) {
      sol.velocity = u;
      sol.pressure = p;
      sol.diagnostics.newton_iterations = it;
      sol.diagnostics.divergence_residual = (b * u).norm();
      return sol;
    }
    if (!std::isfinite(last)) break;
    const SparseMatrix jac = saddle_point_matrix(model, a + model.convection(y, u, true), b);
    Lu lu;
    factorize(lu, jac, y);
    const Eigen::VectorXd step = lu.solve(r);
    u -= model.extend_velocity(step.head(nf));
    p -= step.tail(np);
  }
  std::ostringstream msg;
  msg << "Navier-Stokes Newton did not converge at " << describe(y) << " after " << options.max_iterations
      << " iterations; last residual " << last << " (reference " << reference << ")";
  throw NumericalFailure(msg.str());
}

TruthSolution solve_navier_stokes_with_continuation(const AffineModel& model, const FlowParameter& y,
                                                    const NewtonOptions& options) {
  try {
    return solve_navier_stokes(model, y, options);
  } catch (const NumericalFailure&) {
  }
  // march v_max up in damped steps of one half
  std::vector<double> ramp;
  for (double v = y.vmax; v > y.vmax / 64.0; v *= 0.5) ramp.push_back(v);
  std::reverse(ramp.begin(), ramp.end());
  TruthSolution current;
  bool have = false;
  for (double v : ramp) {
    FlowParameter step = y;
    step.vmax = v;
    if (have) {
      const double ratio = v / current.parameter.vmax;
      TruthSolution guess = current;
      guess.velocity = ratio * current.velocity;
      guess.pressure = ratio * current.pressure;
      current = solve_navier_stokes(model, step, options, &guess);
    } else {
      current = solve_navier_stokes(model, step, options);
      have = true;
    }
  }
  return current;
}

TruthSolution solve(const AffineModel& model, const FlowParameter& y, Equation equation) {
  return equation == Equation::Stokes ? solve_stokes(model, y) : solve_navier_stokes_with_continuation(model, y);
}

double seminorm(const AffineModel& model, const Eigen::VectorXd& field, Norm which) {
  const SparseMatrix& x = which == Norm::VelocityH1 ? model.velocity_inner_product() : model.pressure_inner_product();
  if (field.size() != x.rows()) throw std::invalid_argument("seminorm: field length does not match the inner product");
  return std::sqrt(std::max(0.0, field.dot(x * field)));
}

double inf_sup_constant(const AffineModel& model, const FlowParameter& y) {
  const SparseMatrix& sel = model.free_selection();
  const SparseMatrix xf = sel * model.velocity_inner_product() * sel.transpose();
  const SparseMatrix bf = model.b(y) * sel.transpose();
  Eigen::SimplicialLDLT<SparseMatrix> chol(xf);
  if (chol.info() != Eigen::Success) throw NumericalFailure("inf_sup_constant: velocity inner product is singular");
  const Eigen::MatrixXd bt = Eigen::MatrixXd(bf.transpose());
  const Eigen::MatrixXd y_mat = chol.solve(bt);
  const Eigen::MatrixXd schur = bf * y_mat;
  const Eigen::MatrixXd xp = Eigen::MatrixXd(model.pressure_inner_product());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (schur + schur.transpose()), xp,
                                                                Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().minCoeff()));
}

double stability_constant(const AffineModel& model, const FlowParameter& y) {
  const SparseMatrix k = saddle_point_matrix(model, model.a(y), model.b(y));
  const SparseMatrix& sel = model.free_selection();
  const int nf = model.free_velocity_size();
  const int n = nf + model.pressure_size();
  // X = diag(X_u on free dofs, X_p)
  const SparseMatrix xf = sel * model.velocity_inner_product() * sel.transpose();
  std::vector<Eigen::Triplet<double>> t;
  for (int c = 0; c < xf.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(xf, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  const SparseMatrix& xp = model.pressure_inner_product();
  for (int c = 0; c < xp.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(xp, c); it; ++it) t.emplace_back(nf + it.row(), nf + it.col(), it.value());
  }
  SparseMatrix x(n, n);
  x.setFromTriplets(t.begin(), t.end());

  Lu lu;
  factorize(lu, k, y);

  // inverse subspace iteration with Rayleigh-Ritz on the pencil (K, X)
  const int block = std::min(8, n);
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd v(n, block);
  for (int j = 0; j < block; ++j) {
    for (int i = 0; i < n; ++i) v(i, j) = normal(rng);
  }
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 500; ++it) {
    Eigen::MatrixXd w = lu.solve(Eigen::MatrixXd(x * v));
    // X-orthonormalize the block
    const Eigen::MatrixXd gram = w.transpose() * (x * w);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ge(0.5 * (gram + gram.transpose()));
    const Eigen::VectorXd evals = ge.eigenvalues().cwiseMax(1e-300);
    w = w * ge.eigenvectors() * evals.cwiseSqrt().cwiseInverse().asDiagonal();
    const Eigen::MatrixXd reduced = w.transpose() * (k * w);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> re(0.5 * (reduced + reduced.transpose()));
    std::vector<int> order(block);
    for (int j = 0; j < block; ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return std::abs(re.eigenvalues()[i]) < std::abs(re.eigenvalues()[j]); });
    Eigen::MatrixXd ritz(n, block);
    for (int j = 0; j < block; ++j) ritz.col(j) = w * re.eigenvectors().col(order[j]);
    v = ritz;
    const double smallest = std::abs(re.eigenvalues()[order[0]]);
    if (std::abs(smallest - previous) <= 1e-12 * smallest) return smallest;
    previous = smallest;
  }
  return previous;
}

}  // namespace wrom::fom
