#pragma once

#include <Eigen/Dense>

#include <vector>

#include "wrom/fom/affine_model.hpp"

namespace wrom::fom {

struct SolverDiagnostics {
  int newton_iterations = 0;
  std::vector<double> residual_norms;
  double divergence_residual = 0.0;  // ||B(y) u - 0|| with the lifting included
};

/// Truth solution with the lifting already added back to the velocity.
struct TruthSolution {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  FlowParameter parameter;
  SolverDiagnostics diagnostics;

  /// velocity - v_max * lifting: the part living in the homogeneous space.
  Eigen::VectorXd homogeneous_velocity(const AffineModel& model) const {
    return velocity - parameter.vmax * model.lifting();
  }
};

/// Saddle-point system [A B^T; B 0] on the free velocity dofs, solved by a
/// sparse LU factorization.
TruthSolution solve_stokes(const AffineModel& model, const FlowParameter& y);

struct NewtonOptions {
  double tolerance = 1e-10;  // relative to the residual of the zero homogeneous state
  int max_iterations = 50;
};

/// Newton iteration on the full nonlinear residual, started from the Stokes
/// solution unless an initial guess is supplied.
TruthSolution solve_navier_stokes(const AffineModel& model, const FlowParameter& y, const NewtonOptions& options = {},
                                  const TruthSolution* initial_guess = nullptr);

/// As solve_navier_stokes, but on failure retries through a v_max ramp with
/// halving steps.
TruthSolution solve_navier_stokes_with_continuation(const AffineModel& model, const FlowParameter& y,
                                                    const NewtonOptions& options = {});

TruthSolution solve(const AffineModel& model, const FlowParameter& y, Equation equation);

enum class Norm { VelocityH1, PressureL2 };

/// sqrt(v^T X v) with X the reference-domain H1-seminorm or L2 matrix.
double seminorm(const AffineModel& model, const Eigen::VectorXd& field, Norm which);

/// Smallest generalized singular value of B(y) against the velocity and
/// pressure inner products (discrete inf-sup constant).
double inf_sup_constant(const AffineModel& model, const FlowParameter& y);

/// Smallest |mu| with K(y) v = mu X v, K the Stokes saddle-point operator on
/// the free dofs and X = diag(X_u, X_p): the stability constant of the
/// velocity-pressure pair in the combined norm.
double stability_constant(const AffineModel& model, const FlowParameter& y);

/// Full saddle-point matrix on (free velocity, pressure).
SparseMatrix saddle_point_matrix(const AffineModel& model, const SparseMatrix& a_full, const SparseMatrix& b_full);

}  // namespace wrom::fom
