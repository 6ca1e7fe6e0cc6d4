#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "wrom/fom/affine_model.hpp"
#include "wrom/rom/reduced_basis.hpp"

namespace wrom::rom {

/// Reduced coefficients for one parameter: velocity coefficients over the
/// selected velocity columns, pressure coefficients over the selected
/// pressure columns.
struct ReducedSolution {
  int n = 0;
  fom::FlowParameter parameter;
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  int newton_iterations = 0;
};

struct FullSolution {
  Eigen::VectorXd velocity;  // includes v_max * lifting
  Eigen::VectorXd pressure;
};

struct ReducedOptions {
  double newton_tolerance = 1e-12;  // relative to the residual of the zero reduced state
  int max_newton_iterations = 50;
};

/// Galerkin projection of the affine blocks onto a ReducedBasis. Immutable
/// after construction; online solves touch only dense reduced arrays.
class ReducedModel {
 public:
  ReducedModel() = default;
  ReducedModel(const fom::AffineModel& model, ReducedBasis basis);

  const ReducedBasis& basis() const { return basis_; }
  fom::Equation equation() const { return equation_; }
  const Eigen::Vector2d& body_force() const { return body_force_; }
  const std::string& mesh_hash() const { return mesh_hash_; }
  int refinement() const { return refinement_; }
  int max_size() const { return basis_.size(); }
  const Eigen::VectorXd& lifting() const { return lifting_; }

  // projected blocks over every stored column
  const std::vector<Eigen::MatrixXd>& stiffness() const { return a_; }   // Z^T A_q Z
  const std::vector<Eigen::MatrixXd>& divergence() const { return b_; }  // Z_p^T B_q Z
  const Eigen::MatrixXd& lifting_rhs() const { return f0_; }             // column q: Z^T f0_q
  const Eigen::MatrixXd& body_force_rhs() const { return fs_; }          // column q: Z^T fs_q
  const Eigen::MatrixXd& lifting_div() const { return g_; }              // column q: Z_p^T g_q
  /// convection()[q][j](i, k) = c_q(zeta_j, zeta_k, zeta_i)
  const std::vector<std::vector<Eigen::MatrixXd>>& convection() const { return c_; }
  /// (i, k) = c_q(u_g, zeta_k, zeta_i)
  const std::vector<Eigen::MatrixXd>& lifting_advects() const { return cg_; }
  /// (i, j) = c_q(zeta_j, u_g, zeta_i)
  const std::vector<Eigen::MatrixXd>& advects_lifting() const { return gc_; }
  /// column q: c_q(u_g, u_g, zeta_i)
  const Eigen::MatrixXd& lifting_self() const { return gg_; }

  /// Dense reduced saddle-point matrix and right-hand side (Stokes part).
  void stokes_system(const fom::FlowParameter& y, int n, Eigen::MatrixXd& k, Eigen::VectorXd& rhs) const;

  ReducedSolution online_solve(const fom::FlowParameter& y, int n, fom::Equation kind,
                               const ReducedOptions& options = {}) const;
  ReducedSolution online_solve(const fom::FlowParameter& y, int n, const ReducedOptions& options = {}) const {
    return online_solve(y, n, equation_, options);
  }

  FullSolution reconstruct(const ReducedSolution& s) const;
  /// X-orthogonal projection coefficients of a full solution at size n.
  ReducedSolution project(const fom::AffineModel& model, const Eigen::VectorXd& velocity, const Eigen::VectorXd& pressure,
                          const fom::FlowParameter& y, int n) const;

 private:
  friend struct ModelAccess;

  ReducedBasis basis_;
  fom::Equation equation_ = fom::Equation::Stokes;
  Eigen::Vector2d body_force_ = Eigen::Vector2d::Zero();
  std::string mesh_hash_;
  int refinement_ = 0;
  Eigen::VectorXd lifting_;
  std::vector<Eigen::MatrixXd> a_, b_;
  Eigen::MatrixXd f0_, fs_, g_;
  std::vector<std::vector<Eigen::MatrixXd>> c_;
  std::vector<Eigen::MatrixXd> cg_, gc_;
  Eigen::MatrixXd gg_;
};

}  // namespace wrom::rom
