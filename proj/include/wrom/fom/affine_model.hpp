#pragma once

// Affine-decomposed Taylor-Hood discretization of the parametrized Stokes /
// Navier-Stokes problem on the four-subdomain reference channel.
//
// Every parametrized operator is stored as a list of parameter-independent
// blocks indexed by q = 2 * subdomain + component, paired with a closed-form
// coefficient vector theta(y). For the diagonal subdomain maps used here:
//
//   a : theta = nu * s_y / s_x  (x-derivatives),  nu * s_x / s_y  (y-derivatives)
//   b : theta = s_y (d/dx),  s_x (d/dy)
//   c : theta = s_y (u_1 d/dx),  s_x (u_2 d/dy)
//   F0, G : theta_a * v_max, theta_b * v_max (lifting terms)
//   Fs : theta = f_c * s_x * s_y for a constant body force f
//
// Velocity vectors have length 2 * node_count (all x-components, then all
// y-components) and include the constrained entries; pressures are P1 values
// at the mesh vertices.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

#include "wrom/fom/geometry.hpp"
#include "wrom/fom/mesh.hpp"

namespace wrom::fom {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Equation { Stokes, NavierStokes };

std::string to_string(Equation e);

inline constexpr int kAffineTerms = 2 * kSubdomains;

/// Closed-form coefficient vectors theta(y), one entry per affine term.
struct AffineCoefficients {
  Eigen::VectorXd a, b, c, f0, g, fs;
};

AffineCoefficients affine_coefficients(const FlowParameter& y, const Eigen::Vector2d& body_force);

class AffineModel {
 public:
  static AffineModel assemble(const Mesh& mesh, Equation equation = Equation::Stokes,
                              const Eigen::Vector2d& body_force = Eigen::Vector2d::Zero());

  const Mesh& mesh() const { return mesh_; }
  Equation equation() const { return equation_; }
  const Eigen::Vector2d& body_force() const { return body_force_; }

  int node_count() const { return mesh_.node_count(); }
  int velocity_size() const { return 2 * node_count(); }
  int pressure_size() const { return mesh_.vertex_count(); }
  int free_velocity_size() const { return static_cast<int>(free_dofs_.size()); }

  // -- affine blocks ---------------------------------------------------------
  const std::vector<SparseMatrix>& stiffness_blocks() const { return stiffness_; }   // A_q
  const std::vector<SparseMatrix>& divergence_blocks() const { return divergence_; } // B_q (p x u)
  const std::vector<Eigen::VectorXd>& lifting_rhs_blocks() const { return f0_; }      // -A_q u_g
  const std::vector<Eigen::VectorXd>& lifting_div_blocks() const { return g_; }       // -B_q u_g
  const std::vector<Eigen::VectorXd>& body_force_blocks() const { return fs_; }       // int phi_c on D_r

  Eigen::VectorXd theta_a(const FlowParameter& y) const;
  Eigen::VectorXd theta_b(const FlowParameter& y) const;
  Eigen::VectorXd theta_c(const FlowParameter& y) const { return theta_b(y); }
  Eigen::VectorXd theta_f0(const FlowParameter& y) const { return y.vmax * theta_a(y); }
  Eigen::VectorXd theta_g(const FlowParameter& y) const { return y.vmax * theta_b(y); }
  Eigen::VectorXd theta_fs(const FlowParameter& y) const;

  // -- theta-weighted operators ---------------------------------------------
  SparseMatrix a(const FlowParameter& y) const;
  SparseMatrix b(const FlowParameter& y) const;
  /// F = Fs + F0 (velocity test functions, full length)
  Eigen::VectorXd f(const FlowParameter& y) const;
  /// G = -b(u_g, q)
  Eigen::VectorXd g(const FlowParameter& y) const;

  /// Single trilinear block: entry (i, j) = c_q(w, phi_j, phi_i).
  SparseMatrix convection_block(int q, const Eigen::VectorXd& w) const;
  /// Sum_q theta_c,q(y) c_q(w, ., .), optionally with the Newton term
  /// c_q(., w, .) added.
  SparseMatrix convection(const FlowParameter& y, const Eigen::VectorXd& w, bool newton_term) const;
  /// c(w, w, v; y) for all test functions v.
  Eigen::VectorXd convection_residual(const FlowParameter& y, const Eigen::VectorXd& w) const;

  // -- inner products and lifting ------------------------------------------
  const SparseMatrix& velocity_inner_product() const { return x_u_; }  // H1 seminorm on the reference domain
  const SparseMatrix& pressure_inner_product() const { return x_p_; }  // L2 on the reference domain
  /// Reference lifting (x2 (3 - x2), 0) interpolated at all quadratic nodes.
  const Eigen::VectorXd& lifting() const { return lifting_; }

  // -- essential conditions -------------------------------------------------
  const std::vector<int>& free_dofs() const { return free_dofs_; }
  const std::vector<bool>& constrained() const { return constrained_; }
  /// Selection matrix P with P * u = free entries of u.
  const SparseMatrix& free_selection() const { return selection_; }
  Eigen::VectorXd restrict_velocity(const Eigen::VectorXd& u) const;
  Eigen::VectorXd extend_velocity(const Eigen::VectorXd& free) const;

  std::string mesh_hash() const { return mesh_hash_; }

 private:
  Mesh mesh_;
  Equation equation_ = Equation::Stokes;
  Eigen::Vector2d body_force_ = Eigen::Vector2d::Zero();
  std::vector<SparseMatrix> stiffness_, divergence_;
  std::vector<Eigen::VectorXd> f0_, g_, fs_;
  SparseMatrix x_u_, x_p_, selection_;
  Eigen::VectorXd lifting_;
  std::vector<int> free_dofs_;
  std::vector<bool> constrained_;
  std::string mesh_hash_;
};

/// Operators assembled directly on the mapped (physical) mesh, without the
/// affine expansion.
struct PhysicalOperators {
  SparseMatrix a;
  SparseMatrix b;
  Eigen::VectorXd f;
  Eigen::VectorXd g;
};

PhysicalOperators assemble_physical(const AffineModel& model, const FlowParameter& y);
/// c(w, ., .; y) assembled on the mapped mesh.
SparseMatrix assemble_physical_convection(const AffineModel& model, const FlowParameter& y,
                                          const Eigen::VectorXd& w);

}  // namespace wrom::fom
