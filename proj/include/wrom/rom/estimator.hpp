#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>

#include "wrom/fom/solver.hpp"
#include "wrom/probability.hpp"
#include "wrom/rom/reduced_model.hpp"

namespace wrom::rom {

enum class EstimatorMode { ExactError, Residual };
enum class WeightMode { None, SqrtDensity, Density };

std::string to_string(EstimatorMode m);
std::string to_string(WeightMode m);

/// Combined error norm sqrt(||e_u||^2_{X_u} + ||e_p||^2_{X_p}).
double combined_error(const fom::AffineModel& model, const Eigen::VectorXd& du, const Eigen::VectorXd& dp);

/// Riesz representors of every affine piece of the Stokes residual and their
/// Gram matrices, so the dual residual norm is a quadratic form in
/// (theta, theta * reduced coefficients).
class ResidualGram {
 public:
  ResidualGram(const fom::AffineModel& model, const ReducedBasis& basis);
  /// ||r(y; s)||_{X'} for reduced coefficients s at size s.n.
  double dual_norm(const ReducedBasis& basis, const fom::FlowParameter& y, const ReducedSolution& s) const;

 private:
  Eigen::Vector2d body_force_;
  Eigen::Index nv_ = 0, np_ = 0;
  // momentum pieces in order: f0_q, fs_q, A_q zeta_n, B_q^T psi_n  (q-major inside each group)
  Eigen::MatrixXd momentum_gram_;
  // continuity pieces: g_q, B_q zeta_n
  Eigen::MatrixXd continuity_gram_;
};

/// Lower bound of the saddle-point stability constant over the box: the
/// minimum over the reference parameter and the corners of the geometric
/// ranges (v_max does not enter the Stokes operator).
double stability_lower_bound(const fom::AffineModel& model, const probability::ParameterBox& box);

class Estimator {
 public:
  /// ExactError mode: truth solutions are computed on demand and cached by
  /// training index.
  static Estimator exact_error(const fom::AffineModel& model, WeightMode weight,
                               const probability::ParameterBox& box);
  /// Residual mode with a given stability lower bound.
  static Estimator residual(const fom::AffineModel& model, WeightMode weight, const probability::ParameterBox& box,
                            double beta_lower_bound);

  EstimatorMode mode() const { return mode_; }
  WeightMode weight_mode() const { return weight_; }
  double beta_lower_bound() const { return beta_lb_; }
  /// Multiplies the density in the weight by a positive constant.
  void set_density_scale(double c) { density_scale_ = c; }

  /// Weight w(y): 1, sqrt(rho), or rho, with rho evaluated 1e-9 inside the box.
  double weight(const Eigen::VectorXd& y) const;

  /// Must be called whenever the basis changes in Residual mode.
  void prepare(const ReducedBasis& basis);

  /// Weighted estimator at y for the reduced solution s. In ExactError mode
  /// `truth` is used when supplied and solved for otherwise.
  double estimate(const ReducedModel& reduced, const ReducedSolution& s, const Eigen::VectorXd& y,
                  const fom::TruthSolution* truth = nullptr) const;

  /// Unweighted error measure (no w(y)).
  double raw(const ReducedModel& reduced, const ReducedSolution& s, const fom::TruthSolution* truth) const;

 private:
  Estimator(const fom::AffineModel& model, EstimatorMode mode, WeightMode weight, const probability::ParameterBox& box)
      : model_(&model), mode_(mode), weight_(weight), box_(box) {}

  const fom::AffineModel* model_;
  EstimatorMode mode_;
  WeightMode weight_;
  probability::ParameterBox box_;
  double beta_lb_ = 1.0;
  double density_scale_ = 1.0;
  std::shared_ptr<ResidualGram> gram_;
};

}  // namespace wrom::rom
