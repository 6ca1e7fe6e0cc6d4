#include "wrom/rom/estimator.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wrom/errors.hpp"

namespace wrom::rom {

namespace {

constexpr double kDensityClamp = 1e-9;

Eigen::MatrixXd gram_of(const Eigen::MatrixXd& vectors, const Eigen::SimplicialLDLT<SparseMatrix>& inner) {
  const Eigen::MatrixXd representors = inner.solve(vectors);
  Eigen::MatrixXd g = vectors.transpose() * representors;
  return 0.5 * (g + g.transpose());
}

}  // namespace

std::string to_string(EstimatorMode m) { return m == EstimatorMode::ExactError ? "exact-error" : "residual"; }

std::string to_string(WeightMode m) {
  switch (m) {
    case WeightMode::None: return "none";
    case WeightMode::SqrtDensity: return "sqrt-density";
    case WeightMode::Density: return "density";
  }
  return "?";
}

double combined_error(const fom::AffineModel& model, const Eigen::VectorXd& du, const Eigen::VectorXd& dp) {
  const double u2 = du.dot(model.velocity_inner_product() * du);
  const double p2 = dp.dot(model.pressure_inner_product() * dp);
  return std::sqrt(std::max(0.0, u2) + std::max(0.0, p2));
}

ResidualGram::ResidualGram(const fom::AffineModel& model, const ReducedBasis& basis)
    : body_force_(model.body_force()), nv_(basis.velocity.cols()), np_(basis.pressure.cols()) {
  const int q_terms = fom::kAffineTerms;
  const SparseMatrix& sel = model.free_selection();
  const Eigen::Index nf = model.free_velocity_size();
  const Eigen::Index npf = model.pressure_size();

  Eigen::MatrixXd momentum(nf, q_terms * (2 + nv_ + np_));
  Eigen::MatrixXd continuity(npf, q_terms * (1 + nv_));
  for (int q = 0; q < q_terms; ++q) {
    momentum.col(q) = sel * model.lifting_rhs_blocks()[q];
    momentum.col(q_terms + q) = sel * model.body_force_blocks()[q];
    momentum.middleCols(2 * q_terms + q * nv_, nv_) = sel * (model.stiffness_blocks()[q] * basis.velocity);
    momentum.middleCols(2 * q_terms + q_terms * nv_ + q * np_, np_) =
        sel * (SparseMatrix(model.divergence_blocks()[q].transpose()) * basis.pressure);
    continuity.col(q) = model.lifting_div_blocks()[q];
    continuity.middleCols(q_terms + q * nv_, nv_) = model.divergence_blocks()[q] * basis.velocity;
  }
  Eigen::SimplicialLDLT<SparseMatrix> xu(sel * model.velocity_inner_product() * sel.transpose());
  Eigen::SimplicialLDLT<SparseMatrix> xp(model.pressure_inner_product());
  if (xu.info() != Eigen::Success || xp.info() != Eigen::Success) {
    throw NumericalFailure("residual estimator: inner-product factorization failed");
  }
  momentum_gram_ = gram_of(momentum, xu);
  continuity_gram_ = gram_of(continuity, xp);
}

double ResidualGram::dual_norm(const ReducedBasis& basis, const fom::FlowParameter& y, const ReducedSolution& s) const {
  const int q_terms = fom::kAffineTerms;
  const std::vector<int> iv = basis.velocity_indices(s.n);
  const std::vector<int> ip = basis.pressure_indices(s.n);
  if (s.velocity.size() != static_cast<Eigen::Index>(iv.size()) ||
      s.pressure.size() != static_cast<Eigen::Index>(ip.size())) {
    throw std::invalid_argument("residual estimator: coefficient length does not match the basis truncation");
  }
  const fom::AffineCoefficients theta = fom::affine_coefficients(y, body_force_);
  Eigen::VectorXd km = Eigen::VectorXd::Zero(momentum_gram_.rows());
  Eigen::VectorXd kc = Eigen::VectorXd::Zero(continuity_gram_.rows());
  for (int q = 0; q < q_terms; ++q) {
    km[q] = theta.f0[q];
    km[q_terms + q] = theta.fs[q];
    kc[q] = theta.g[q];
    for (std::size_t k = 0; k < iv.size(); ++k) {
      km[2 * q_terms + q * nv_ + iv[k]] = -theta.a[q] * s.velocity[static_cast<Eigen::Index>(k)];
      kc[q_terms + q * nv_ + iv[k]] = -theta.b[q] * s.velocity[static_cast<Eigen::Index>(k)];
    }
    for (std::size_t k = 0; k < ip.size(); ++k) {
      km[2 * q_terms + q_terms * nv_ + q * np_ + ip[k]] = -theta.b[q] * s.pressure[static_cast<Eigen::Index>(k)];
    }
  }
  const double squared = km.dot(momentum_gram_ * km) + kc.dot(continuity_gram_ * kc);
  return std::sqrt(std::max(0.0, squared));
}

double stability_lower_bound(const fom::AffineModel& model, const probability::ParameterBox& box) {
  if (box.dim() != 5) throw std::invalid_argument("stability_lower_bound: expected the five-parameter flow box");
  double lower = fom::stability_constant(model, fom::FlowParameter::reference());
  for (int corner = 0; corner < 16; ++corner) {
    fom::FlowParameter y;
    const auto pick = [&](int j) { return (corner >> j) & 1 ? box.ranges()[j].hi : box.ranges()[j].lo; };
    y.L1 = pick(0);
    y.h1 = pick(1);
    y.L2 = pick(2);
    y.h2 = pick(3);
    lower = std::min(lower, fom::stability_constant(model, y));
  }
  return lower;
}

Estimator Estimator::exact_error(const fom::AffineModel& model, WeightMode weight, const probability::ParameterBox& box) {
  return Estimator(model, EstimatorMode::ExactError, weight, box);
}

Estimator Estimator::residual(const fom::AffineModel& model, WeightMode weight, const probability::ParameterBox& box,
                              double beta_lower_bound) {
  if (!(beta_lower_bound > 0.0)) throw std::invalid_argument("residual estimator: beta lower bound must be positive");
  Estimator e(model, EstimatorMode::Residual, weight, box);
  e.beta_lb_ = beta_lower_bound;
  return e;
}

double Estimator::weight(const Eigen::VectorXd& y) const {
  if (weight_ == WeightMode::None) return 1.0;
  const double rho = density_scale_ * box_.density(y, kDensityClamp);
  return weight_ == WeightMode::Density ? rho : std::sqrt(rho);
}

void Estimator::prepare(const ReducedBasis& basis) {
  if (mode_ == EstimatorMode::Residual) gram_ = std::make_shared<ResidualGram>(*model_, basis);
}

double Estimator::raw(const ReducedModel& reduced, const ReducedSolution& s, const fom::TruthSolution* truth) const {
  if (mode_ == EstimatorMode::Residual) {
    if (!gram_) throw InvalidState("residual estimator used before its Gram blocks were prepared");
    if (reduced.equation() != fom::Equation::Stokes) {
      throw InvalidState("residual estimator covers the Stokes equations only");
    }
    return gram_->dual_norm(reduced.basis(), s.parameter, s) / beta_lb_;
  }
  fom::TruthSolution local;
  if (!truth) {
    local = fom::solve(*model_, s.parameter, reduced.equation());
    truth = &local;
  }
  const FullSolution approx = reduced.reconstruct(s);
  return combined_error(*model_, truth->velocity - approx.velocity, truth->pressure - approx.pressure);
}

double Estimator::estimate(const ReducedModel& reduced, const ReducedSolution& s, const Eigen::VectorXd& y,
                           const fom::TruthSolution* truth) const {
  return weight(y) * raw(reduced, s, truth);
}

}  // namespace wrom::rom
