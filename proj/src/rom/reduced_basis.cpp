#include "wrom/rom/reduced_basis.hpp"

#include <algorithm>

#include "wrom/errors.hpp"

namespace wrom::rom {

int ReducedBasis::primal_count() const {
  return static_cast<int>(std::count_if(velocity_columns.begin(), velocity_columns.end(),
                                        [](const VelocityColumn& c) { return !c.supremizer; }));
}

int ReducedBasis::supremizer_count() const { return static_cast<int>(velocity_columns.size()) - primal_count(); }

int ReducedBasis::size() const {
  int modes = 0;
  for (int m : pressure_modes) modes = std::max(modes, m + 1);
  for (const auto& c : velocity_columns) modes = std::max(modes, c.mode + 1);
  return modes;
}

std::vector<int> ReducedBasis::velocity_indices(int n) const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < velocity_columns.size(); ++i) {
    if (velocity_columns[i].mode < n) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

std::vector<int> ReducedBasis::pressure_indices(int n) const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < pressure_modes.size(); ++i) {
    if (pressure_modes[i] < n) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

SupremizerOperator::SupremizerOperator(const fom::AffineModel& model, const fom::FlowParameter& y) : model_(&model) {
  const SparseMatrix& sel = model.free_selection();
  const SparseMatrix xf = sel * model.velocity_inner_product() * sel.transpose();
  bt_free_ = sel * SparseMatrix(model.b(y).transpose());
  solver_.compute(xf);
  if (solver_.info() != Eigen::Success) {
    throw NumericalFailure("supremizer: velocity inner product is singular on the free dofs");
  }
}

Eigen::VectorXd SupremizerOperator::operator()(const Eigen::VectorXd& pressure_mode) const {
  if (pressure_mode.size() != model_->pressure_size()) throw std::invalid_argument("supremizer: pressure length mismatch");
  return model_->extend_velocity(solver_.solve(bt_free_ * pressure_mode));
}

BasisBuilder::BasisBuilder(const fom::AffineModel& model, const fom::FlowParameter& supremizer_parameter)
    : model_(&model), supremizer_(model, supremizer_parameter) {
  basis_.velocity.resize(model.velocity_size(), 0);
  basis_.pressure.resize(model.pressure_size(), 0);
}

int BasisBuilder::add(const Eigen::VectorXd* velocity_mode, const Eigen::VectorXd* pressure_mode) {
  const SparseMatrix& xu = model_->velocity_inner_product();
  const SparseMatrix& xp = model_->pressure_inner_product();
  int kept = 0;
  if (velocity_mode && orthonormalize_append(basis_.velocity, *velocity_mode, xu)) {
    basis_.velocity_columns.push_back({false, next_mode_});
    ++kept;
  }
  if (pressure_mode && orthonormalize_append(basis_.pressure, *pressure_mode, xp)) {
    basis_.pressure_modes.push_back(next_mode_);
    ++kept;
    const Eigen::VectorXd s = supremizer_(basis_.pressure.col(basis_.pressure.cols() - 1));
    if (orthonormalize_append(basis_.velocity, s, xu)) basis_.velocity_columns.push_back({true, next_mode_});
  }
  ++next_mode_;
  return kept;
}

ReducedBasis enrich_basis(const fom::AffineModel& model, const PodResult& velocity, const PodResult& pressure,
                          const fom::FlowParameter& supremizer_parameter) {
  BasisBuilder builder(model, supremizer_parameter);
  const Eigen::Index modes = std::max(velocity.basis.cols(), pressure.basis.cols());
  for (Eigen::Index i = 0; i < modes; ++i) {
    const Eigen::VectorXd u = i < velocity.basis.cols() ? Eigen::VectorXd(velocity.basis.col(i)) : Eigen::VectorXd();
    const Eigen::VectorXd p = i < pressure.basis.cols() ? Eigen::VectorXd(pressure.basis.col(i)) : Eigen::VectorXd();
    builder.add(i < velocity.basis.cols() ? &u : nullptr, i < pressure.basis.cols() ? &p : nullptr);
  }
  ReducedBasis basis = builder.basis();
  basis.velocity_eigenvalues = velocity.eigenvalues;
  basis.pressure_eigenvalues = pressure.eigenvalues;
  return basis;
}

ReducedBasis pod_basis(const fom::AffineModel& model, const std::vector<fom::TruthSolution>& snapshots,
                       const Eigen::VectorXd& weights, const PodOptions& options,
                       const fom::FlowParameter& supremizer_parameter) {
  if (snapshots.empty()) throw std::invalid_argument("pod_basis: no snapshots");
  const auto m = static_cast<Eigen::Index>(snapshots.size());
  Eigen::MatrixXd su(model.velocity_size(), m);
  Eigen::MatrixXd sp(model.pressure_size(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    su.col(i) = snapshots[static_cast<std::size_t>(i)].homogeneous_velocity(model);
    sp.col(i) = snapshots[static_cast<std::size_t>(i)].pressure;
  }
  const PodResult velocity = weighted_pod(su, weights, model.velocity_inner_product(), options);
  const PodResult pressure = weighted_pod(sp, weights, model.pressure_inner_product(), options);
  return enrich_basis(model, velocity, pressure, supremizer_parameter);
}

}  // namespace wrom::rom
