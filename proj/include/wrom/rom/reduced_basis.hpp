#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <vector>

#include "wrom/fom/affine_model.hpp"
#include "wrom/fom/solver.hpp"
#include "wrom/rom/pod.hpp"

namespace wrom::rom {

/// Origin of a velocity basis column: a primal mode or the supremizer of a
/// pressure mode, tagged with the mode index it belongs to.
struct VelocityColumn {
  bool supremizer = false;
  int mode = 0;
};

struct GreedyRecord {
  std::vector<Eigen::VectorXd> selected;  // parameters in selection order
  std::vector<double> selected_estimator;  // estimator value at each selection
  std::vector<double> max_estimator;       // training-set maximum before each iteration and at exit
  bool random_start = false;
};

/// Velocity columns (primal modes interleaved with their supremizers, all
/// X_u-orthonormal) and X_p-orthonormal pressure columns. Velocity vectors
/// are full length and vanish on the Dirichlet dofs.
struct ReducedBasis {
  Eigen::MatrixXd velocity;
  std::vector<VelocityColumn> velocity_columns;
  Eigen::MatrixXd pressure;
  std::vector<int> pressure_modes;  // mode index of each pressure column
  Eigen::VectorXd velocity_eigenvalues;
  Eigen::VectorXd pressure_eigenvalues;
  GreedyRecord greedy;

  /// Largest usable N: the number of modes available in either field.
  int size() const;
  /// Velocity column indices used at size n: primal modes and supremizers with mode < n.
  std::vector<int> velocity_indices(int n) const;
  /// Pressure column indices used at size n.
  std::vector<int> pressure_indices(int n) const;
  int primal_count() const;
  int supremizer_count() const;
};

/// Solves X_u s = B(y)^T q on the free velocity dofs.
class SupremizerOperator {
 public:
  SupremizerOperator(const fom::AffineModel& model, const fom::FlowParameter& y);
  Eigen::VectorXd operator()(const Eigen::VectorXd& pressure_mode) const;

 private:
  const fom::AffineModel* model_;
  SparseMatrix bt_free_;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
};

/// Incrementally grows a ReducedBasis with pairs (velocity mode, pressure
/// mode), appending each pressure mode's supremizer right after it.
class BasisBuilder {
 public:
  BasisBuilder(const fom::AffineModel& model, const fom::FlowParameter& supremizer_parameter);
  /// Adds one mode of each field (either may be empty). Returns the number of
  /// columns actually kept across both fields.
  int add(const Eigen::VectorXd* velocity_mode, const Eigen::VectorXd* pressure_mode);
  const ReducedBasis& basis() const { return basis_; }
  ReducedBasis& basis() { return basis_; }

 private:
  const fom::AffineModel* model_;
  SupremizerOperator supremizer_;
  ReducedBasis basis_;
  int next_mode_ = 0;
};

/// Supremizer-enriched basis from separate velocity and pressure POD results.
ReducedBasis enrich_basis(const fom::AffineModel& model, const PodResult& velocity, const PodResult& pressure,
                          const fom::FlowParameter& supremizer_parameter);

/// Weighted POD of the homogenized velocity snapshots and of the pressure
/// snapshots, followed by supremizer enrichment.
ReducedBasis pod_basis(const fom::AffineModel& model, const std::vector<fom::TruthSolution>& snapshots,
                       const Eigen::VectorXd& weights, const PodOptions& options,
                       const fom::FlowParameter& supremizer_parameter = fom::FlowParameter::reference());

}  // namespace wrom::rom
