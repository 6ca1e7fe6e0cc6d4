#include "wrom/rom/reduced_model.hpp"

#include <sstream>
#include <stdexcept>

#include "wrom/errors.hpp"

namespace wrom::rom {

namespace {

std::string describe(const fom::FlowParameter& y) {
  std::ostringstream os;
  os.precision(17);
  os << "(L1=" << y.L1 << ", h1=" << y.h1 << ", L2=" << y.L2 << ", h2=" << y.h2 << ", v_max=" << y.vmax << ")";
  return os.str();
}

}  // namespace

ReducedModel::ReducedModel(const fom::AffineModel& model, ReducedBasis basis)
    : basis_(std::move(basis)),
      equation_(model.equation()),
      body_force_(model.body_force()),
      mesh_hash_(model.mesh_hash()),
      refinement_(model.mesh().refinement),
      lifting_(model.lifting()) {
  const Eigen::MatrixXd& z = basis_.velocity;
  const Eigen::MatrixXd& zp = basis_.pressure;
  if (z.rows() != model.velocity_size() || zp.rows() != model.pressure_size()) {
    throw std::invalid_argument("ReducedModel: basis does not match the full-order model");
  }
  const int q_terms = fom::kAffineTerms;
  const Eigen::Index nv = z.cols();
  const Eigen::Index np = zp.cols();
  f0_.resize(nv, q_terms);
  fs_.resize(nv, q_terms);
  g_.resize(np, q_terms);
  for (int q = 0; q < q_terms; ++q) {
    a_.push_back(z.transpose() * (model.stiffness_blocks()[q] * z));
    b_.push_back(zp.transpose() * (model.divergence_blocks()[q] * z));
    f0_.col(q) = z.transpose() * model.lifting_rhs_blocks()[q];
    fs_.col(q) = z.transpose() * model.body_force_blocks()[q];
    g_.col(q) = zp.transpose() * model.lifting_div_blocks()[q];
  }
  if (equation_ == fom::Equation::NavierStokes) {
    gg_.resize(nv, q_terms);
    c_.assign(q_terms, {});
    for (int q = 0; q < q_terms; ++q) {
      const SparseMatrix cg = model.convection_block(q, lifting_);
      cg_.push_back(z.transpose() * (cg * z));
      gg_.col(q) = z.transpose() * (cg * lifting_);
      Eigen::MatrixXd gc(nv, nv);
      for (Eigen::Index j = 0; j < nv; ++j) {
        const SparseMatrix cj = model.convection_block(q, z.col(j));
        c_[q].push_back(z.transpose() * (cj * z));
        gc.col(j) = z.transpose() * (cj * lifting_);
      }
      gc_.push_back(gc);
    }
  }
}

void ReducedModel::stokes_system(const fom::FlowParameter& y, int n, Eigen::MatrixXd& k, Eigen::VectorXd& rhs) const {
  if (n < 0 || n > max_size()) throw std::invalid_argument("online_solve: N exceeds the stored basis size");
  const std::vector<int> iv = basis_.velocity_indices(n);
  const std::vector<int> ip = basis_.pressure_indices(n);
  const auto nv = static_cast<Eigen::Index>(iv.size());
  const auto np = static_cast<Eigen::Index>(ip.size());
  const fom::AffineCoefficients theta = fom::affine_coefficients(y, body_force_);
  k = Eigen::MatrixXd::Zero(nv + np, nv + np);
  rhs.resize(nv + np);
  for (int q = 0; q < fom::kAffineTerms; ++q) {
    k.topLeftCorner(nv, nv) += theta.a[q] * a_[q](iv, iv);
    k.bottomLeftCorner(np, nv) += theta.b[q] * b_[q](ip, iv);
  }
  k.topRightCorner(nv, np) = k.bottomLeftCorner(np, nv).transpose();
  rhs.head(nv) = f0_(iv, Eigen::all) * theta.f0 + fs_(iv, Eigen::all) * theta.fs;
  rhs.tail(np) = g_(ip, Eigen::all) * theta.g;
}

ReducedSolution ReducedModel::online_solve(const fom::FlowParameter& y, int n, fom::Equation kind,
                                           const ReducedOptions& options) const {
  Eigen::MatrixXd k;
  Eigen::VectorXd rhs;
  stokes_system(y, n, k, rhs);
  const std::vector<int> iv = basis_.velocity_indices(n);
  const auto nv = static_cast<Eigen::Index>(iv.size());
  const Eigen::Index total = k.rows();

  ReducedSolution sol;
  sol.n = n;
  sol.parameter = y;
  if (total == 0) {
    sol.velocity.resize(0);
    sol.pressure.resize(0);
    return sol;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  if (!lu.isInvertible()) throw NumericalFailure("reduced saddle-point matrix is singular at N=" + std::to_string(n) + ", " + describe(y));
  Eigen::VectorXd x = lu.solve(rhs);

  if (kind == fom::Equation::NavierStokes) {
    if (c_.empty()) throw InvalidState("online_solve: model was projected without convection terms");
    const fom::AffineCoefficients theta = fom::affine_coefficients(y, body_force_);
    const double v = y.vmax;
    // reduced convection pieces restricted to the selected columns
    std::vector<std::vector<Eigen::MatrixXd>> cq(fom::kAffineTerms);
    Eigen::MatrixXd linear = Eigen::MatrixXd::Zero(nv, nv);
    Eigen::VectorXd constant = Eigen::VectorXd::Zero(nv);
    for (int q = 0; q < fom::kAffineTerms; ++q) {
      for (int j : iv) cq[q].push_back(theta.c[q] * c_[q][j](iv, iv));
      linear += theta.c[q] * v * (cg_[q](iv, iv) + gc_[q](iv, iv));
      constant += theta.c[q] * v * v * gg_(iv, Eigen::all).col(q);
    }
    const auto residual = [&](const Eigen::VectorXd& state) {
      const Eigen::VectorXd u = state.head(nv);
      Eigen::VectorXd r = k * state - rhs;
      Eigen::VectorXd conv = linear * u + constant;
      for (int q = 0; q < fom::kAffineTerms; ++q) {
        for (Eigen::Index j = 0; j < nv; ++j) conv += u[j] * (cq[q][j] * u);
      }
      r.head(nv) += conv;
      return r;
    };
    const double reference = residual(Eigen::VectorXd::Zero(total)).norm();
    double last = 0.0;
    bool converged = false;
    for (int it = 1; it <= options.max_newton_iterations; ++it) {
      const Eigen::VectorXd r = residual(x);
      last = r.norm();
      if (last <= options.newton_tolerance * reference || last == 0.0) {
        sol.newton_iterations = it;
        converged = true;
        break;
      }
      if (!std::isfinite(last)) break;
      const Eigen::VectorXd u = x.head(nv);
      Eigen::MatrixXd jac = k;
      Eigen::MatrixXd block = linear;
      for (int q = 0; q < fom::kAffineTerms; ++q) {
        for (Eigen::Index j = 0; j < nv; ++j) {
          block += u[j] * cq[q][j];
          block.col(j) += cq[q][j] * u;
        }
      }
      jac.topLeftCorner(nv, nv) += block;
      x -= Eigen::PartialPivLU<Eigen::MatrixXd>(jac).solve(r);
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "reduced Newton did not converge at N=" << n << ", " << describe(y) << "; last residual " << last
          << " (reference " << reference << ")";
      throw NumericalFailure(msg.str());
    }
  }
  sol.velocity = x.head(nv);
  sol.pressure = x.tail(total - nv);
  return sol;
}

FullSolution ReducedModel::reconstruct(const ReducedSolution& s) const {
  const std::vector<int> iv = basis_.velocity_indices(s.n);
  const std::vector<int> ip = basis_.pressure_indices(s.n);
  if (s.velocity.size() != static_cast<Eigen::Index>(iv.size()) ||
      s.pressure.size() != static_cast<Eigen::Index>(ip.size())) {
    throw std::invalid_argument("reconstruct: coefficient length does not match the basis truncation");
  }
  FullSolution full;
  full.velocity = s.parameter.vmax * lifting_;
  if (!iv.empty()) full.velocity += basis_.velocity(Eigen::all, iv) * s.velocity;
  full.pressure = Eigen::VectorXd::Zero(basis_.pressure.rows());
  if (!ip.empty()) full.pressure += basis_.pressure(Eigen::all, ip) * s.pressure;
  return full;
}

ReducedSolution ReducedModel::project(const fom::AffineModel& model, const Eigen::VectorXd& velocity,
                                      const Eigen::VectorXd& pressure, const fom::FlowParameter& y, int n) const {
  const std::vector<int> iv = basis_.velocity_indices(n);
  const std::vector<int> ip = basis_.pressure_indices(n);
  ReducedSolution s;
  s.n = n;
  s.parameter = y;
  const Eigen::VectorXd homogeneous = velocity - y.vmax * lifting_;
  s.velocity = basis_.velocity(Eigen::all, iv).transpose() * (model.velocity_inner_product() * homogeneous);
  s.pressure = basis_.pressure(Eigen::all, ip).transpose() * (model.pressure_inner_product() * pressure);
  return s;
}

}  // namespace wrom::rom
