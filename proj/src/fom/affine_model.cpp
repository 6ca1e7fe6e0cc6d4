#include "wrom/fom/affine_model.hpp"

#include <map>
#include <stdexcept>

#include "taylor_hood.hpp"

namespace wrom::fom {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct LinearBlocks {
  std::vector<Triplets> stiffness = std::vector<Triplets>(kAffineTerms);
  std::vector<Triplets> divergence = std::vector<Triplets>(kAffineTerms);
  std::vector<Eigen::VectorXd> load;
  Triplets pressure_mass;
};

std::vector<Eigen::Vector2d> physical_vertices(const Mesh& mesh, const FlowParameter& y) {
  std::vector<Eigen::Vector2d> coords;
  coords.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) coords.push_back(geometry::to_physical(y, v));
  return coords;
}

// Bilinear/linear blocks split by (subdomain, derivative direction).
LinearBlocks assemble_linear(const Mesh& mesh, const std::vector<Eigen::Vector2d>& coords) {
  const int nn = mesh.node_count();
  LinearBlocks blocks;
  blocks.load.assign(kAffineTerms, Eigen::VectorXd::Zero(2 * nn));
  detail::ElementData el;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto nodes = mesh.local_nodes(static_cast<int>(t));
    const int r = mesh.subdomain[t];
    el.compute(coords[tri[0]], coords[tri[1]], coords[tri[2]]);

    Eigen::Matrix<double, 6, 6> kx = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 6> ky = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 3, 6> dx = Eigen::Matrix<double, 3, 6>::Zero();
    Eigen::Matrix<double, 3, 6> dy = Eigen::Matrix<double, 3, 6>::Zero();
    Eigen::Matrix<double, 6, 1> load = Eigen::Matrix<double, 6, 1>::Zero();
    Eigen::Matrix3d pmass = Eigen::Matrix3d::Zero();
    for (int q = 0; q < 7; ++q) {
      const double w = el.weight[q];
      kx += w * el.dphi[q].row(0).transpose() * el.dphi[q].row(0);
      ky += w * el.dphi[q].row(1).transpose() * el.dphi[q].row(1);
      dx -= w * el.psi[q] * el.dphi[q].row(0);
      dy -= w * el.psi[q] * el.dphi[q].row(1);
      load += w * el.phi[q];
      pmass += w * el.psi[q] * el.psi[q].transpose();
    }
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        for (int m = 0; m < 2; ++m) {
          blocks.stiffness[2 * r].emplace_back(m * nn + nodes[i], m * nn + nodes[j], kx(i, j));
          blocks.stiffness[2 * r + 1].emplace_back(m * nn + nodes[i], m * nn + nodes[j], ky(i, j));
        }
      }
      blocks.load[2 * r][nodes[i]] += load[i];
      blocks.load[2 * r + 1][nn + nodes[i]] += load[i];
    }
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 6; ++j) {
        blocks.divergence[2 * r].emplace_back(tri[k], nodes[j], dx(k, j));
        blocks.divergence[2 * r + 1].emplace_back(tri[k], nn + nodes[j], dy(k, j));
      }
      for (int l = 0; l < 3; ++l) blocks.pressure_mass.emplace_back(tri[k], tri[l], pmass(k, l));
    }
  }
  return blocks;
}

// c(w, u, v) = sum_r sum_c weight(r, c) int_{D_r} w_c d_c u_m v_m, with the
// Newton linearization c(u, w, v) optionally added.
SparseMatrix assemble_convection(const Mesh& mesh, const std::vector<Eigen::Vector2d>& coords,
                                 const Eigen::VectorXd& w, const Eigen::Matrix<double, kSubdomains, 2>& weight,
                                 bool newton_term) {
  const int nn = mesh.node_count();
  if (w.size() != 2 * nn) throw std::invalid_argument("convection: advecting field has wrong length");
  Triplets triplets;
  triplets.reserve(mesh.triangles.size() * 36 * (newton_term ? 6 : 2));
  detail::ElementData el;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const int r = mesh.subdomain[t];
    if (weight(r, 0) == 0.0 && weight(r, 1) == 0.0) continue;
    const auto& tri = mesh.triangles[t];
    const auto nodes = mesh.local_nodes(static_cast<int>(t));
    el.compute(coords[tri[0]], coords[tri[1]], coords[tri[2]]);

    Eigen::Matrix<double, 6, 2> wl;
    for (int l = 0; l < 6; ++l) wl.row(l) << w[nodes[l]], w[nn + nodes[l]];

    Eigen::Matrix<double, 6, 6> adv = Eigen::Matrix<double, 6, 6>::Zero();
    // react[m][c](i, j) = int phi_j (d_c w_m) phi_i, weighted per c
    Eigen::Matrix<double, 6, 6> react[2][2];
    for (auto& row : react) for (auto& m : row) m.setZero();
    for (int q = 0; q < 7; ++q) {
      const double wq = el.weight[q];
      const Eigen::Vector2d wval = wl.transpose() * el.phi[q];
      // adv(i, j) = sum_c weight_c w_c d_c phi_j phi_i
      const Eigen::Matrix<double, 1, 6> transport =
          weight(r, 0) * wval.x() * el.dphi[q].row(0) + weight(r, 1) * wval.y() * el.dphi[q].row(1);
      adv += wq * el.phi[q] * transport;
      if (newton_term) {
        const Eigen::Matrix2d grad_w = el.dphi[q] * wl;  // (c, m) = d_c w_m
        const Eigen::Matrix<double, 6, 6> mass = wq * el.phi[q] * el.phi[q].transpose();
        for (int m = 0; m < 2; ++m) {
          for (int c = 0; c < 2; ++c) react[m][c] += weight(r, c) * grad_w(c, m) * mass;
        }
      }
    }
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        triplets.emplace_back(nodes[i], nodes[j], adv(i, j));
        triplets.emplace_back(nn + nodes[i], nn + nodes[j], adv(i, j));
        if (newton_term) {
          for (int m = 0; m < 2; ++m) {
            for (int c = 0; c < 2; ++c) {
              triplets.emplace_back(m * nn + nodes[i], c * nn + nodes[j], react[m][c](i, j));
            }
          }
        }
      }
    }
  }
  SparseMatrix mat(2 * nn, 2 * nn);
  mat.setFromTriplets(triplets.begin(), triplets.end());
  return mat;
}

SparseMatrix from_triplets(const Triplets& t, int rows, int cols) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

std::string to_string(Equation e) { return e == Equation::Stokes ? "stokes" : "navier-stokes"; }

AffineModel AffineModel::assemble(const Mesh& mesh, Equation equation, const Eigen::Vector2d& body_force) {
  if (mesh.triangles.size() != mesh.subdomain.size() || mesh.triangles.size() != mesh.triangle_edges.size()) {
    throw std::invalid_argument("assemble: mesh connectivity is inconsistent");
  }
  // every triangle must sit inside one subdomain
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const auto& v = mesh.vertices[mesh.triangles[t][k]];
      const Eigen::Vector2d centre = (mesh.vertices[mesh.triangles[t][0]] + mesh.vertices[mesh.triangles[t][1]] +
                                      mesh.vertices[mesh.triangles[t][2]]) / 3.0;
      const int r = geometry::subdomain_of(centre);
      const bool inside_x = (r % 2 == 0) ? v.x() <= kInterfaceX + 1e-14 : v.x() >= kInterfaceX - 1e-14;
      const bool inside_y = (r / 2 == 0) ? v.y() <= kInterfaceY + 1e-14 : v.y() >= kInterfaceY - 1e-14;
      if (!inside_x || !inside_y || r != mesh.subdomain[t]) {
        throw std::invalid_argument("assemble: triangle crosses a subdomain interface");
      }
    }
  }

  AffineModel model;
  model.mesh_ = mesh;
  model.equation_ = equation;
  model.body_force_ = body_force;
  model.mesh_hash_ = mesh.hash();
  const int nn = mesh.node_count();
  const int nu = 2 * nn;
  const int np = mesh.vertex_count();

  const auto blocks = assemble_linear(mesh, mesh.vertices);
  model.x_u_.resize(nu, nu);
  for (int q = 0; q < kAffineTerms; ++q) {
    model.stiffness_.push_back(from_triplets(blocks.stiffness[q], nu, nu));
    model.divergence_.push_back(from_triplets(blocks.divergence[q], np, nu));
    model.x_u_ += model.stiffness_.back();
  }
  model.fs_ = blocks.load;
  model.x_p_ = from_triplets(blocks.pressure_mass, np, np);

  model.lifting_ = Eigen::VectorXd::Zero(nu);
  for (int k = 0; k < nn; ++k) {
    const double s = mesh.node(k).y();
    model.lifting_[k] = s * (kReferenceHeight - s);
  }
  for (int q = 0; q < kAffineTerms; ++q) {
    model.f0_.push_back(-(model.stiffness_[q] * model.lifting_));
    model.g_.push_back(-(model.divergence_[q] * model.lifting_));
  }

  std::map<std::pair<int, int>, int> edge_lookup;
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    edge_lookup[{mesh.edges[e][0], mesh.edges[e][1]}] = static_cast<int>(e);
  }
  std::vector<bool> node_fixed(nn, false);
  for (const auto& be : mesh.boundary) {
    if (be.tag == BoundaryTag::Outlet) continue;
    node_fixed[be.a] = node_fixed[be.b] = true;
    const auto it = edge_lookup.find({std::min(be.a, be.b), std::max(be.a, be.b)});
    if (it == edge_lookup.end()) throw std::invalid_argument("assemble: boundary edge not in mesh");
    node_fixed[mesh.vertex_count() + it->second] = true;
  }
  model.constrained_.assign(nu, false);
  for (int k = 0; k < nn; ++k) model.constrained_[k] = model.constrained_[nn + k] = node_fixed[k];
  for (int i = 0; i < nu; ++i) {
    if (!model.constrained_[i]) model.free_dofs_.push_back(i);
  }
  Triplets sel;
  for (std::size_t i = 0; i < model.free_dofs_.size(); ++i) sel.emplace_back(static_cast<int>(i), model.free_dofs_[i], 1.0);
  model.selection_ = from_triplets(sel, static_cast<int>(model.free_dofs_.size()), nu);
  return model;
}

AffineCoefficients affine_coefficients(const FlowParameter& y, const Eigen::Vector2d& body_force) {
  AffineCoefficients t;
  t.a.resize(kAffineTerms);
  t.b.resize(kAffineTerms);
  t.fs.resize(kAffineTerms);
  for (int r = 0; r < kSubdomains; ++r) {
    const Eigen::Vector2d s = geometry::scale(y, r);
    t.a[2 * r] = y.nu * s.y() / s.x();
    t.a[2 * r + 1] = y.nu * s.x() / s.y();
    t.b[2 * r] = s.y();
    t.b[2 * r + 1] = s.x();
    t.fs[2 * r] = body_force.x() * s.x() * s.y();
    t.fs[2 * r + 1] = body_force.y() * s.x() * s.y();
  }
  t.c = t.b;
  t.f0 = y.vmax * t.a;
  t.g = y.vmax * t.b;
  return t;
}

Eigen::VectorXd AffineModel::theta_a(const FlowParameter& y) const { return affine_coefficients(y, body_force_).a; }

Eigen::VectorXd AffineModel::theta_b(const FlowParameter& y) const { return affine_coefficients(y, body_force_).b; }

Eigen::VectorXd AffineModel::theta_fs(const FlowParameter& y) const { return affine_coefficients(y, body_force_).fs; }

SparseMatrix AffineModel::a(const FlowParameter& y) const {
  const Eigen::VectorXd theta = theta_a(y);
  SparseMatrix sum = theta[0] * stiffness_[0];
  for (int q = 1; q < kAffineTerms; ++q) sum += theta[q] * stiffness_[q];
  return sum;
}

SparseMatrix AffineModel::b(const FlowParameter& y) const {
  const Eigen::VectorXd theta = theta_b(y);
  SparseMatrix sum = theta[0] * divergence_[0];
  for (int q = 1; q < kAffineTerms; ++q) sum += theta[q] * divergence_[q];
  return sum;
}

Eigen::VectorXd AffineModel::f(const FlowParameter& y) const {
  const Eigen::VectorXd t0 = theta_f0(y);
  const Eigen::VectorXd ts = theta_fs(y);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(velocity_size());
  for (int q = 0; q < kAffineTerms; ++q) sum += t0[q] * f0_[q] + ts[q] * fs_[q];
  return sum;
}

Eigen::VectorXd AffineModel::g(const FlowParameter& y) const {
  const Eigen::VectorXd theta = theta_g(y);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(pressure_size());
  for (int q = 0; q < kAffineTerms; ++q) sum += theta[q] * g_[q];
  return sum;
}

SparseMatrix AffineModel::convection_block(int q, const Eigen::VectorXd& w) const {
  if (q < 0 || q >= kAffineTerms) throw std::invalid_argument("convection_block: term index out of range");
  Eigen::Matrix<double, kSubdomains, 2> weight = Eigen::Matrix<double, kSubdomains, 2>::Zero();
  weight(q / 2, q % 2) = 1.0;
  return assemble_convection(mesh_, mesh_.vertices, w, weight, false);
}

SparseMatrix AffineModel::convection(const FlowParameter& y, const Eigen::VectorXd& w, bool newton_term) const {
  const Eigen::VectorXd theta = theta_c(y);
  Eigen::Matrix<double, kSubdomains, 2> weight;
  for (int r = 0; r < kSubdomains; ++r) weight.row(r) << theta[2 * r], theta[2 * r + 1];
  return assemble_convection(mesh_, mesh_.vertices, w, weight, newton_term);
}

Eigen::VectorXd AffineModel::convection_residual(const FlowParameter& y, const Eigen::VectorXd& w) const {
  return convection(y, w, false) * w;
}

Eigen::VectorXd AffineModel::restrict_velocity(const Eigen::VectorXd& u) const {
  if (u.size() != velocity_size()) throw std::invalid_argument("restrict_velocity: length mismatch");
  return selection_ * u;
}

Eigen::VectorXd AffineModel::extend_velocity(const Eigen::VectorXd& free) const {
  if (free.size() != free_velocity_size()) throw std::invalid_argument("extend_velocity: length mismatch");
  return selection_.transpose() * free;
}

PhysicalOperators assemble_physical(const AffineModel& model, const FlowParameter& y) {
  const Mesh& mesh = model.mesh();
  const int nu = model.velocity_size();
  const int np = model.pressure_size();
  const auto blocks = assemble_linear(mesh, physical_vertices(mesh, y));
  Triplets a_all, b_all;
  for (int q = 0; q < kAffineTerms; ++q) {
    a_all.insert(a_all.end(), blocks.stiffness[q].begin(), blocks.stiffness[q].end());
    b_all.insert(b_all.end(), blocks.divergence[q].begin(), blocks.divergence[q].end());
  }
  PhysicalOperators ops;
  ops.a = y.nu * from_triplets(a_all, nu, nu);
  ops.b = from_triplets(b_all, np, nu);
  ops.f = Eigen::VectorXd::Zero(nu);
  for (int r = 0; r < kSubdomains; ++r) {
    ops.f += model.body_force().x() * blocks.load[2 * r] + model.body_force().y() * blocks.load[2 * r + 1];
  }
  // the physical lifting has the same nodal values as v_max times the reference one
  const Eigen::VectorXd lift = y.vmax * model.lifting();
  ops.f -= ops.a * lift;
  ops.g = -(ops.b * lift);
  return ops;
}

SparseMatrix assemble_physical_convection(const AffineModel& model, const FlowParameter& y,
                                          const Eigen::VectorXd& w) {
  const Eigen::Matrix<double, kSubdomains, 2> ones = Eigen::Matrix<double, kSubdomains, 2>::Ones();
  return assemble_convection(model.mesh(), physical_vertices(model.mesh(), y), w, ones, false);
}

}  // namespace wrom::fom
