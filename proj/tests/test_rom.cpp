#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <filesystem>
#include <random>

#include "wrom/errors.hpp"
#include "wrom/fom/mesh.hpp"
#include "wrom/fom/solver.hpp"
#include "wrom/probability.hpp"
#include "wrom/rom/estimator.hpp"
#include "wrom/rom/greedy.hpp"
#include "wrom/rom/persistence.hpp"
#include "wrom/rom/pod.hpp"
#include "wrom/rom/reduced_basis.hpp"
#include "wrom/rom/reduced_model.hpp"

using namespace wrom;
using namespace wrom::rom;
using fom::FlowParameter;

namespace {

SparseMatrix random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  const Eigen::MatrixXd a = g * g.transpose() / n + Eigen::MatrixXd::Identity(n, n);
  return a.sparseView();
}

Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

double identity_defect(const Eigen::MatrixXd& z, const SparseMatrix& x) {
  if (z.cols() == 0) return 0.0;
  return (z.transpose() * (x * z) - Eigen::MatrixXd::Identity(z.cols(), z.cols())).cwiseAbs().maxCoeff();
}

// Weighted projection error evaluated through an explicit dense projector.
double projection_error_oracle(const Eigen::MatrixXd& s, const Eigen::VectorXd& w, const Eigen::MatrixXd& z,
                               const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd gram = z.transpose() * x * z;
  const Eigen::MatrixXd proj = z * gram.ldlt().solve(z.transpose() * x);
  double e = 0.0;
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    const Eigen::VectorXd r = s.col(i) - proj * s.col(i);
    e += w[i] * r.dot(x * r);
  }
  return e;
}

struct Fixture {
  fom::AffineModel model;
  probability::ParameterBox box;
  std::vector<fom::TruthSolution> snapshots;
  Eigen::VectorXd weights;
};

const Fixture& fixture(fom::Equation eq) {
  static std::map<fom::Equation, Fixture> cache;
  auto it = cache.find(eq);
  if (it != cache.end()) return it->second;
  Fixture f{fom::AffineModel::assemble(fom::build_mesh(1), eq), probability::ParameterBox::flow_default({1, 1}), {}, {}};
  const auto set = probability::sample(f.box, 31, 12);
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    f.snapshots.push_back(fom::solve(f.model, FlowParameter::from_vector(set.point(i)), eq));
  }
  f.weights = set.weights;
  return cache.emplace(eq, std::move(f)).first->second;
}

double relative_h1(const fom::AffineModel& model, const Eigen::VectorXd& u, const Eigen::VectorXd& ref) {
  return fom::seminorm(model, u - ref, fom::Norm::VelocityH1) / fom::seminorm(model, ref, fom::Norm::VelocityH1);
}

}  // namespace

TEST_CASE("weighted_pod: rank-one and two-mode examples") {
  std::mt19937_64 rng(1);
  const SparseMatrix x = random_spd(15, rng);
  const Eigen::VectorXd psi = random_matrix(15, 1, rng);
  const int m = 6;
  const Eigen::MatrixXd s = psi.replicate(1, m);
  const PodResult r = weighted_pod(s, Eigen::VectorXd::Constant(m, 1.0 / m), x);
  REQUIRE(r.basis.cols() == 1);
  REQUIRE(r.eigenvalues.size() == 1);
  const double norm2 = psi.dot(x * psi);
  CHECK(std::abs(r.eigenvalues[0] - norm2) < 1e-12 * norm2);
  const Eigen::VectorXd unit = psi / std::sqrt(norm2);
  CHECK(std::min((r.basis.col(0) - unit).norm(), (r.basis.col(0) + unit).norm()) < 1e-10);

  // two X-orthonormal snapshots
  Eigen::MatrixXd two(15, 0);
  orthonormalize_append(two, random_matrix(15, 1, rng).col(0), x);
  orthonormalize_append(two, random_matrix(15, 1, rng).col(0), x);
  REQUIRE(two.cols() == 2);
  const PodResult r2 = weighted_pod(two, Eigen::Vector2d(0.9, 0.1), x);
  REQUIRE(r2.eigenvalues.size() == 2);
  CHECK(std::abs(r2.eigenvalues[0] - 0.9) < 1e-12);
  CHECK(std::abs(r2.eigenvalues[1] - 0.1) < 1e-12);
  // same plane: projecting the snapshots onto the basis loses nothing
  CHECK(projection_error_oracle(two, Eigen::Vector2d(1, 1), r2.basis, Eigen::MatrixXd(x)) < 1e-20);
}

TEST_CASE("weighted_pod: errors and degenerate input") {
  std::mt19937_64 rng(2);
  const SparseMatrix x = random_spd(8, rng);
  const PodResult zero = weighted_pod(Eigen::MatrixXd::Zero(8, 4), Eigen::VectorXd::Constant(4, 0.25), x);
  CHECK(zero.basis.cols() == 0);
  CHECK_THROWS_AS(weighted_pod(Eigen::MatrixXd::Zero(8, 0), Eigen::VectorXd(0), x), std::invalid_argument);
  CHECK_THROWS_AS(weighted_pod(random_matrix(8, 3, rng), Eigen::VectorXd::Zero(3), x), std::invalid_argument);
  CHECK_THROWS_AS(weighted_pod(random_matrix(8, 3, rng), Eigen::VectorXd::Ones(2), x), std::invalid_argument);
}

TEST_CASE("weighted_pod: spectral identity and orthonormality") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uw(0.01, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 40, m = 20;
    const SparseMatrix x = random_spd(n, rng);
    // snapshots with a decaying spectrum
    Eigen::MatrixXd s = random_matrix(n, m, rng);
    for (int j = 0; j < m; ++j) s.col(j) *= std::pow(0.7, j);
    Eigen::VectorXd w(m);
    for (int i = 0; i < m; ++i) w[i] = uw(rng);
    w /= w.sum();
    const PodResult r = weighted_pod(s, w, x);
    CHECK(identity_defect(r.basis, x) < 1e-10);
    CHECK(r.symmetric);
    for (Eigen::Index k = 1; k < r.eigenvalues.size(); ++k) CHECK(r.eigenvalues[k] <= r.eigenvalues[k - 1]);
    const Eigen::MatrixXd xd(x);
    const double total = r.eigenvalues.sum();
    double previous = std::numeric_limits<double>::infinity();
    for (int nn = 0; nn <= r.basis.cols(); ++nn) {
      const double tail = r.eigenvalues.tail(r.eigenvalues.size() - nn).sum();
      const double lhs = projection_error_oracle(s, w, r.basis.leftCols(nn), xd);
      CHECK(std::abs(lhs - tail) <= 1e-10 * total);
      CHECK(std::abs(weighted_projection_error(s, w, r.basis, nn, x) - lhs) <= 1e-10 * total);
      CHECK(lhs <= previous + 1e-14 * total);
      previous = lhs;
    }

    // spectrum shared with the nonsymmetric P C
    Eigen::MatrixXd c = s.transpose() * xd * s;
    Eigen::EigenSolver<Eigen::MatrixXd> oracle(w.asDiagonal() * c);
    std::vector<double> ev;
    for (Eigen::Index i = 0; i < oracle.eigenvalues().size(); ++i) ev.push_back(oracle.eigenvalues()[i].real());
    std::sort(ev.rbegin(), ev.rend());
    for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) CHECK(std::abs(ev[i] - r.eigenvalues[i]) < 1e-10 * ev[0]);

    // symmetrized matrix symmetry
    const Eigen::VectorXd root = w.cwiseSqrt();
    const Eigen::MatrixXd sym = root.asDiagonal() * c * root.asDiagonal();
    CHECK((sym - sym.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * sym.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("weighted_pod: truncation options") {
  std::mt19937_64 rng(4);
  const SparseMatrix x = random_spd(30, rng);
  Eigen::MatrixXd s = random_matrix(30, 10, rng);
  for (int j = 0; j < 10; ++j) s.col(j) *= std::pow(0.3, j);
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(10, 0.1);
  PodOptions opts;
  opts.max_modes = 3;
  CHECK(weighted_pod(s, w, x, opts).basis.cols() == 3);
  opts.max_modes = -1;
  opts.energy_tolerance = 1e-3;
  const PodResult r = weighted_pod(s, w, x, opts);
  const double total = r.eigenvalues.sum();
  const int n = static_cast<int>(r.basis.cols());
  CHECK(r.eigenvalues.head(n).sum() >= (1 - 1e-3) * total);
  CHECK(r.eigenvalues.head(n - 1).sum() < (1 - 1e-3) * total);
}

TEST_CASE("weighted_pod: signed weights use the nonsymmetric route") {
  std::mt19937_64 rng(5);
  const SparseMatrix x = random_spd(25, rng);
  Eigen::MatrixXd s = random_matrix(25, 8, rng);
  Eigen::VectorXd w(8);
  w << 0.4, 0.3, -0.05, 0.2, 0.1, -0.02, 0.05, 0.02;
  const PodResult r = weighted_pod(s, w, x);
  CHECK_FALSE(r.symmetric);
  CHECK(r.basis.cols() >= 1);
  CHECK(identity_defect(r.basis, x) < 1e-10);
  for (Eigen::Index k = 1; k < r.eigenvalues.size(); ++k) CHECK(std::abs(r.eigenvalues[k]) <= std::abs(r.eigenvalues[k - 1]));
}

TEST_CASE("orthonormalize_append drops dependent columns") {
  std::mt19937_64 rng(6);
  const SparseMatrix x = random_spd(10, rng);
  Eigen::MatrixXd basis(10, 0);
  const Eigen::VectorXd a = random_matrix(10, 1, rng);
  const Eigen::VectorXd b = random_matrix(10, 1, rng);
  CHECK(orthonormalize_append(basis, a, x));
  CHECK(orthonormalize_append(basis, b, x));
  CHECK_FALSE(orthonormalize_append(basis, 2 * a - 3 * b, x));
  CHECK_FALSE(orthonormalize_append(basis, Eigen::VectorXd::Zero(10), x));
  CHECK(basis.cols() == 2);
  CHECK(identity_defect(basis, x) < 1e-12);
}

TEST_CASE("supremizer enrichment") {
  const Fixture& f = fixture(fom::Equation::Stokes);
  BasisBuilder builder(f.model, FlowParameter::reference());
  const Eigen::VectorXd zero_p = Eigen::VectorXd::Zero(f.model.pressure_size());
  const Eigen::VectorXd u0 = f.snapshots[0].homogeneous_velocity(f.model);
  builder.add(&u0, &zero_p);
  CHECK(builder.basis().velocity.cols() == 1);
  CHECK(builder.basis().pressure.cols() == 0);
  const Eigen::VectorXd p1 = f.snapshots[1].pressure;
  builder.add(nullptr, &p1);
  CHECK(builder.basis().velocity.cols() == 2);
  CHECK(builder.basis().velocity_columns.back().supremizer);
  CHECK(identity_defect(builder.basis().velocity, f.model.velocity_inner_product()) < 1e-10);

  // supremizer contract: (s, v)_X = b(v, q) for all free v
  const SupremizerOperator sup(f.model, FlowParameter::reference());
  const Eigen::VectorXd s = sup(p1);
  const SparseMatrix& sel = f.model.free_selection();
  const Eigen::VectorXd lhs = sel * (f.model.velocity_inner_product() * s);
  const Eigen::VectorXd rhs = sel * (SparseMatrix(f.model.b(FlowParameter::reference()).transpose()) * p1);
  CHECK((lhs - rhs).norm() < 1e-10 * rhs.norm());
}

TEST_CASE("POD basis invariants and reduced saddle-point rank") {
  const Fixture& f = fixture(fom::Equation::Stokes);
  const ReducedBasis basis = pod_basis(f.model, f.snapshots, f.weights, {});
  CHECK(identity_defect(basis.velocity, f.model.velocity_inner_product()) < 1e-10);
  CHECK(identity_defect(basis.pressure, f.model.pressure_inner_product()) < 1e-10);
  CHECK(basis.supremizer_count() == basis.pressure.cols());
  for (Eigen::Index k = 1; k < basis.velocity_eigenvalues.size(); ++k) {
    CHECK(basis.velocity_eigenvalues[k] <= basis.velocity_eigenvalues[k - 1]);
    CHECK(basis.velocity_eigenvalues[k] >= 0.0);
  }
  const ReducedModel reduced(f.model, basis);
  for (int n = 1; n <= basis.size(); ++n) {
    Eigen::MatrixXd k;
    Eigen::VectorXd rhs;
    reduced.stokes_system(FlowParameter::reference(), n, k, rhs);
    CHECK(k.rows() <= 3 * n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
    CHECK(lu.rank() == k.rows());
  }
  // constrained dofs vanish in every column
  for (int i = 0; i < f.model.velocity_size(); ++i) {
    if (f.model.constrained()[i]) CHECK(basis.velocity.row(i).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("projected blocks agree with independent projections") {
  const Fixture& f = fixture(fom::Equation::NavierStokes);
  const ReducedBasis basis = pod_basis(f.model, f.snapshots, f.weights, {});
  const ReducedModel reduced(f.model, basis);
  const Eigen::MatrixXd z = basis.velocity;
  const Eigen::MatrixXd zp = basis.pressure;
  for (int q = 0; q < fom::kAffineTerms; ++q) {
    const Eigen::MatrixXd a = z.transpose() * Eigen::MatrixXd(f.model.stiffness_blocks()[q]) * z;
    CHECK((reduced.stiffness()[q] - a).norm() <= 1e-12 * std::max(1.0, a.norm()));
  }
  // trilinear entries against direct evaluation of c_q(zeta_j, zeta_k, zeta_i)
  const int q = 5;
  for (int j = 0; j < 3; ++j) {
    const Eigen::MatrixXd cj = Eigen::MatrixXd(f.model.convection_block(q, z.col(j)));
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        const double direct = z.col(i).dot(cj * z.col(k));
        CHECK(std::abs(reduced.convection()[q][j](i, k) - direct) < 1e-12 * std::max(1.0, std::abs(direct)));
      }
  }

  // online/offline consistency against directly assembled physical operators
  std::mt19937_64 rng(9);
  const auto set = probability::sample(f.box, 77, 10);
  const int n = basis.size();
  for (Eigen::Index t = 0; t < set.size(); ++t) {
    const FlowParameter y = FlowParameter::from_vector(set.point(t));
    const fom::PhysicalOperators direct = fom::assemble_physical(f.model, y);
    Eigen::MatrixXd k;
    Eigen::VectorXd rhs;
    reduced.stokes_system(y, n, k, rhs);
    const auto nv = z.cols();
    const Eigen::MatrixXd a = z.transpose() * (direct.a * z);
    const Eigen::MatrixXd b = zp.transpose() * (direct.b * z);
    const Eigen::VectorXd fr = z.transpose() * direct.f;
    CHECK((k.topLeftCorner(nv, nv) - a).norm() <= 1e-12 * a.norm());
    CHECK((k.bottomLeftCorner(zp.cols(), nv) - b).norm() <= 1e-12 * b.norm());
    CHECK((rhs.head(nv) - fr).norm() <= 1e-12 * fr.norm());
  }
}

TEST_CASE("online solves reproduce snapshots with the full basis") {
  for (auto eq : {fom::Equation::Stokes, fom::Equation::NavierStokes}) {
    const Fixture& f = fixture(eq);
    const ReducedBasis basis = pod_basis(f.model, f.snapshots, f.weights, {});
    const ReducedModel reduced(f.model, basis);
    const int n = basis.size();
    for (const auto& truth : f.snapshots) {
      const ReducedSolution s = reduced.online_solve(truth.parameter, n);
      const FullSolution full = reduced.reconstruct(s);
      CHECK(relative_h1(f.model, full.velocity, truth.velocity) < 1e-8);
      CHECK(combined_error(f.model, full.velocity - truth.velocity, full.pressure - truth.pressure) <
            1e-8 * combined_error(f.model, truth.velocity, truth.pressure));
    }
    const ReducedSolution zero = reduced.online_solve(f.snapshots[0].parameter, 0);
    const FullSolution lift = reduced.reconstruct(zero);
    CHECK((lift.velocity - f.snapshots[0].parameter.vmax * f.model.lifting()).norm() == 0.0);
    CHECK_THROWS_AS(reduced.online_solve(f.snapshots[0].parameter, n + 1), std::invalid_argument);
  }
}

TEST_CASE("reconstruct and project") {
  const Fixture& f = fixture(fom::Equation::Stokes);
  const ReducedBasis basis = pod_basis(f.model, f.snapshots, f.weights, {});
  const ReducedModel reduced(f.model, basis);
  const int n = 4;
  const FlowParameter y = f.snapshots[2].parameter;
  const ReducedSolution p1 = reduced.project(f.model, f.snapshots[2].velocity, f.snapshots[2].pressure, y, n);
  const FullSolution r1 = reduced.reconstruct(p1);
  const ReducedSolution p2 = reduced.project(f.model, r1.velocity, r1.pressure, y, n);
  const FullSolution r2 = reduced.reconstruct(p2);
  CHECK((r2.velocity - r1.velocity).norm() <= 1e-12 * r1.velocity.norm());
  CHECK((r2.pressure - r1.pressure).norm() <= 1e-12 * r1.pressure.norm());

  ReducedSolution bad = p1;
  bad.velocity.conservativeResize(bad.velocity.size() - 1);
  CHECK_THROWS_AS(reduced.reconstruct(bad), std::invalid_argument);
  CHECK_THROWS_AS(ReducedModel(f.model, ReducedBasis{}), std::invalid_argument);
}

TEST_CASE("estimators") {
  const Fixture& f = fixture(fom::Equation::Stokes);
  const ReducedBasis basis = pod_basis(f.model, f.snapshots, f.weights, {});
  const ReducedModel reduced(f.model, basis);

  Estimator exact = Estimator::exact_error(f.model, WeightMode::None, f.box);
  const ReducedSolution full = reduced.online_solve(f.snapshots[0].parameter, basis.size());
  CHECK(exact.estimate(reduced, full, f.snapshots[0].parameter.to_vector(), &f.snapshots[0]) < 1e-8);

  const double beta = stability_lower_bound(f.model, f.box);
  CHECK(beta > 0.0);
  Estimator residual = Estimator::residual(f.model, WeightMode::None, f.box, beta);
  CHECK_THROWS_AS(residual.raw(reduced, full, nullptr), InvalidState);
  residual.prepare(basis);
  const auto test = probability::sample(f.box, 1234, 10);
  for (int n : {1, 3, 6}) {
    for (Eigen::Index i = 0; i < test.size(); ++i) {
      const FlowParameter y = FlowParameter::from_vector(test.point(i));
      const fom::TruthSolution truth = fom::solve_stokes(f.model, y);
      const ReducedSolution s = reduced.online_solve(y, n);
      const double err = exact.raw(reduced, s, &truth);
      CHECK(residual.raw(reduced, s, nullptr) >= err);
    }
  }
  CHECK_THROWS_AS(Estimator::residual(f.model, WeightMode::None, f.box, 0.0), std::invalid_argument);
}

TEST_CASE("estimator weights") {
  const Fixture& f = fixture(fom::Equation::Stokes);
  const auto box = probability::ParameterBox::flow_default({75, 75});
  Estimator e = Estimator::exact_error(f.model, WeightMode::Density, box);
  Eigen::VectorXd mid(5);
  mid << 1.05, 1.1, 1.05, 1.1, 10.1;
  const double w = e.weight(mid);
  CHECK(std::abs(w - box.density(mid)) < 1e-12 * w);
  e.set_density_scale(3.0);
  CHECK(std::abs(e.weight(mid) - 3.0 * w) < 1e-12 * w);
  Estimator sq = Estimator::exact_error(f.model, WeightMode::SqrtDensity, box);
  CHECK(std::abs(sq.weight(mid) - std::sqrt(w)) < 1e-12 * std::sqrt(w));
  // endpoint evaluation is clamped inside the box
  const auto bimodal = probability::ParameterBox::flow_default({0.03, 0.03});
  Estimator edge = Estimator::exact_error(f.model, WeightMode::Density, bimodal);
  Eigen::VectorXd corner(5);
  corner << 0.2, 0.2, 1.9, 2.0, 20.0;
  CHECK(std::isfinite(edge.weight(corner)));
  CHECK(edge.weight(corner) > 0.0);
}

TEST_CASE("weighted greedy") {
  const Fixture& f = fixture(fom::Equation::Stokes);
  probability::WeightedSampleSet one;
  one.points = f.snapshots[0].parameter.to_vector();
  one.weights = Eigen::VectorXd::Ones(1);
  Estimator exact = Estimator::exact_error(f.model, WeightMode::None, f.box);
  GreedyOptions opts;
  opts.max_size = 5;
  const ReducedBasis single = weighted_greedy(f.model, one, exact, opts);
  CHECK(single.size() == 1);

  const auto training = probability::sample(f.box, 31, 12);
  GreedyOptions inf = opts;
  inf.tolerance = std::numeric_limits<double>::infinity();
  CHECK(weighted_greedy(f.model, training, exact, inf, &f.snapshots).size() == 1);

  const ReducedBasis b = weighted_greedy(f.model, training, exact, opts, &f.snapshots);
  CHECK(b.size() == 5);
  CHECK(b.greedy.selected.size() == 5);
  const auto& mx = b.greedy.max_estimator;
  for (std::size_t i = 1; i < mx.size(); ++i) CHECK(mx[i] <= mx[i - 1] * (1 + 1e-12));
  CHECK(identity_defect(b.velocity, f.model.velocity_inner_product()) < 1e-10);

  // argmax invariance under scaling the density
  Estimator d1 = Estimator::exact_error(f.model, WeightMode::Density, f.box);
  Estimator d2 = Estimator::exact_error(f.model, WeightMode::Density, f.box);
  d2.set_density_scale(7.5);
  const ReducedBasis g1 = weighted_greedy(f.model, training, d1, opts, &f.snapshots);
  const ReducedBasis g2 = weighted_greedy(f.model, training, d2, opts, &f.snapshots);
  REQUIRE(g1.greedy.selected.size() == g2.greedy.selected.size());
  for (std::size_t i = 0; i < g1.greedy.selected.size(); ++i) {
    CHECK((g1.greedy.selected[i] - g2.greedy.selected[i]).norm() == 0.0);
    CHECK(std::abs(g2.greedy.selected_estimator[i] - 7.5 * g1.greedy.selected_estimator[i]) <=
          1e-12 * g2.greedy.selected_estimator[i]);
  }

  GreedyOptions random = opts;
  random.random_start = true;
  random.seed = 4;
  const ReducedBasis r = weighted_greedy(f.model, training, exact, random, &f.snapshots);
  CHECK(r.greedy.random_start);
  CHECK(r.size() == 5);

  Estimator residual = Estimator::residual(f.model, WeightMode::None, f.box, stability_lower_bound(f.model, f.box));
  const ReducedBasis rb = weighted_greedy(f.model, training, residual, opts);
  CHECK(rb.size() == 5);
}

TEST_CASE("model persistence reproduces online solves bit for bit") {
  const auto dir = std::filesystem::temp_directory_path() / "wrom_test_model";
  for (auto eq : {fom::Equation::Stokes, fom::Equation::NavierStokes}) {
    const Fixture& f = fixture(eq);
    const ReducedModel reduced(f.model, pod_basis(f.model, f.snapshots, f.weights, {}));
    std::filesystem::remove_all(dir);
    save_model(dir, reduced, {{"note", "test"}});
    const ReducedModel loaded = load_model(dir);
    CHECK(read_manifest(dir)["metadata"]["note"] == "test");
    CHECK(loaded.mesh_hash() == f.model.mesh_hash());
    CHECK(loaded.equation() == eq);
    const auto test = probability::sample(f.box, 5, 3);
    for (Eigen::Index i = 0; i < test.size(); ++i) {
      const FlowParameter y = FlowParameter::from_vector(test.point(i));
      for (int n : {1, reduced.max_size()}) {
        const ReducedSolution a = reduced.online_solve(y, n);
        const ReducedSolution b = loaded.online_solve(y, n);
        CHECK(a.velocity == b.velocity);
        CHECK(a.pressure == b.pressure);
      }
    }
  }
  std::filesystem::remove_all(dir);
  CHECK_THROWS(load_model(dir));
}
