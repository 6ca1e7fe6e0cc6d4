#include "wrom/rom/persistence.hpp"

#include <fstream>
#include <stdexcept>

#include "wrom/fom/array_io.hpp"

namespace wrom::rom {

namespace {

constexpr int kManifestVersion = 1;

Eigen::MatrixXd stack(const std::vector<Eigen::MatrixXd>& blocks, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd out(rows * static_cast<Eigen::Index>(blocks.size()), cols);
  for (std::size_t i = 0; i < blocks.size(); ++i) out.middleRows(static_cast<Eigen::Index>(i) * rows, rows) = blocks[i];
  return out;
}

std::vector<Eigen::MatrixXd> unstack(const Eigen::MatrixXd& a, std::size_t count, Eigen::Index rows) {
  if (a.rows() != rows * static_cast<Eigen::Index>(count)) throw std::runtime_error("model array has unexpected shape");
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(a.middleRows(static_cast<Eigen::Index>(i) * rows, rows));
  return out;
}

nlohmann::json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

struct ModelAccess {
  static void save(const std::filesystem::path& dir, const ReducedModel& m, const nlohmann::json& metadata) {
    std::filesystem::create_directories(dir);
    const ReducedBasis& b = m.basis_;
    const Eigen::Index nv = b.velocity.cols();
    const Eigen::Index np = b.pressure.cols();
    nlohmann::json manifest;
    manifest["format_version"] = kManifestVersion;
    manifest["equation"] = fom::to_string(m.equation_);
    manifest["body_force"] = {m.body_force_.x(), m.body_force_.y()};
    manifest["mesh_hash"] = m.mesh_hash_;
    manifest["refinement"] = m.refinement_;
    manifest["basis_size"] = b.size();
    manifest["velocity_columns"] = nv;
    manifest["pressure_columns"] = np;
    nlohmann::json columns = nlohmann::json::array();
    for (const auto& c : b.velocity_columns) columns.push_back({{"supremizer", c.supremizer}, {"mode", c.mode}});
    manifest["velocity_column_origin"] = columns;
    manifest["pressure_modes"] = b.pressure_modes;
    manifest["velocity_eigenvalues"] = to_json(b.velocity_eigenvalues);
    manifest["pressure_eigenvalues"] = to_json(b.pressure_eigenvalues);
    nlohmann::json greedy;
    greedy["random_start"] = b.greedy.random_start;
    greedy["selected"] = nlohmann::json::array();
    for (const auto& y : b.greedy.selected) greedy["selected"].push_back(to_json(y));
    greedy["selected_estimator"] = b.greedy.selected_estimator;
    greedy["max_estimator"] = b.greedy.max_estimator;
    manifest["greedy"] = greedy;
    manifest["theta"] = {{"a", "nu*sy/sx, nu*sx/sy per subdomain"},
                         {"b", "sy, sx per subdomain"},
                         {"c", "sy, sx per subdomain"},
                         {"f0", "v_max * theta_a"},
                         {"g", "v_max * theta_b"},
                         {"fs", "f_x*sx*sy, f_y*sx*sy per subdomain"}};
    manifest["metadata"] = metadata;

    fom::write_array(dir / "velocity_basis.bin", b.velocity);
    fom::write_array(dir / "pressure_basis.bin", b.pressure);
    fom::write_array(dir / "velocity_eigenvalues.bin", b.velocity_eigenvalues);
    fom::write_array(dir / "pressure_eigenvalues.bin", b.pressure_eigenvalues);
    fom::write_array(dir / "lifting.bin", m.lifting_);
    fom::write_array(dir / "stiffness.bin", stack(m.a_, nv, nv));
    fom::write_array(dir / "divergence.bin", stack(m.b_, np, nv));
    fom::write_array(dir / "lifting_rhs.bin", m.f0_);
    fom::write_array(dir / "body_force_rhs.bin", m.fs_);
    fom::write_array(dir / "lifting_div.bin", m.g_);
    if (!m.c_.empty()) {
      std::vector<Eigen::MatrixXd> flat;
      for (const auto& per_q : m.c_) flat.insert(flat.end(), per_q.begin(), per_q.end());
      fom::write_array(dir / "convection.bin", stack(flat, nv, nv));
      fom::write_array(dir / "lifting_advects.bin", stack(m.cg_, nv, nv));
      fom::write_array(dir / "advects_lifting.bin", stack(m.gc_, nv, nv));
      fom::write_array(dir / "lifting_self.bin", m.gg_);
    }
    std::ofstream os(dir / "manifest.json");
    if (!os) throw std::runtime_error("cannot write manifest in " + dir.string());
    os << manifest.dump(2) << "\n";
  }

  static ReducedModel load(const std::filesystem::path& dir) {
    const nlohmann::json manifest = read_manifest(dir);
    if (manifest.at("format_version").get<int>() != kManifestVersion) {
      throw std::runtime_error("unsupported model manifest version in " + dir.string());
    }
    ReducedModel m;
    ReducedBasis& b = m.basis_;
    const std::string eq = manifest.at("equation").get<std::string>();
    m.equation_ = eq == fom::to_string(fom::Equation::NavierStokes) ? fom::Equation::NavierStokes : fom::Equation::Stokes;
    m.body_force_ = Eigen::Vector2d(manifest.at("body_force")[0].get<double>(), manifest.at("body_force")[1].get<double>());
    m.mesh_hash_ = manifest.at("mesh_hash").get<std::string>();
    m.refinement_ = manifest.at("refinement").get<int>();
    for (const auto& c : manifest.at("velocity_column_origin")) {
      b.velocity_columns.push_back({c.at("supremizer").get<bool>(), c.at("mode").get<int>()});
    }
    b.pressure_modes = manifest.at("pressure_modes").get<std::vector<int>>();
    const auto& greedy = manifest.at("greedy");
    b.greedy.random_start = greedy.at("random_start").get<bool>();
    for (const auto& y : greedy.at("selected")) b.greedy.selected.push_back(vector_from_json(y));
    b.greedy.selected_estimator = greedy.at("selected_estimator").get<std::vector<double>>();
    b.greedy.max_estimator = greedy.at("max_estimator").get<std::vector<double>>();

    b.velocity = fom::read_array(dir / "velocity_basis.bin");
    b.pressure = fom::read_array(dir / "pressure_basis.bin");
    b.velocity_eigenvalues = fom::read_array(dir / "velocity_eigenvalues.bin");
    b.pressure_eigenvalues = fom::read_array(dir / "pressure_eigenvalues.bin");
    m.lifting_ = fom::read_array(dir / "lifting.bin");
    const Eigen::Index nv = b.velocity.cols();
    const Eigen::Index np = b.pressure.cols();
    if (static_cast<Eigen::Index>(b.velocity_columns.size()) != nv ||
        static_cast<Eigen::Index>(b.pressure_modes.size()) != np) {
      throw std::runtime_error("model manifest and basis arrays disagree in " + dir.string());
    }
    const std::size_t q = fom::kAffineTerms;
    m.a_ = unstack(fom::read_array(dir / "stiffness.bin"), q, nv);
    m.b_ = unstack(fom::read_array(dir / "divergence.bin"), q, np);
    m.f0_ = fom::read_array(dir / "lifting_rhs.bin");
    m.fs_ = fom::read_array(dir / "body_force_rhs.bin");
    m.g_ = fom::read_array(dir / "lifting_div.bin");
    if (m.equation_ == fom::Equation::NavierStokes) {
      const auto flat = unstack(fom::read_array(dir / "convection.bin"), q * static_cast<std::size_t>(nv), nv);
      m.c_.assign(q, {});
      for (std::size_t i = 0; i < flat.size(); ++i) m.c_[i / static_cast<std::size_t>(nv)].push_back(flat[i]);
      m.cg_ = unstack(fom::read_array(dir / "lifting_advects.bin"), q, nv);
      m.gc_ = unstack(fom::read_array(dir / "advects_lifting.bin"), q, nv);
      m.gg_ = fom::read_array(dir / "lifting_self.bin");
    }
    return m;
  }
};

void save_model(const std::filesystem::path& dir, const ReducedModel& model, const nlohmann::json& metadata) {
  ModelAccess::save(dir, model, metadata);
}

ReducedModel load_model(const std::filesystem::path& dir) { return ModelAccess::load(dir); }

nlohmann::json read_manifest(const std::filesystem::path& dir) {
  std::ifstream is(dir / "manifest.json");
  if (!is) throw std::runtime_error("no model manifest in " + dir.string());
  return nlohmann::json::parse(is);
}

}  // namespace wrom::rom
