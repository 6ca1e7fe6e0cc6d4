#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "wrom/harness/config.hpp"
#include "wrom/harness/parallel.hpp"
#include "wrom/harness/report.hpp"
#include "wrom/harness/study.hpp"
#include "wrom/rom/persistence.hpp"

namespace fs = std::filesystem;
using namespace wrom;

namespace {

std::string caption_for(const harness::StudyConfig& c) {
  const auto& s = c.shapes.front();
  std::string caption = fom::to_string(c.equation) + ", " + harness::to_string(c.method) + ", Beta(" +
                        std::to_string(s.alpha) + ", " + std::to_string(s.beta) + "), M = " +
                        std::to_string(c.training_size);
  if (!c.name.empty()) caption = c.name + ": " + caption;
  return caption;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

harness::OfflineResult offline(const harness::StudyConfig& config, const fom::AffineModel& model, const fs::path& dir,
                               int threads) {
  std::cerr << "offline: " << harness::to_string(config.method) << ", " << fom::to_string(config.equation) << ", "
            << model.velocity_size() << " velocity dofs\n";
  harness::OfflineResult result = harness::run_offline(config, model, threads);
  rom::save_model(dir / "model", result.reduced, result.metadata);
  std::cerr << "offline: training cardinality " << result.training.size() << ", basis size "
            << result.reduced.basis().size() << "\n";
  return result;
}

void report(const harness::ErrorTable& table) {
  for (const auto& r : table.rows) {
    std::printf("N=%2d  absolute %.3e  (max %.3e)  relative %.3e  (max %.3e)%s\n", r.n, r.absolute, r.absolute_max,
                r.relative, r.relative_max, r.failures ? "  [failures]" : "");
  }
}

bool same_test_law(const harness::StudyConfig& a, const harness::StudyConfig& b) {
  if (a.equation != b.equation || a.refinement != b.refinement || a.body_force != b.body_force) return false;
  if (a.test_seed != b.test_seed || a.test_size != b.test_size) return false;
  for (std::size_t j = 0; j < a.ranges.size(); ++j) {
    if (a.ranges[j].lo != b.ranges[j].lo || a.ranges[j].hi != b.ranges[j].hi) return false;
    if (a.shapes[j].alpha != b.shapes[j].alpha || a.shapes[j].beta != b.shapes[j].beta) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted reduced order models for parametrized Stokes and Navier-Stokes flows"};
  app.require_subcommand(1);
  fs::path out = "runs";
  app.add_option("--out", out, "Base directory for run outputs")->capture_default_str();

  std::string config_path, model_dir, config_b_path, grid_out;

  auto* offline_cmd = app.add_subcommand("offline", "Train and persist a reduced model");
  offline_cmd->add_option("config", config_path)->required()->check(CLI::ExistingFile);

  auto* study_cmd = app.add_subcommand("study", "Error study of a persisted model on a random test set");
  study_cmd->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  study_cmd->add_option("--model", model_dir, "Model directory written by 'offline'")->required()->check(CLI::ExistingDirectory);

  auto* run_cmd = app.add_subcommand("run", "offline followed by study in one run directory");
  run_cmd->add_option("config", config_path)->required()->check(CLI::ExistingFile);

  auto* grid_cmd = app.add_subcommand("grid-dump", "Write the training set as CSV (w, y1, ..., y5)");
  grid_cmd->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  grid_cmd->add_option("-o,--output", grid_out, "Output file (default: stdout)");

  auto* compare_cmd = app.add_subcommand("compare", "Paired comparison of two configs on one shared test set");
  compare_cmd->add_option("configA", config_path)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("configB", config_b_path)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const int threads = harness::thread_count();
    const harness::StudyConfig config = harness::load_config(config_path);

    if (grid_cmd->parsed()) {
      const auto set = harness::training_set(config);
      std::ofstream file;
      if (!grid_out.empty()) {
        file.open(grid_out);
        if (!file) throw std::runtime_error("cannot write " + grid_out);
      }
      std::ostream& os = grid_out.empty() ? std::cout : file;
      os << "w,y1,y2,y3,y4,y5\n";
      char buf[40];
      for (Eigen::Index i = 0; i < set.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", set.weights[i]);
        os << buf;
        for (Eigen::Index j = 0; j < set.points.rows(); ++j) {
          std::snprintf(buf, sizeof buf, "%.17g", set.points(j, i));
          os << ',' << buf;
        }
        os << '\n';
      }
      return 0;
    }

    const fom::AffineModel model = harness::build_model(config);

    if (offline_cmd->parsed()) {
      const fs::path dir = harness::make_run_directory(out, config);
      offline(config, model, dir, threads);
      std::cout << (dir / "model").string() << '\n';
      return 0;
    }

    if (study_cmd->parsed() || run_cmd->parsed()) {
      fs::path dir = harness::make_run_directory(out, config);
      rom::ReducedModel reduced;
      if (run_cmd->parsed()) {
        reduced = offline(config, model, dir, threads).reduced;
      } else {
        reduced = rom::load_model(model_dir);
        if (reduced.equation() != config.equation) throw std::invalid_argument("model equation differs from config");
      }
      harness::ErrorTable table = harness::run_error_study(reduced, model, config, threads);
      table.metadata["model_directory"] = run_cmd->parsed() ? (dir / "model").string() : model_dir;
      if (!run_cmd->parsed()) table.metadata["model_manifest"] = rom::read_manifest(model_dir)["metadata"];
      harness::emit(dir, "errors", table, caption_for(config));
      report(table);
      std::cout << dir.string() << '\n';
      return 0;
    }

    if (compare_cmd->parsed()) {
      const harness::StudyConfig config_b = harness::load_config(config_b_path);
      if (!same_test_law(config, config_b)) {
        throw std::invalid_argument(
            "compare: both configs must share equation, refinement, forcing, parameter law and test seed/size");
      }
      const fs::path dir = harness::make_run_directory(out, config);
      const auto a = offline(config, model, dir / "A", threads);
      const auto b = offline(config_b, model, dir / "B", threads);
      const harness::SolvedSet test = harness::solve_all(model, harness::test_set(config), threads);
      const int n_min = std::min(config.n_min, config_b.n_min);
      const int n_max = std::max(config.n_max, config_b.n_max);
      harness::ErrorTable ta = harness::error_table(a.reduced, model, test, n_min, n_max, threads);
      harness::ErrorTable tb = harness::error_table(b.reduced, model, test, n_min, n_max, threads);
      ta.metadata.update(a.metadata);
      tb.metadata.update(b.metadata);
      harness::emit(dir / "A", "errors", ta, caption_for(config));
      harness::emit(dir / "B", "errors", tb, caption_for(config_b));

      std::vector<harness::Series> series;
      for (auto& s : harness::table_series(ta, "A " + harness::to_string(config.method) + " ")) series.push_back(s);
      for (auto& s : harness::table_series(tb, "B " + harness::to_string(config_b.method) + " ")) series.push_back(s);
      series.erase(std::remove_if(series.begin(), series.end(),
                                  [](const harness::Series& s) { return s.label.find(" max") != std::string::npos; }),
                   series.end());
      {
        std::ofstream f(dir / "compare.svg");
        harness::write_svg(f, series, "paired comparison on a shared test set");
      }
      nlohmann::json summary = nlohmann::json::array();
      std::printf("%4s  %12s  %12s  better\n", "N", "A absolute", "B absolute");
      const std::size_t rows = std::min(ta.rows.size(), tb.rows.size());
      for (std::size_t r = 0; r < rows; ++r) {
        const auto& ra = ta.rows[r];
        const auto& rb = tb.rows[r];
        const char* better = ra.absolute < rb.absolute ? "A" : (rb.absolute < ra.absolute ? "B" : "=");
        std::printf("%4d  %12.4e  %12.4e  %s\n", ra.n, ra.absolute, rb.absolute, better);
        summary.push_back({{"N", ra.n}, {"A_absolute", ra.absolute}, {"B_absolute", rb.absolute}, {"better", better}});
      }
      write_json(dir / "compare.json", {{"A", config.canonical()}, {"B", config_b.canonical()}, {"rows", summary}});
      std::cout << dir.string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
