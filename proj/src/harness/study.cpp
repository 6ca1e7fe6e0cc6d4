#include "wrom/harness/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wrom/errors.hpp"
#include "wrom/fom/mesh.hpp"
#include "wrom/harness/parallel.hpp"
#include "wrom/rom/estimator.hpp"
#include "wrom/rom/greedy.hpp"
#include "wrom/rom/pod.hpp"

namespace wrom::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string describe(const Eigen::VectorXd& y) {
  std::ostringstream os;
  os << std::setprecision(17) << "(";
  for (Eigen::Index j = 0; j < y.size(); ++j) os << (j ? ", " : "") << y[j];
  os << ")";
  return os.str();
}

int tensor_order_for(int target) {
  int order = 1;
  while (std::pow(order, 5) < target) ++order;
  return order;
}

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("WROM_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw std::invalid_argument(std::string("WROM_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<int>(v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

fom::AffineModel build_model(const StudyConfig& config) {
  return fom::AffineModel::assemble(fom::build_mesh(config.refinement), config.equation, config.body_force);
}

probability::WeightedSampleSet training_set(const StudyConfig& config) {
  const probability::ParameterBox box = config.box();
  const int m = config.training_size;
  switch (config.method) {
    case Method::WeightedPodMonteCarlo:
    case Method::WeightedGreedy:
      return probability::sample(box, config.training_seed, m);
    case Method::WeightedPodTensor:
      return probability::quadrature_training_set(box, probability::tensor_grid_for(box, tensor_order_for(m)));
    case Method::WeightedPodSmolyak:
      return probability::quadrature_training_set(
          box, probability::smolyak_grid_for(box, probability::smolyak_level_for_size(box, m)));
    case Method::StandardPOD:
    case Method::StandardGreedy:
      if (config.baseline_sampling == BaselineSampling::Beta) return probability::sample(box, config.training_seed, m);
      return probability::sample_with_shapes(box, std::vector<probability::BetaParams>(5), config.training_seed, m);
  }
  throw std::logic_error("training_set: unhandled method");
}

probability::WeightedSampleSet test_set(const StudyConfig& config) {
  return probability::sample(config.box(), config.test_seed, config.test_size);
}

SolvedSet solve_all(const fom::AffineModel& model, const probability::WeightedSampleSet& samples, int threads) {
  struct Outcome {
    std::optional<fom::TruthSolution> truth;
    std::string error;
  };
  const auto t0 = Clock::now();
  auto outcomes = parallel_map(static_cast<std::size_t>(samples.size()), threads, [&](std::size_t i) {
    Outcome o;
    try {
      o.truth = fom::solve(model, fom::FlowParameter::from_vector(samples.point(static_cast<Eigen::Index>(i))),
                           model.equation());
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });
  SolvedSet out;
  out.samples = samples;
  out.truths.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].truth) {
      out.failures.push_back(std::to_string(i) + " " + describe(samples.point(static_cast<Eigen::Index>(i))) + ": " +
                             outcomes[i].error);
    }
    out.truths.push_back(std::move(outcomes[i].truth));
  }
  out.seconds = seconds_since(t0);
  return out;
}

nlohmann::json config_metadata(const StudyConfig& config) {
  nlohmann::json j;
  j["name"] = config.name;
  j["config_hash"] = config.hash();
  j["config"] = config.canonical();
  j["equation"] = fom::to_string(config.equation);
  j["method"] = to_string(config.method);
  j["training_seed"] = config.training_seed;
  j["test_seed"] = config.test_seed;
  j["refinement"] = config.refinement;
  return j;
}

OfflineResult run_offline(const StudyConfig& config, const fom::AffineModel& model, int threads) {
  config.validate();
  if (model.equation() != config.equation) throw std::invalid_argument("run_offline: model equation differs from config");
  OfflineResult result;
  result.training = training_set(config);

  const SolvedSet solved = solve_all(model, result.training, threads);
  if (!solved.failures.empty()) {
    std::string msg = "run_offline: " + std::to_string(solved.failures.size()) + " truth solve(s) failed:";
    for (const auto& f : solved.failures) msg += "\n  " + f;
    throw NumericalFailure(msg);
  }
  std::vector<fom::TruthSolution> truths;
  truths.reserve(solved.truths.size());
  for (const auto& t : solved.truths) truths.push_back(*t);

  const auto t0 = Clock::now();
  const probability::ParameterBox box = config.box();
  rom::ReducedBasis basis;
  nlohmann::json reduction;
  if (is_greedy(config.method)) {
    rom::WeightMode weight = config.method == Method::StandardGreedy ? rom::WeightMode::None : config.greedy_weight;
    rom::Estimator estimator = config.greedy_estimator == rom::EstimatorMode::ExactError
                                   ? rom::Estimator::exact_error(model, weight, box)
                                   : rom::Estimator::residual(model, weight, box, rom::stability_lower_bound(model, box));
    rom::GreedyOptions options;
    options.tolerance = config.greedy_tolerance;
    options.max_size = config.n_max;
    options.seed = config.training_seed;
    basis = rom::weighted_greedy(model, result.training, estimator, options, &truths);
    reduction["estimator"] = rom::to_string(estimator.mode());
    reduction["weight"] = rom::to_string(weight);
    if (estimator.mode() == rom::EstimatorMode::Residual) reduction["beta_lower_bound"] = estimator.beta_lower_bound();
  } else {
    const Eigen::Index m = result.training.size();
    const Eigen::VectorXd weights = is_standard(config.method)
                                        ? Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m))
                                        : result.training.weights;
    rom::PodOptions options;
    options.max_modes = config.n_max;
    basis = rom::pod_basis(model, truths, weights, options);
    reduction["weights"] = is_standard(config.method) ? "uniform" : "training";
  }
  const double reduction_seconds = seconds_since(t0);
  result.reduced = rom::ReducedModel(model, std::move(basis));

  nlohmann::json& meta = result.metadata;
  meta = config_metadata(config);
  meta["training_cardinality"] = result.training.size();
  meta["training_strategy"] = probability::to_string(result.training.strategy);
  meta["training_weight_sum"] = result.training.weights.sum();
  meta["basis_size"] = result.reduced.basis().size();
  meta["mesh_hash"] = model.mesh_hash();
  meta["velocity_dofs"] = model.velocity_size();
  meta["pressure_dofs"] = model.pressure_size();
  meta["reduction"] = reduction;
  meta["wall_seconds"] = {{"truth_solves", solved.seconds}, {"reduction", reduction_seconds}};
  meta["threads"] = threads;
  return result;
}

ErrorTable error_table(const rom::ReducedModel& reduced, const fom::AffineModel& model, const SolvedSet& test,
                       int n_min, int n_max, int threads) {
  if (reduced.mesh_hash() != model.mesh_hash()) {
    throw std::invalid_argument("error_table: reduced model was built on mesh " + reduced.mesh_hash() +
                                ", study mesh is " + model.mesh_hash());
  }
  const int top = std::min(n_max, reduced.basis().size());
  if (n_min > top) throw std::invalid_argument("error_table: N sweep starts above the basis size");
  const auto t0 = Clock::now();
  const std::size_t samples = test.truths.size();
  const int rows = top - n_min + 1;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // per sample: |u_h| and the absolute error at every N (NaN where the online solve failed)
  struct SampleErrors {
    double norm = 0.0;
    std::vector<double> error;
  };
  const auto per_sample = parallel_map(samples, threads, [&](std::size_t i) {
    SampleErrors out;
    out.error.assign(static_cast<std::size_t>(rows), nan);
    const auto& truth = test.truths[i];
    if (!truth) return out;
    out.norm = fom::seminorm(model, truth->velocity, fom::Norm::VelocityH1);
    const fom::FlowParameter y = truth->parameter;
    for (int r = 0; r < rows; ++r) {
      try {
        const rom::FullSolution full = reduced.reconstruct(reduced.online_solve(y, n_min + r));
        const double e = fom::seminorm(model, truth->velocity - full.velocity, fom::Norm::VelocityH1);
        if (std::isfinite(e)) out.error[static_cast<std::size_t>(r)] = e;
      } catch (const std::exception&) {
      }
    }
    return out;
  });

  ErrorTable table;
  for (int r = 0; r < rows; ++r) {
    ErrorRow row;
    row.n = n_min + r;
    double sum_abs = 0, sum_rel = 0, sum_norm = 0;
    int used = 0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double e = per_sample[i].error[static_cast<std::size_t>(r)];
      if (!test.truths[i] || std::isnan(e)) {
        ++row.failures;
        continue;
      }
      const double rel = per_sample[i].norm > 0 ? e / per_sample[i].norm : (e > 0 ? std::numeric_limits<double>::infinity() : 0.0);
      sum_abs += e;
      sum_rel += rel;
      sum_norm += per_sample[i].norm;
      row.absolute_max = std::max(row.absolute_max, e);
      row.relative_max = std::max(row.relative_max, rel);
      ++used;
    }
    if (used == 0) {
      row.absolute = row.absolute_max = row.relative = row.relative_max = row.relative_ratio_of_means = nan;
    } else {
      row.absolute = sum_abs / used;
      row.relative = sum_rel / used;
      row.relative_ratio_of_means = sum_norm > 0 ? sum_abs / sum_norm : nan;
    }
    table.rows.push_back(row);
  }
  table.metadata["test_cardinality"] = samples;
  table.metadata["test_truth_failures"] = test.failures;
  table.metadata["n_range"] = {n_min, top};
  table.metadata["basis_size"] = reduced.basis().size();
  table.metadata["mesh_hash"] = model.mesh_hash();
  table.metadata["wall_seconds"] = {{"test_truth_solves", test.seconds}, {"online_sweep", seconds_since(t0)}};
  return table;
}

ErrorTable run_error_study(const rom::ReducedModel& reduced, const fom::AffineModel& model, const StudyConfig& config,
                           int threads) {
  config.validate();
  const SolvedSet test = solve_all(model, test_set(config), threads);
  ErrorTable table = error_table(reduced, model, test, config.n_min, config.n_max, threads);
  nlohmann::json meta = config_metadata(config);
  meta.update(table.metadata);
  meta["threads"] = threads;
  table.metadata = std::move(meta);
  return table;
}

std::filesystem::path make_run_directory(const std::filesystem::path& base, const StudyConfig& config) {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream name;
  name << std::put_time(&utc, "%Y%m%dT%H%M%SZ") << '-' << config.hash();
  std::filesystem::path dir = base / name.str();
  for (int k = 2; std::filesystem::exists(dir); ++k) dir = base / (name.str() + "." + std::to_string(k));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace wrom::harness
