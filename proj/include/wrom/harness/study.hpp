#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrom/fom/solver.hpp"
#include "wrom/harness/config.hpp"
#include "wrom/harness/report.hpp"
#include "wrom/probability.hpp"
#include "wrom/rom/reduced_model.hpp"

namespace wrom::harness {

/// Mesh plus affine model for the config's equation, refinement and forcing.
fom::AffineModel build_model(const StudyConfig& config);

/// Training parameters and weights for the configured method:
///  - weighted POD (MC) and weighted greedy: M Beta draws, weights 1/M;
///  - tensor: the smallest Gauss-Jacobi order with order^5 >= M;
///  - Smolyak: the smallest level with at least M nodes;
///  - standard POD and greedy: M draws from the shared uniform stream pushed
///    through Beta(1,1) (or the study law with baseline_sampling = beta),
///    weights 1/M.
probability::WeightedSampleSet training_set(const StudyConfig& config);

/// `test_size` draws from the study law with test_seed.
probability::WeightedSampleSet test_set(const StudyConfig& config);

struct SolvedSet {
  probability::WeightedSampleSet samples;
  std::vector<std::optional<fom::TruthSolution>> truths;  // empty where the solve failed
  std::vector<std::string> failures;                      // "index (y): message"
  double seconds = 0.0;
};

/// Truth solves of every point as a parallel map; failures are recorded.
SolvedSet solve_all(const fom::AffineModel& model, const probability::WeightedSampleSet& samples, int threads);

struct OfflineResult {
  rom::ReducedModel reduced;
  probability::WeightedSampleSet training;
  nlohmann::json metadata;
};

/// Builds the training set, solves it, and reduces by weighted POD or
/// greedy. Throws wrom::NumericalFailure listing every failing parameter.
OfflineResult run_offline(const StudyConfig& config, const fom::AffineModel& model, int threads);

/// Error statistics of `reduced` over an already solved test set, one row per
/// N in [n_min, min(n_max, basis size)].
ErrorTable error_table(const rom::ReducedModel& reduced, const fom::AffineModel& model, const SolvedSet& test,
                       int n_min, int n_max, int threads);

/// Draws and solves the test set, then tabulates errors. Throws
/// std::invalid_argument if the model was built on a different mesh.
ErrorTable run_error_study(const rom::ReducedModel& reduced, const fom::AffineModel& model, const StudyConfig& config,
                           int threads);

/// Metadata block shared by offline manifests and error tables.
nlohmann::json config_metadata(const StudyConfig& config);

/// <base>/<UTC timestamp>-<config hash>; created on demand.
std::filesystem::path make_run_directory(const std::filesystem::path& base, const StudyConfig& config);

}  // namespace wrom::harness
