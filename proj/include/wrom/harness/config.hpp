#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wrom/fom/affine_model.hpp"
#include "wrom/probability.hpp"
#include "wrom/rom/estimator.hpp"

namespace wrom::harness {

enum class Method { StandardPOD, WeightedPodMonteCarlo, WeightedPodTensor, WeightedPodSmolyak, StandardGreedy, WeightedGreedy };

std::string to_string(Method m);
Method method_from_string(const std::string& s);
bool is_greedy(Method m);
bool is_standard(Method m);

/// How the standard (unweighted) baselines draw their training parameters.
/// Uniform pushes the shared uniform stream through Beta(1,1); Beta uses the
/// study's own law, which makes the standard POD coincide with the Monte
/// Carlo weighted POD.
enum class BaselineSampling { Uniform, Beta };

struct StudyConfig {
  std::string name;
  fom::Equation equation = fom::Equation::Stokes;
  Method method = Method::WeightedPodMonteCarlo;
  std::vector<probability::Range> ranges = probability::ParameterBox::flow_ranges();
  std::vector<probability::BetaParams> shapes = std::vector<probability::BetaParams>(5);
  int training_size = 240;
  int n_min = 1;
  int n_max = 20;
  int test_size = 100;
  std::uint64_t training_seed = 1;
  std::uint64_t test_seed = 2;
  int refinement = 4;
  BaselineSampling baseline_sampling = BaselineSampling::Uniform;
  rom::EstimatorMode greedy_estimator = rom::EstimatorMode::ExactError;
  rom::WeightMode greedy_weight = rom::WeightMode::SqrtDensity;
  double greedy_tolerance = 0.0;
  Eigen::Vector2d body_force = Eigen::Vector2d::Zero();

  probability::ParameterBox box() const { return probability::ParameterBox(ranges, shapes); }
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  /// Canonical key = value rendering; equal configs render identically.
  std::string canonical() const;
  /// 16 hex digits of an FNV-1a hash of canonical().
  std::string hash() const;
};

/// Parses the INI-style study file; the keys are listed in README.md.
StudyConfig parse_config(std::istream& in);
StudyConfig load_config(const std::filesystem::path& path);

}  // namespace wrom::harness
