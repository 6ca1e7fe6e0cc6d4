#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "wrom/fom/solver.hpp"
#include "wrom/probability.hpp"
#include "wrom/rom/estimator.hpp"
#include "wrom/rom/reduced_basis.hpp"

namespace wrom::rom {

struct GreedyOptions {
  double tolerance = 0.0;
  int max_size = 20;
  /// Start from a seeded random training point instead of the N = 0 argmax.
  bool random_start = false;
  std::uint64_t seed = 0;
  fom::FlowParameter supremizer_parameter = fom::FlowParameter::reference();
};

/// Weighted greedy selection over a training set. `truths`, when given, holds
/// one truth solution per training point and is required to avoid repeated
/// solves in ExactError mode.
ReducedBasis weighted_greedy(const fom::AffineModel& model, const probability::WeightedSampleSet& training,
                             Estimator& estimator, const GreedyOptions& options,
                             const std::vector<fom::TruthSolution>* truths = nullptr);

}  // namespace wrom::rom
