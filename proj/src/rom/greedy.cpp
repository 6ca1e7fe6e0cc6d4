#include "wrom/rom/greedy.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "wrom/errors.hpp"
#include "wrom/rom/reduced_model.hpp"

namespace wrom::rom {

namespace {

std::string describe(const Eigen::VectorXd& y) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index j = 0; j < y.size(); ++j) os << (j ? ", " : "") << y[j];
  os << ")";
  return os.str();
}

}  // namespace

ReducedBasis weighted_greedy(const fom::AffineModel& model, const probability::WeightedSampleSet& training,
                             Estimator& estimator, const GreedyOptions& options,
                             const std::vector<fom::TruthSolution>* truths) {
  const Eigen::Index m = training.size();
  if (m < 1) throw std::invalid_argument("weighted_greedy: empty training set");
  if (options.max_size < 1) throw std::invalid_argument("weighted_greedy: N_max must be at least 1");
  if (truths && static_cast<Eigen::Index>(truths->size()) != m) {
    throw std::invalid_argument("weighted_greedy: one truth solution per training point required");
  }
  std::vector<fom::TruthSolution> solved;
  if (!truths && estimator.mode() == EstimatorMode::ExactError) {
    solved.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
      solved.push_back(fom::solve(model, fom::FlowParameter::from_vector(training.point(i)), model.equation()));
    }
    truths = &solved;
  }

  BasisBuilder builder(model, options.supremizer_parameter);
  std::vector<bool> selected(static_cast<std::size_t>(m), false);

  const auto sweep = [&]() {
    const ReducedBasis& basis = builder.basis();
    estimator.prepare(basis);
    const ReducedModel reduced(model, basis);
    const int n = basis.size();
    Eigen::VectorXd values(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::VectorXd y = training.point(i);
      try {
        const ReducedSolution s = reduced.online_solve(fom::FlowParameter::from_vector(y), n);
        values[i] = estimator.estimate(reduced, s, y, truths ? &(*truths)[static_cast<std::size_t>(i)] : nullptr);
      } catch (const std::exception& e) {
        throw NumericalFailure("weighted_greedy: estimator failed at training point " + describe(y) + ": " + e.what());
      }
    }
    return values;
  };

  const auto add = [&](Eigen::Index i, double value) {
    const Eigen::VectorXd y = training.point(i);
    fom::TruthSolution local;
    const fom::TruthSolution* truth = truths ? &(*truths)[static_cast<std::size_t>(i)] : nullptr;
    if (!truth) {
      local = fom::solve(model, fom::FlowParameter::from_vector(y), model.equation());
      truth = &local;
    }
    const Eigen::VectorXd u = truth->homogeneous_velocity(model);
    builder.add(&u, &truth->pressure);
    selected[static_cast<std::size_t>(i)] = true;
    builder.basis().greedy.selected.push_back(y);
    builder.basis().greedy.selected_estimator.push_back(value);
  };

  GreedyRecord& record = builder.basis().greedy;
  record.random_start = options.random_start;
  Eigen::VectorXd values = sweep();
  Eigen::Index next = 0;
  record.max_estimator.push_back(values.maxCoeff(&next));
  if (options.random_start) {
    std::mt19937_64 rng(options.seed);
    next = std::uniform_int_distribution<Eigen::Index>(0, m - 1)(rng);
  }
  add(next, values[next]);

  while (true) {
    values = sweep();
    const double top = values.maxCoeff(&next);
    builder.basis().greedy.max_estimator.push_back(top);
    if (top <= options.tolerance || builder.basis().size() >= options.max_size) break;
    if (selected[static_cast<std::size_t>(next)]) break;
    add(next, top);
  }
  return builder.basis();
}

}  // namespace wrom::rom
