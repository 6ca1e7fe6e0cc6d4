#pragma once

// Beta-distributed parameter model: densities, inverse-CDF sampling, and the
// bridge from reference quadrature grids to weighted training sets on the
// physical parameter box.

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wrom/quadrature.hpp"

namespace wrom::probability {

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  BetaParams() = default;
  BetaParams(double a, double b);

  /// log B(alpha, beta)
  double log_beta_function() const;
  /// Gauss-Jacobi family whose weight matches this density under x = (1+t)/2.
  quadrature::RuleFamily jacobi_family() const { return quadrature::RuleFamily::jacobi(beta - 1, alpha - 1); }
};

/// Density on [0, 1]. Throws for x outside [0, 1], and at an endpoint where
/// the density is unbounded.
double beta_pdf(double x, const BetaParams& p);
/// Regularized incomplete beta I_x(alpha, beta).
double beta_cdf(double x, const BetaParams& p);
/// 1 - I_x(alpha, beta), evaluated without cancellation.
double beta_ccdf(double x, const BetaParams& p);

/// Quantile split into (x, 1 - x), each computed accurately on its own side.
struct Quantile {
  double x;
  double complement;
};
Quantile beta_quantile(double u, const BetaParams& p);
/// x with I_x(alpha, beta) = u; safeguarded Newton, at most 200 iterations.
double beta_inverse_cdf(double u, const BetaParams& p);

struct Range {
  double lo;
  double hi;
  double width() const { return hi - lo; }
};

/// Independent Beta laws rescaled onto a box of ranges.
class ParameterBox {
 public:
  ParameterBox(std::vector<Range> ranges, std::vector<BetaParams> shapes);

  /// The five-parameter flow box (L1, h1, L2, h2, v_max) with a common shape.
  static ParameterBox flow_default(const BetaParams& shape);
  static std::vector<Range> flow_ranges();

  int dim() const { return static_cast<int>(ranges_.size()); }
  const std::vector<Range>& ranges() const { return ranges_; }
  const std::vector<BetaParams>& shapes() const { return shapes_; }

  /// Reference [0,1] coordinate of a physical value in dimension j.
  double to_unit(int j, double value) const;
  double from_unit(int j, double x) const;
  bool contains(const Eigen::VectorXd& y) const;

  /// Joint density over the physical box. `clamp` moves each unit coordinate
  /// at least this far inside [0, 1] before evaluation.
  double density(const Eigen::VectorXd& y, double clamp = 0.0) const;

 private:
  std::vector<Range> ranges_;
  std::vector<BetaParams> shapes_;
};

enum class SamplingStrategy { MonteCarlo, TensorGaussJacobi, SmolyakGaussJacobi };

std::string to_string(SamplingStrategy s);

struct WeightedSampleSet {
  Eigen::MatrixXd points;   // dim x M
  Eigen::VectorXd weights;  // M
  SamplingStrategy strategy = SamplingStrategy::MonteCarlo;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return points.cols(); }
  Eigen::VectorXd point(Eigen::Index i) const { return points.col(i); }
};

/// Deterministic uniform stream on (0, 1) built on a 64-bit Mersenne twister.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() {
    // 53 random bits, centred in their cell so 0 and 1 never occur
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// Derived seed for an independent stream (splitmix64 of seed and stream id).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

/// M i.i.d. draws by inverse CDF, every weight 1/M.
WeightedSampleSet sample(const ParameterBox& box, std::uint64_t seed, int count);

/// Draws with the same uniform stream as `sample` but pushed through a
/// different law; used to pair baselines with weighted runs.
WeightedSampleSet sample_with_shapes(const ParameterBox& box, const std::vector<BetaParams>& shapes,
                                     std::uint64_t seed, int count);

/// Maps a Gauss-Jacobi grid on [-1,1]^d onto the box and rescales the
/// weights into probability masses. The grid's families must match the box's
/// Beta shapes (a_exp = beta - 1, b_exp = alpha - 1).
WeightedSampleSet quadrature_training_set(const ParameterBox& box, const quadrature::Grid<double>& grid);

/// Gauss-Jacobi tensor grid of the given order per dimension.
quadrature::Grid<double> tensor_grid_for(const ParameterBox& box, int order);
/// Gauss-Jacobi Smolyak grid of level k.
quadrature::Grid<double> smolyak_grid_for(const ParameterBox& box, int level);
/// Smallest Smolyak level (>= dim) with at least `target` nodes.
int smolyak_level_for_size(const ParameterBox& box, int target);

}  // namespace wrom::probability
