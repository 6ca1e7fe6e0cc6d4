#include "wrom/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wrom/errors.hpp"

namespace wrom::probability {

namespace {

constexpr int kMaxQuantileIterations = 200;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 100000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalFailure("incomplete beta: continued fraction did not converge");
}

// I_x(a, b) with x and 1 - x supplied separately so that both tails keep
// their relative accuracy.
double lower_tail(double a, double b, double x, double one_minus_x) {
  if (x <= 0.0) return 0.0;
  if (one_minus_x <= 0.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log(one_minus_x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, one_minus_x) / b;
}

// Solves I_x(a, b) = u for x, working in t = log x so that quantiles far in
// the lower tail (x ~ 1e-50 for U-shaped laws) converge as fast as central ones.
double solve_lower(double a, double b, double u) {
  const double lb = log_beta(a, b);
  const double log_u = std::log(u);
  double t_lo = std::log(std::numeric_limits<double>::denorm_min());
  double t_hi = 0.0;

  // I_x ~ x^a / (a B) for small x
  double t = (log_u + std::log(a) + lb) / a;
  if (!(t < 0.0) || !std::isfinite(t)) t = std::log(a / (a + b));
  t = std::clamp(t, t_lo, -1e-300);

  double last_residual = 0.0;
  for (int it = 0; it < kMaxQuantileIterations; ++it) {
    const double x = std::exp(t);
    const double cdf = lower_tail(a, b, x, -std::expm1(t));
    if (cdf <= 0.0) {
      t_lo = t;
      t = 0.5 * (t_lo + t_hi);
      continue;
    }
    const double residual = std::log(cdf) - log_u;
    last_residual = residual;
    if (std::abs(residual) < 1e-15) return x;
    if (residual > 0.0) t_hi = t; else t_lo = t;
    // d log I / dt = x * pdf(x) / I
    const double log_dens = a * t + (b - 1.0) * std::log1p(-x) - lb;
    const double slope = std::exp(log_dens) / cdf;
    double next = t - residual / slope;
    if (!(next > t_lo && next < t_hi) || !std::isfinite(next)) next = 0.5 * (t_lo + t_hi);
    if (std::abs(next - t) <= 1e-16 * std::max(1.0, std::abs(t))) return std::exp(next);
    t = next;
  }
  std::ostringstream msg;
  msg << "beta_inverse_cdf: no convergence after " << kMaxQuantileIterations
      << " iterations (u=" << u << ", alpha=" << a << ", beta=" << b
      << ", last log-residual=" << last_residual << ")";
  throw NumericalFailure(msg.str());
}

}  // namespace

BetaParams::BetaParams(double a, double b) : alpha(a), beta(b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("BetaParams: shapes must be positive");
}

double BetaParams::log_beta_function() const { return log_beta(alpha, beta); }

double beta_pdf(double x, const BetaParams& p) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("beta_pdf: x outside [0, 1]");
  const double lb = p.log_beta_function();
  if (x == 0.0 || x == 1.0) {
    const double exponent = x == 0.0 ? p.alpha : p.beta;
    if (exponent < 1.0) throw std::invalid_argument("beta_pdf: density unbounded at this endpoint");
    if (exponent > 1.0) return 0.0;
    return std::exp(-lb);  // (1 - 0)^(other - 1) = 1
  }
  return std::exp((p.alpha - 1.0) * std::log(x) + (p.beta - 1.0) * std::log1p(-x) - lb);
}

double beta_cdf(double x, const BetaParams& p) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return lower_tail(p.alpha, p.beta, x, 1.0 - x);
}

double beta_ccdf(double x, const BetaParams& p) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return lower_tail(p.beta, p.alpha, 1.0 - x, x);
}

Quantile beta_quantile(double u, const BetaParams& p) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("beta_inverse_cdf: u outside (0, 1)");
  if (u <= 0.5) {
    const double x = solve_lower(p.alpha, p.beta, u);
    return {x, 1.0 - x};
  }
  const double y = solve_lower(p.beta, p.alpha, 1.0 - u);
  return {1.0 - y, y};
}

double beta_inverse_cdf(double u, const BetaParams& p) { return beta_quantile(u, p).x; }

// ---------------------------------------------------------------------------

ParameterBox::ParameterBox(std::vector<Range> ranges, std::vector<BetaParams> shapes)
    : ranges_(std::move(ranges)), shapes_(std::move(shapes)) {
  if (ranges_.empty()) throw std::invalid_argument("ParameterBox: no dimensions");
  if (ranges_.size() != shapes_.size()) throw std::invalid_argument("ParameterBox: ranges/shapes size mismatch");
  for (const auto& r : ranges_) {
    if (!(r.lo < r.hi)) throw std::invalid_argument("ParameterBox: every range needs lo < hi");
  }
}

std::vector<Range> ParameterBox::flow_ranges() {
  return {{0.2, 1.9}, {0.2, 2.0}, {0.2, 1.9}, {0.2, 2.0}, {0.2, 20.0}};
}

ParameterBox ParameterBox::flow_default(const BetaParams& shape) {
  return ParameterBox(flow_ranges(), std::vector<BetaParams>(5, shape));
}

double ParameterBox::to_unit(int j, double value) const {
  return (value - ranges_[j].lo) / ranges_[j].width();
}

double ParameterBox::from_unit(int j, double x) const {
  return std::clamp(ranges_[j].lo + ranges_[j].width() * x, ranges_[j].lo, ranges_[j].hi);
}

bool ParameterBox::contains(const Eigen::VectorXd& y) const {
  if (y.size() != dim()) return false;
  for (int j = 0; j < dim(); ++j) {
    if (!(y[j] >= ranges_[j].lo && y[j] <= ranges_[j].hi)) return false;
  }
  return true;
}

double ParameterBox::density(const Eigen::VectorXd& y, double clamp) const {
  if (y.size() != dim()) throw std::invalid_argument("ParameterBox::density: dimension mismatch");
  double rho = 1.0;
  for (int j = 0; j < dim(); ++j) {
    const double x = std::clamp(to_unit(j, y[j]), clamp, 1.0 - clamp);
    rho *= beta_pdf(x, shapes_[j]) / ranges_[j].width();
  }
  return rho;
}

std::string to_string(SamplingStrategy s) {
  switch (s) {
    case SamplingStrategy::MonteCarlo: return "MonteCarlo";
    case SamplingStrategy::TensorGaussJacobi: return "TensorGaussJacobi";
    case SamplingStrategy::SmolyakGaussJacobi: return "SmolyakGaussJacobi";
  }
  return "unknown";
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

WeightedSampleSet sample_with_shapes(const ParameterBox& box, const std::vector<BetaParams>& shapes,
                                     std::uint64_t seed, int count) {
  if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
  if (static_cast<int>(shapes.size()) != box.dim()) throw std::invalid_argument("sample: shape count mismatch");
  WeightedSampleSet set;
  set.strategy = SamplingStrategy::MonteCarlo;
  set.seed = seed;
  set.points.resize(box.dim(), count);
  set.weights = Eigen::VectorXd::Constant(count, 1.0 / count);
  UniformStream stream(seed);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < box.dim(); ++j) {
      set.points(j, i) = box.from_unit(j, beta_inverse_cdf(stream.next(), shapes[j]));
    }
  }
  return set;
}

WeightedSampleSet sample(const ParameterBox& box, std::uint64_t seed, int count) {
  return sample_with_shapes(box, box.shapes(), seed, count);
}

WeightedSampleSet quadrature_training_set(const ParameterBox& box, const quadrature::Grid<double>& grid) {
  if (grid.dim() != box.dim()) throw std::invalid_argument("quadrature_training_set: dimension mismatch");
  if (static_cast<int>(grid.families.size()) != box.dim()) {
    throw std::invalid_argument("quadrature_training_set: grid carries no per-dimension families");
  }
  double scale = 1.0;
  for (int j = 0; j < box.dim(); ++j) {
    const auto& f = grid.families[j];
    const auto& s = box.shapes()[j];
    const bool legendre_ok = f.kind == quadrature::Family::GaussLegendre && s.alpha == 1.0 && s.beta == 1.0;
    const bool jacobi_ok = f.kind == quadrature::Family::GaussJacobi && std::abs(f.a_exp - (s.beta - 1.0)) < 1e-12 &&
                           std::abs(f.b_exp - (s.alpha - 1.0)) < 1e-12;
    if (!legendre_ok && !jacobi_ok) {
      std::ostringstream msg;
      msg << "quadrature_training_set: dimension " << j << " has rule " << f << " but Beta(" << s.alpha << ","
          << s.beta << ") needs GaussJacobi(" << s.beta - 1.0 << "," << s.alpha - 1.0 << ")";
      throw std::invalid_argument(msg.str());
    }
    // mass of the Jacobi weight on [-1,1] is 2^(a+b-1) B(a,b)
    scale *= std::exp(-(s.alpha + s.beta - 1.0) * std::log(2.0) - s.log_beta_function());
  }
  WeightedSampleSet set;
  set.strategy = grid.provenance == quadrature::Provenance::Smolyak ? SamplingStrategy::SmolyakGaussJacobi
                                                                     : SamplingStrategy::TensorGaussJacobi;
  set.points.resize(box.dim(), grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    for (int j = 0; j < box.dim(); ++j) {
      set.points(j, i) = box.from_unit(j, 0.5 * (1.0 + grid.points(j, i)));
    }
  }
  set.weights = grid.weights * scale;
  return set;
}

quadrature::Grid<double> tensor_grid_for(const ParameterBox& box, int order) {
  std::vector<quadrature::UnivariateRule<double>> rules;
  for (const auto& s : box.shapes()) rules.push_back(quadrature::make_rule<double>(s.jacobi_family(), order));
  return quadrature::tensor_grid(rules);
}

quadrature::Grid<double> smolyak_grid_for(const ParameterBox& box, int level) {
  std::vector<quadrature::RuleFamily> families;
  for (const auto& s : box.shapes()) families.push_back(s.jacobi_family());
  return quadrature::smolyak_grid<double>(level, families);
}

int smolyak_level_for_size(const ParameterBox& box, int target) {
  for (int k = box.dim(); k < box.dim() + 40; ++k) {
    if (smolyak_grid_for(box, k).size() >= target) return k;
  }
  throw std::invalid_argument("smolyak_level_for_size: target not reachable");
}

}  // namespace wrom::probability
