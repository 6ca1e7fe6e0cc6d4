#pragma once

// Independent reference computations used by the unit and acceptance suites.
// Nothing here calls into the code paths these values check.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "wrom/quadrature.hpp"

namespace oracle {

/// log Gamma via the Lanczos series (g = 7, 9 terms), with reflection below 1/2.
inline double lanczos_log_gamma(double x) {
  static const double p[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double pi = 3.14159265358979323846;
  if (x < 0.5) return std::log(pi / std::abs(std::sin(pi * x))) - lanczos_log_gamma(1.0 - x);
  x -= 1.0;
  double a = p[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += p[i] / (x + i);
  return 0.5 * std::log(2 * pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

inline double lanczos_log_beta(double a, double b) {
  return lanczos_log_gamma(a) + lanczos_log_gamma(b) - lanczos_log_gamma(a + b);
}

/// int_{-1}^{1} ((1+x)/2)^k (1-x)^a (1+x)^b dx = 2^(a+b+1) B(b+k+1, a+1).
inline double shifted_jacobi_moment(int k, double a, double b) {
  return std::exp((a + b + 1) * std::log(2.0) + std::lgamma(b + k + 1) + std::lgamma(a + 1) -
                  std::lgamma(a + b + k + 2));
}

/// Signed univariate rule of the difference operator Delta_i = U_i - U_{i-1}.
struct SignedRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline SignedRule difference_rule(const wrom::quadrature::RuleFamily& family, int i) {
  SignedRule d;
  const auto add = [&](int n, double sign) {
    const auto r = wrom::quadrature::make_rule<double>(family, n);
    for (int k = 0; k < n; ++k) {
      d.nodes.push_back(r.nodes[k]);
      d.weights.push_back(sign * r.weights[k]);
    }
  };
  add(i, 1.0);
  if (i > 1) add(i - 1, -1.0);
  return d;
}

/// Sum over alpha >= 1, |alpha|_1 <= k of the nested difference products
/// applied to f, evaluated dimension by dimension.
inline double smolyak_by_differences(int d, int k, const wrom::quadrature::RuleFamily& family,
                                     const std::function<double(const Eigen::VectorXd&)>& f) {
  double total = 0.0;
  std::vector<int> alpha(d, 1);
  Eigen::VectorXd point(d);
  std::function<double(int, double)> nested = [&](int j, double weight) -> double {
    if (j == d) return weight * f(point);
    const SignedRule rule = difference_rule(family, alpha[j]);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      point[j] = rule.nodes[i];
      s += nested(j + 1, weight * rule.weights[i]);
    }
    return s;
  };
  std::function<void(int, int)> enumerate = [&](int j, int budget) {
    if (j == d) {
      total += nested(0, 1.0);
      return;
    }
    for (int a = 1; a <= budget - (d - j - 1); ++a) {
      alpha[j] = a;
      enumerate(j + 1, budget - a);
    }
  };
  enumerate(0, k);
  return total;
}

}  // namespace oracle
