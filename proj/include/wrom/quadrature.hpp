#pragma once

// Univariate Gauss rules and their tensor-product / Smolyak compositions.
//
// Everything here is templated on the scalar type and header-only. Nodes live
// on the reference interval [-1, 1]; mapping onto physical parameter ranges is
// the job of the probability module.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wrom/errors.hpp"

namespace wrom::quadrature {

enum class Family { GaussLegendre, GaussJacobi };

/// Weight-function description: GaussLegendre ignores the exponents,
/// GaussJacobi integrates against (1 - x)^a_exp (1 + x)^b_exp.
struct RuleFamily {
  Family kind = Family::GaussLegendre;
  double a_exp = 0.0;
  double b_exp = 0.0;

  static RuleFamily legendre() { return {}; }
  static RuleFamily jacobi(double a_exp, double b_exp) {
    return {Family::GaussJacobi, a_exp, b_exp};
  }

  bool operator==(const RuleFamily& other) const {
    if (kind != other.kind) return false;
    if (kind == Family::GaussLegendre) return true;
    return a_exp == other.a_exp && b_exp == other.b_exp;
  }
};

inline std::ostream& operator<<(std::ostream& os, const RuleFamily& f) {
  if (f.kind == Family::GaussLegendre) return os << "GaussLegendre";
  return os << "GaussJacobi(" << f.a_exp << "," << f.b_exp << ")";
}

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct UnivariateRule {
  Vector<Scalar> nodes;    // strictly increasing
  Vector<Scalar> weights;  // strictly positive
  RuleFamily family;
  Scalar lo = Scalar(-1);
  Scalar hi = Scalar(1);

  Eigen::Index order() const { return nodes.size(); }
};

/// Integral of the family's weight function over [-1, 1].
inline double total_mass(const RuleFamily& family) {
  if (family.kind == Family::GaussLegendre) return 2.0;
  const double a = family.a_exp;
  const double b = family.b_exp;
  const double log_beta = std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2);
  return std::exp((a + b + 1) * std::log(2.0) + log_beta);
}

namespace detail {

// Eigen-decomposition of a symmetric tridiagonal matrix by the implicit-shift
// QL algorithm. On exit `diag` holds eigenvalues and `first` the first
// component of each normalized eigenvector, which is all Golub-Welsch needs.
template <typename Scalar>
void tridiagonal_ql(std::vector<Scalar>& diag, std::vector<Scalar> off,
                    std::vector<Scalar>& first) {
  const int n = static_cast<int>(diag.size());
  first.assign(n, Scalar(0));
  if (n == 0) return;
  first[0] = Scalar(1);
  off.push_back(Scalar(0));  // off[i] couples i and i+1; off[n-1] = 0

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iterations = 0;
    for (;;) {
      int m = l;
      for (; m < n - 1; ++m) {
        const Scalar dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iterations > 60) {
        throw NumericalFailure("tridiagonal QL: no convergence after 60 sweeps");
      }
      Scalar g = (diag[l + 1] - diag[l]) / (Scalar(2) * off[l]);
      Scalar r = std::hypot(g, Scalar(1));
      g = diag[m] - diag[l] + off[l] / (g + (g >= 0 ? r : -r));
      Scalar s = 1, c = 1, p = 0;
      int i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        Scalar f = s * off[i];
        const Scalar b = c * off[i];
        r = std::hypot(f, g);
        off[i + 1] = r;
        if (r == Scalar(0)) {
          diag[i + 1] -= p;
          off[m] = 0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + Scalar(2) * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
        // rotate the first eigenvector row
        f = first[i + 1];
        first[i + 1] = s * first[i] + c * f;
        first[i] = c * first[i] - s * f;
      }
      if (underflow) continue;
      diag[l] -= p;
      off[l] = g;
      off[m] = 0;
    }
  }
}

// Recurrence coefficients of the monic orthogonal polynomials for the weight
// (1-x)^a (1+x)^b: diagonal alpha_k and squared off-diagonal beta_k.
template <typename Scalar>
void jacobi_recurrence(int n, Scalar a, Scalar b, std::vector<Scalar>& diag,
                       std::vector<Scalar>& off) {
  diag.assign(n, Scalar(0));
  off.assign(n > 0 ? n - 1 : 0, Scalar(0));
  const Scalar ab = a + b;
  diag[0] = (b - a) / (ab + 2);
  for (int k = 1; k < n; ++k) {
    const Scalar s = 2 * k + ab;
    diag[k] = (b * b - a * a) / (s * (s + 2));
  }
  for (int k = 1; k < n; ++k) {
    const Scalar s = 2 * k + ab;
    Scalar beta;
    if (k == 1) {
      beta = 4 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
    } else {
      beta = 4 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1) * (s - 1));
    }
    off[k - 1] = std::sqrt(beta);
  }
}

}  // namespace detail

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a_exp (1+x)^b_exp,
/// built with Golub-Welsch.
template <typename Scalar = double>
UnivariateRule<Scalar> gauss_jacobi(int n, double a_exp, double b_exp) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  if (!(a_exp > -1.0) || !(b_exp > -1.0)) {
    throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
  }
  std::vector<Scalar> diag, off, first;
  detail::jacobi_recurrence<Scalar>(n, Scalar(a_exp), Scalar(b_exp), diag, off);
  detail::tridiagonal_ql<Scalar>(diag, off, first);

  const RuleFamily family = RuleFamily::jacobi(a_exp, b_exp);
  const Scalar mass = Scalar(total_mass(family));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] < diag[j]; });

  UnivariateRule<Scalar> rule;
  rule.family = family;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = diag[order[i]];
    rule.weights[i] = mass * first[order[i]] * first[order[i]];
  }
  // exact symmetry when the weight is symmetric
  if (a_exp == b_exp) {
    for (int i = 0; i < n / 2; ++i) {
      const Scalar x = (rule.nodes[n - 1 - i] - rule.nodes[i]) / 2;
      const Scalar w = (rule.weights[n - 1 - i] + rule.weights[i]) / 2;
      rule.nodes[i] = -x;
      rule.nodes[n - 1 - i] = x;
      rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = Scalar(0);
  }
  return rule;
}

template <typename Scalar = double>
UnivariateRule<Scalar> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  auto rule = gauss_jacobi<Scalar>(n, 0.0, 0.0);
  rule.family = RuleFamily::legendre();
  return rule;
}

template <typename Scalar = double>
UnivariateRule<Scalar> make_rule(const RuleFamily& family, int n) {
  return family.kind == Family::GaussLegendre ? gauss_legendre<Scalar>(n)
                                              : gauss_jacobi<Scalar>(n, family.a_exp, family.b_exp);
}

/// Sum_i w_i f(x_i) for a univariate rule.
template <typename Scalar, typename F>
Scalar integrate(const UnivariateRule<Scalar>& rule, F&& f) {
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < rule.order(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

// ---------------------------------------------------------------------------
// Multidimensional grids

struct MultiIndex {
  std::vector<int> entries;

  int l1() const { return std::accumulate(entries.begin(), entries.end(), 0); }
  bool at_least_one() const {
    return std::all_of(entries.begin(), entries.end(), [](int a) { return a >= 1; });
  }
  std::size_t dim() const { return entries.size(); }
  bool operator<(const MultiIndex& o) const { return entries < o.entries; }
  bool operator==(const MultiIndex& o) const { return entries == o.entries; }
};

enum class Provenance { Tensor, Smolyak, MonteCarlo };

template <typename Scalar = double>
struct Grid {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix points;               // dim x size, one node per column
  Vector<Scalar> weights;      // signed
  std::vector<RuleFamily> families;  // one per dimension
  Provenance provenance = Provenance::Tensor;
  int level = 0;               // tensor order, Smolyak level, or MC count

  Eigen::Index dim() const { return points.rows(); }
  Eigen::Index size() const { return points.cols(); }
};

/// Q(f) = sum_i w_i f(y_i). `f` receives an Eigen column expression.
template <typename Scalar, typename F>
Scalar integrate(const Grid<Scalar>& grid, F&& f) {
  if (grid.size() == 0) throw std::invalid_argument("integrate: empty grid");
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    sum += grid.weights[i] * f(Vector<Scalar>(grid.points.col(i)));
  }
  return sum;
}

/// Full tensor product of the given univariate rules; weight of node
/// (i_1, ..., i_d) is the product of the univariate weights.
template <typename Scalar>
Grid<Scalar> tensor_grid(const std::vector<UnivariateRule<Scalar>>& rules) {
  if (rules.empty()) throw std::invalid_argument("tensor_grid: no rules given");
  Eigen::Index total = 1;
  for (const auto& r : rules) {
    if (r.order() == 0) throw std::invalid_argument("tensor_grid: empty univariate rule");
    total *= r.order();
  }
  const auto d = static_cast<Eigen::Index>(rules.size());
  Grid<Scalar> grid;
  grid.points.resize(d, total);
  grid.weights.resize(total);
  grid.provenance = Provenance::Tensor;
  grid.level = static_cast<int>(rules.front().order());
  for (const auto& r : rules) grid.families.push_back(r.family);

  std::vector<Eigen::Index> idx(d, 0);
  for (Eigen::Index p = 0; p < total; ++p) {
    Scalar w = 1;
    for (Eigen::Index j = 0; j < d; ++j) {
      grid.points(j, p) = rules[j].nodes[idx[j]];
      w *= rules[j].weights[idx[j]];
    }
    grid.weights[p] = w;
    // last dimension runs fastest
    for (Eigen::Index j = d - 1; j >= 0; --j) {
      if (++idx[j] < rules[j].order()) break;
      idx[j] = 0;
    }
  }
  return grid;
}

/// One tensor rule of the combination formula, with its integer coefficient.
struct CombinationTerm {
  std::vector<int> orders;
  int coefficient = 0;
};

/// Expands sum_{|alpha|_1 <= k, alpha >= 1} of the difference tensor products
/// into signed tensor rules: each alpha contributes (-1)^{|gamma|_1} U_{alpha-gamma}
/// for gamma in {0,1}^d with alpha - gamma >= 1. Terms with equal orders are
/// aggregated and zero coefficients dropped.
inline std::vector<CombinationTerm> smolyak_terms(int d, int k) {
  if (d < 1) throw std::invalid_argument("smolyak_terms: dimension must be >= 1");
  if (k < d) throw std::invalid_argument("smolyak_terms: level k must be >= d");
  std::map<std::vector<int>, int> coeff;

  std::vector<int> alpha(d, 1);
  // enumerate alpha >= 1 with |alpha|_1 <= k
  const auto enumerate = [&](auto&& self, int j, int budget) -> void {
    if (j == d) {
      for (unsigned mask = 0; mask < (1u << d); ++mask) {
        std::vector<int> orders(alpha);
        int sign = 1;
        bool valid = true;
        for (int i = 0; i < d; ++i) {
          if (mask & (1u << i)) {
            orders[i] -= 1;
            sign = -sign;
            if (orders[i] < 1) valid = false;
          }
        }
        if (valid) coeff[orders] += sign;
      }
      return;
    }
    for (int a = 1; a <= budget - (d - j - 1); ++a) {
      alpha[j] = a;
      self(self, j + 1, budget - a);
    }
  };
  enumerate(enumerate, 0, k);

  std::vector<CombinationTerm> terms;
  for (const auto& [orders, c] : coeff) {
    if (c != 0) terms.push_back({orders, c});
  }
  return terms;
}

/// Sparse grid of level k realized through the combination formula, with
/// coincident nodes merged and their signed weights summed. Node coincidence
/// is decided per coordinate with an absolute tolerance of 1e-12.
template <typename Scalar = double>
Grid<Scalar> smolyak_grid(int k, const std::vector<RuleFamily>& families) {
  const int d = static_cast<int>(families.size());
  const auto terms = smolyak_terms(d, k);
  const int max_order = k - d + 1;

  // Canonical univariate node ids per dimension: nodes from different orders
  // that agree to 1e-12 share one id.
  constexpr double kMergeTol = 1e-12;
  std::vector<std::vector<UnivariateRule<Scalar>>> rules(d);
  std::vector<std::vector<std::vector<int>>> node_id(d);  // [dim][order-1][i]
  std::vector<std::vector<Scalar>> canonical(d);
  for (int j = 0; j < d; ++j) {
    struct Entry { Scalar x; int order; int i; };
    std::vector<Entry> all;
    for (int n = 1; n <= max_order; ++n) {
      rules[j].push_back(make_rule<Scalar>(families[j], n));
      node_id[j].emplace_back(n, -1);
      for (int i = 0; i < n; ++i) all.push_back({rules[j].back().nodes[i], n, i});
    }
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.x < b.x; });
    for (std::size_t e = 0; e < all.size(); ++e) {
      if (e == 0 || std::abs(double(all[e].x - canonical[j].back())) > kMergeTol) {
        canonical[j].push_back(all[e].x);
      }
      node_id[j][all[e].order - 1][all[e].i] = static_cast<int>(canonical[j].size()) - 1;
    }
  }

  std::map<std::vector<int>, Scalar> merged;
  for (const auto& term : terms) {
    std::vector<int> idx(d, 0);
    for (;;) {
      std::vector<int> key(d);
      Scalar w = Scalar(term.coefficient);
      for (int j = 0; j < d; ++j) {
        const auto& r = rules[j][term.orders[j] - 1];
        key[j] = node_id[j][term.orders[j] - 1][idx[j]];
        w *= r.weights[idx[j]];
      }
      merged[key] += w;
      int j = d - 1;
      for (; j >= 0; --j) {
        if (++idx[j] < term.orders[j]) break;
        idx[j] = 0;
      }
      if (j < 0) break;
    }
  }

  Grid<Scalar> grid;
  grid.families = families;
  grid.provenance = Provenance::Smolyak;
  grid.level = k;
  grid.points.resize(d, static_cast<Eigen::Index>(merged.size()));
  grid.weights.resize(static_cast<Eigen::Index>(merged.size()));
  Eigen::Index p = 0;
  for (const auto& [key, w] : merged) {
    for (int j = 0; j < d; ++j) grid.points(j, p) = canonical[j][key[j]];
    grid.weights[p] = w;
    ++p;
  }
  return grid;
}

template <typename Scalar = double>
Grid<Scalar> smolyak_grid(int d, int k, const RuleFamily& family) {
  if (d < 1) throw std::invalid_argument("smolyak_grid: dimension must be >= 1");
  return smolyak_grid<Scalar>(k, std::vector<RuleFamily>(d, family));
}

/// Writes `w,y1,...,yd` rows, one per node, at full precision.
template <typename Scalar>
void write_csv(std::ostream& os, const Grid<Scalar>& grid) {
  os << "w";
  for (Eigen::Index j = 0; j < grid.dim(); ++j) os << ",y" << (j + 1);
  os << '\n';
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    os << grid.weights[i];
    for (Eigen::Index j = 0; j < grid.dim(); ++j) os << ',' << grid.points(j, i);
    os << '\n';
  }
  os.precision(old);
}

}  // namespace wrom::quadrature
