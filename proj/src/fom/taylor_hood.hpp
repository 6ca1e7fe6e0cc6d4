#pragma once

// P2 / P1 element kernels on straight triangles with a 7-point degree-5 rule,
// which integrates every product assembled here (up to the convective
// P2 x grad P2 x P2 term) exactly.

#include <Eigen/Dense>

#include <array>
#include <cmath>

namespace wrom::fom::detail {

struct QuadraturePoint {
  double xi;
  double eta;
  double weight;  // reference triangle has area 1/2
};

inline const std::array<QuadraturePoint, 7>& triangle_rule() {
  static const std::array<QuadraturePoint, 7> rule = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = 1.0 - 2.0 * a1;
    const double a2 = (6.0 + s15) / 21.0, b2 = 1.0 - 2.0 * a2;
    const double w0 = 9.0 / 40.0;
    const double w1 = (155.0 - s15) / 1200.0;
    const double w2 = (155.0 + s15) / 1200.0;
    return std::array<QuadraturePoint, 7>{{{1.0 / 3.0, 1.0 / 3.0, 0.5 * w0},
                                           {a1, a1, 0.5 * w1},
                                           {b1, a1, 0.5 * w1},
                                           {a1, b1, 0.5 * w1},
                                           {a2, a2, 0.5 * w2},
                                           {b2, a2, 0.5 * w2},
                                           {a2, b2, 0.5 * w2}}};
  }();
  return rule;
}

/// Quadratic shape values (6) and reference gradients (2 x 6) at (xi, eta).
/// Local order: vertices 0,1,2 then edges 01, 12, 20.
inline void p2_shape(double xi, double eta, Eigen::Matrix<double, 6, 1>& value,
                     Eigen::Matrix<double, 2, 6>& grad) {
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  value << l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1), 4 * l0 * l1, 4 * l1 * l2, 4 * l2 * l0;
  // d/dxi and d/deta of each barycentric: l0 -> (-1,-1), l1 -> (1,0), l2 -> (0,1)
  const double d0 = 4 * l0 - 1, d1 = 4 * l1 - 1, d2 = 4 * l2 - 1;
  grad.col(0) << -d0, -d0;
  grad.col(1) << d1, 0;
  grad.col(2) << 0, d2;
  grad.col(3) << 4 * (l0 - l1), -4 * l1;
  grad.col(4) << 4 * l2, 4 * l1;
  grad.col(5) << -4 * l2, 4 * (l0 - l2);
}

inline Eigen::Vector3d p1_shape(double xi, double eta) { return {1.0 - xi - eta, xi, eta}; }

/// Tabulated shape data on one physical triangle.
struct ElementData {
  double area_factor = 0;  // |det J|
  std::array<double, 7> weight{};
  std::array<Eigen::Matrix<double, 6, 1>, 7> phi;
  std::array<Eigen::Matrix<double, 2, 6>, 7> dphi;  // physical gradients
  std::array<Eigen::Vector3d, 7> psi;

  void compute(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, const Eigen::Vector2d& p2) {
    Eigen::Matrix2d jac;
    jac.col(0) = p1 - p0;
    jac.col(1) = p2 - p0;
    area_factor = std::abs(jac.determinant());
    const Eigen::Matrix2d inv_t = jac.inverse().transpose();
    const auto& rule = triangle_rule();
    for (int q = 0; q < 7; ++q) {
      Eigen::Matrix<double, 2, 6> ref_grad;
      p2_shape(rule[q].xi, rule[q].eta, phi[q], ref_grad);
      dphi[q] = inv_t * ref_grad;
      psi[q] = p1_shape(rule[q].xi, rule[q].eta);
      weight[q] = rule[q].weight * area_factor;
    }
  }
};

}  // namespace wrom::fom::detail
