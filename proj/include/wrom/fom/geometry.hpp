#pragma once

#include <Eigen/Dense>

#include <array>

namespace wrom::fom {

/// Physical parameter y = (L1, h1, L2, h2, v_max); the viscosity is carried
/// along but fixed to 1 in every shipped study.
struct FlowParameter {
  double L1 = 1.0;
  double h1 = 1.5;
  double L2 = 1.0;
  double h2 = 1.5;
  double vmax = 1.0;
  double nu = 1.0;

  /// The parameter whose subdomain maps are all the identity.
  static FlowParameter reference() { return {}; }
  static FlowParameter from_vector(const Eigen::VectorXd& y);
  Eigen::VectorXd to_vector() const;
};

// Reference domain (0,2) x (0,3), cut at x = 1 and y = 1.5 into four
// rectangles numbered r = column + 2 * row.
inline constexpr int kSubdomains = 4;
inline constexpr double kReferenceWidth = 2.0;
inline constexpr double kReferenceHeight = 3.0;
inline constexpr double kInterfaceX = 1.0;
inline constexpr double kInterfaceY = 1.5;

namespace geometry {

int subdomain_of(const Eigen::Vector2d& xhat);

/// Diagonal of the reference-to-physical Jacobian on subdomain r:
/// (column width, row height / 1.5).
Eigen::Vector2d scale(const FlowParameter& y, int r);

/// Physical-to-reference map x_hat = G x + g on subdomain r.
Eigen::Matrix2d pullback_matrix(const FlowParameter& y, int r);
Eigen::Vector2d pullback_shift(const FlowParameter& y, int r);

/// Reference-to-physical map, continuous across the interfaces.
Eigen::Vector2d to_physical(const FlowParameter& y, const Eigen::Vector2d& xhat);

}  // namespace geometry

}  // namespace wrom::fom
