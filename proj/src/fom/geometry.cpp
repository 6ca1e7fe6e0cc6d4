#include "wrom/fom/geometry.hpp"

#include <stdexcept>

namespace wrom::fom {

FlowParameter FlowParameter::from_vector(const Eigen::VectorXd& y) {
  if (y.size() != 5) throw std::invalid_argument("FlowParameter: expected (L1, h1, L2, h2, v_max)");
  FlowParameter p;
  p.L1 = y[0];
  p.h1 = y[1];
  p.L2 = y[2];
  p.h2 = y[3];
  p.vmax = y[4];
  return p;
}

Eigen::VectorXd FlowParameter::to_vector() const {
  Eigen::VectorXd y(5);
  y << L1, h1, L2, h2, vmax;
  return y;
}

namespace geometry {

int subdomain_of(const Eigen::Vector2d& xhat) {
  const int col = xhat.x() < kInterfaceX ? 0 : 1;
  const int row = xhat.y() < kInterfaceY ? 0 : 1;
  return col + 2 * row;
}

Eigen::Vector2d scale(const FlowParameter& y, int r) {
  const int col = r % 2;
  const int row = r / 2;
  return {col == 0 ? y.L1 : y.L2, (row == 0 ? y.h1 : y.h2) / kInterfaceY};
}

Eigen::Matrix2d pullback_matrix(const FlowParameter& y, int r) {
  const Eigen::Vector2d s = scale(y, r);
  return Eigen::Vector2d(1.0 / s.x(), 1.0 / s.y()).asDiagonal();
}

Eigen::Vector2d pullback_shift(const FlowParameter& y, int r) {
  // physical x = s (x_hat - x0_hat) + x0, so x_hat = x / s + (x0_hat - x0 / s)
  const int col = r % 2;
  const int row = r / 2;
  const Eigen::Vector2d s = scale(y, r);
  const Eigen::Vector2d ref_origin(col == 0 ? 0.0 : kInterfaceX, row == 0 ? 0.0 : kInterfaceY);
  const Eigen::Vector2d phys_origin(col == 0 ? 0.0 : y.L1, row == 0 ? 0.0 : y.h1);
  return ref_origin - phys_origin.cwiseQuotient(s);
}

Eigen::Vector2d to_physical(const FlowParameter& y, const Eigen::Vector2d& xhat) {
  const double x = xhat.x() <= kInterfaceX ? y.L1 * xhat.x() : y.L1 + y.L2 * (xhat.x() - kInterfaceX);
  const double v = xhat.y() <= kInterfaceY ? y.h1 / kInterfaceY * xhat.y()
                                           : y.h1 + y.h2 / kInterfaceY * (xhat.y() - kInterfaceY);
  return {x, v};
}

}  // namespace geometry

}  // namespace wrom::fom
