#include "dynmass/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/QR>

namespace dynmass {

Eigen::VectorXd unwrap(const Eigen::VectorXd& phases) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Eigen::VectorXd out = phases;
  double offset = 0.0;
  for (Eigen::Index k = 1; k < phases.size(); ++k) {
    const double jump = phases(k) - phases(k - 1);
    offset -= two_pi * std::round(jump / two_pi);
    out(k) = phases(k) + offset;
  }
  return out;
}

LineFit fit_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching samples");
  Eigen::MatrixXd design(x.size(), 2);
  design.col(0) = x;
  design.col(1).setOnes();
  const Eigen::Vector2d coef = design.householderQr().solve(y);
  return {coef(0), coef(1)};
}

double log_log_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return fit_line(x.array().log().matrix(), y.array().abs().log().matrix()).slope;
}

}  // namespace dynmass
