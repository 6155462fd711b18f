#pragma once

#include <Eigen/Core>

namespace dynmass {

/// Remove 2 pi jumps from a sequence of principal-value phases.
Eigen::VectorXd unwrap(const Eigen::VectorXd& phases);

struct LineFit {
  double slope;
  double intercept;
};

/// Least-squares y = slope * x + intercept (Householder QR on the design matrix).
LineFit fit_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Slope of log|y| against log x.
double log_log_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace dynmass
