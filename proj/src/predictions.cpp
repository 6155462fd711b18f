#include "dynmass/predictions.hpp"

#include <cmath>

namespace dynmass::predict {

double loop_phase(double mass, double a, double w, double hbar) { return -mass * a * w / hbar; }

double relative_loop_phase(double m1, double m2, double a, double w, double hbar) {
  return (m2 - m1) * a * w / hbar;
}

double clock_shift(double v, double phi, double c) { return -v * v / (2.0 * c * c) + phi / (c * c); }

double trapezoid_proper_time_gain(double height, double speed, double duration, double g,
                                  double c) {
  const double ramp = std::abs(height / speed);
  const double kinetic = std::abs(height * speed);  // 2 ramps * ramp * speed^2 / 2
  const double potential = g * height * (duration - ramp);
  return (potential - kinetic) / (c * c);
}

double clock_visibility(double delta_E, double delta_tau, double hbar) {
  return std::abs(std::cos(delta_E * delta_tau / (2.0 * hbar)));
}

double triangular_action(double speed, double duration) { return 0.5 * speed * speed * duration; }

double triangular_proper_time_deficit(double speed, double duration, double c) {
  const double beta2 = speed * speed / (c * c);
  // 1 - sqrt(1 - b) without cancellation
  return duration * beta2 / (1.0 + std::sqrt(1.0 - beta2));
}

double frame_phase(double mass, double action, double hbar) { return mass * action / hbar; }

double split_newtonian_phase(double level, double E0, double x0, double p0, double sigma_p,
                             double g, double duration, double hbar, double c) {
  const double c2 = c * c;
  const double m = E0 / c2;
  const double T = duration;
  const double p_squared = p0 * p0 * T - p0 * m * g * T * T + m * m * g * g * T * T * T / 3.0;
  const double x_mean = x0 * T + p0 * T * T / (2.0 * m) - g * T * T * T / 6.0;
  const double kinetic = (p_squared + sigma_p * sigma_p * T) * c2 / (2.0 * E0 * E0);
  return level / hbar * (kinetic - g * x_mean / c2);
}

double falling_clock_shift(double height, double g, double duration, double sigma_p,
                           double mass, double c) {
  const double c2 = c * c;
  return g * height / c2 - g * g * duration * duration / (3.0 * c2) -
         sigma_p * sigma_p / (2.0 * mass * mass * c2);
}

double gaussian_momentum_spread(double sigma, double hbar) { return hbar / (2.0 * sigma); }

}  // namespace dynmass::predict
