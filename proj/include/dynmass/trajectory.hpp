#pragma once

#include <functional>

#include <Eigen/Core>

#include "dynmass/hilbert.hpp"

namespace dynmass {

/// Path xi(t) sampled on a uniform time grid 0 = t_0 < ... < t_K = T.
///
/// Derived quantities follow one differencing scheme:
///  - segment velocities are chord slopes (xi_{k+1} - xi_k) / h, exact on piecewise-linear
///    paths whose kinks sit on samples; integrals of velocity functionals are midpoint sums
///    over these segments,
///  - point velocities use central differences, second-order one-sided at the ends,
///  - point accelerations use second central differences, second-order one-sided at the ends.
class Trajectory {
 public:
  /// Samples must be uniform in time and start at t = 0. A closed path needs
  /// xi(0) == xi(T) == 0 exactly.
  Trajectory(Eigen::VectorXd times, Eigen::VectorXd xi, bool closed);

  /// Sample a callable on K + 1 uniform points over [0, T].
  static Trajectory sampled(double duration, Index segments,
                            const std::function<double(double)>& path, bool closed);
  /// Out to +speed * T/2 and back at constant speed. Needs an even segment count.
  static Trajectory triangular(double speed, double duration, Index segments);
  /// Up at `speed` to `height`, hold, then back down; ramps take height/speed each.
  static Trajectory trapezoid(double height, double speed, double duration, Index segments);
  static Trajectory stationary(double duration, Index segments, double position = 0.0);

  const Eigen::VectorXd& times() const { return times_; }
  const Eigen::VectorXd& positions() const { return xi_; }
  bool closed() const { return closed_; }
  Index segments() const { return xi_.size() - 1; }
  double step() const { return times_(1) - times_(0); }
  double duration() const { return times_(times_.size() - 1); }

  /// (xi_{k+1} - xi_k) / h for each segment.
  Eigen::VectorXd segment_velocities() const;
  /// Central-difference velocities at the samples.
  Eigen::VectorXd point_velocities() const;
  Eigen::VectorXd point_accelerations() const;
  /// S(t_k) = int_0^{t_k} xi_dot^2 / 2 dt by midpoint sums over segments.
  Eigen::VectorXd action_integral() const;

  /// Linear interpolation of the sampled quantities at an arbitrary t in [0, T].
  double position_at(double t) const;
  double velocity_at(double t) const;
  double acceleration_at(double t) const;
  double action_at(double t) const;

  /// max |segment velocity| and max |point velocity|.
  double max_speed() const;

 private:
  double interpolate(const Eigen::VectorXd& samples, double t) const;

  Eigen::VectorXd times_;
  Eigen::VectorXd xi_;
  bool closed_;
  Eigen::VectorXd point_velocity_;
  Eigen::VectorXd point_acceleration_;
  Eigen::VectorXd action_;
};

/// Throws superluminal if the path ever reaches c.
void require_subluminal(const Trajectory& traj, double c);

}  // namespace dynmass
