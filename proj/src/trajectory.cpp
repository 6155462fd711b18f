#include "dynmass/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynmass {

namespace {

Eigen::VectorXd central_first(const Eigen::VectorXd& f, double h) {
  const Index n = f.size();
  Eigen::VectorXd d(n);
  d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  for (Index k = 1; k + 1 < n; ++k) d(k) = (f(k + 1) - f(k - 1)) / (2.0 * h);
  d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
  return d;
}

Eigen::VectorXd central_second(const Eigen::VectorXd& f, double h) {
  const Index n = f.size();
  Eigen::VectorXd d(n);
  const double h2 = h * h;
  d(0) = (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / h2;
  for (Index k = 1; k + 1 < n; ++k) d(k) = (f(k + 1) - 2.0 * f(k) + f(k - 1)) / h2;
  d(n - 1) = (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / h2;
  return d;
}

}  // namespace

Trajectory::Trajectory(Eigen::VectorXd times, Eigen::VectorXd xi, bool closed)
    : times_(std::move(times)), xi_(std::move(xi)), closed_(closed) {
  if (times_.size() != xi_.size())
    throw InvariantError("trajectory: times and positions differ in length");
  if (times_.size() < 4) throw PreconditionError(Precondition::too_few_samples,
                                                 "trajectory needs at least 4 samples");
  if (times_(0) != 0.0) throw InvariantError("trajectory: must start at t = 0");
  const double h = times_(1) - times_(0);
  if (!(h > 0.0)) throw InvariantError("trajectory: times must increase");
  for (Index k = 1; k < times_.size(); ++k) {
    const double hk = times_(k) - times_(k - 1);
    if (!(hk > 0.0) || std::abs(hk - h) > 1e-9 * h)
      throw InvariantError("trajectory: times must be uniformly spaced");
  }
  if (closed_ && (xi_(0) != 0.0 || xi_(xi_.size() - 1) != 0.0))
    throw PreconditionError(Precondition::open_trajectory,
                            "closed trajectory must satisfy xi(0) = xi(T) = 0");

  point_velocity_ = central_first(xi_, h);
  point_acceleration_ = central_second(xi_, h);
  const Eigen::VectorXd v = segment_velocities();
  action_.resize(xi_.size());
  action_(0) = 0.0;
  for (Index k = 0; k < v.size(); ++k) action_(k + 1) = action_(k) + 0.5 * h * v(k) * v(k);
}

Trajectory Trajectory::sampled(double duration, Index segments,
                               const std::function<double(double)>& path, bool closed) {
  if (segments < 3) throw PreconditionError(Precondition::too_few_samples, "need >= 3 segments");
  Eigen::VectorXd t(segments + 1);
  Eigen::VectorXd xi(segments + 1);
  for (Index k = 0; k <= segments; ++k) {
    t(k) = duration * static_cast<double>(k) / static_cast<double>(segments);
    xi(k) = path(t(k));
  }
  if (closed) {
    xi(0) = 0.0;
    xi(segments) = 0.0;
  }
  return Trajectory(std::move(t), std::move(xi), closed);
}

Trajectory Trajectory::triangular(double speed, double duration, Index segments) {
  if (segments % 2 != 0) throw InvariantError("trajectory: triangular path needs even segments");
  const Index half = segments / 2;
  Eigen::VectorXd t(segments + 1);
  Eigen::VectorXd xi(segments + 1);
  const double h = duration / static_cast<double>(segments);
  for (Index k = 0; k <= segments; ++k) {
    t(k) = h * static_cast<double>(k);
    xi(k) = speed * h * static_cast<double>(std::min(k, segments - k));
  }
  xi(half) = speed * 0.5 * duration;
  xi(0) = 0.0;
  xi(segments) = 0.0;
  return Trajectory(std::move(t), std::move(xi), true);
}

Trajectory Trajectory::trapezoid(double height, double speed, double duration, Index segments) {
  const double ramp = std::abs(height / speed);
  if (2.0 * ramp > duration) throw InvariantError("trajectory: ramps longer than the duration");
  const double v = std::copysign(std::abs(speed), height);
  return sampled(
      duration, segments,
      [=](double t) {
        if (t < ramp) return v * t;
        if (t > duration - ramp) return v * (duration - t);
        return height;
      },
      true);
}

Trajectory Trajectory::stationary(double duration, Index segments, double position) {
  return sampled(duration, segments, [=](double) { return position; }, position == 0.0);
}

Eigen::VectorXd Trajectory::segment_velocities() const {
  const Index n = segments();
  return (xi_.tail(n) - xi_.head(n)) / step();
}

Eigen::VectorXd Trajectory::point_velocities() const { return point_velocity_; }
Eigen::VectorXd Trajectory::point_accelerations() const { return point_acceleration_; }
Eigen::VectorXd Trajectory::action_integral() const { return action_; }

double Trajectory::interpolate(const Eigen::VectorXd& samples, double t) const {
  const double h = step();
  if (t < -1e-12 * duration() || t > duration() * (1.0 + 1e-12))
    throw PreconditionError(Precondition::open_trajectory, "time outside the trajectory support");
  double s = std::clamp(t / h, 0.0, static_cast<double>(segments()));
  if (std::abs(s - std::round(s)) < 1e-9) s = std::round(s);  // snap onto samples
  const auto k = std::min(static_cast<Index>(std::floor(s)), segments() - 1);
  const double frac = s - static_cast<double>(k);
  if (frac == 0.0) return samples(k);
  return (1.0 - frac) * samples(k) + frac * samples(k + 1);
}

double Trajectory::position_at(double t) const { return interpolate(xi_, t); }
double Trajectory::velocity_at(double t) const { return interpolate(point_velocity_, t); }
double Trajectory::acceleration_at(double t) const { return interpolate(point_acceleration_, t); }
double Trajectory::action_at(double t) const { return interpolate(action_, t); }

double Trajectory::max_speed() const {
  return std::max(segment_velocities().cwiseAbs().maxCoeff(), point_velocity_.cwiseAbs().maxCoeff());
}

void require_subluminal(const Trajectory& traj, double c) {
  const double v = traj.max_speed();
  if (!(v < c)) {
    std::ostringstream msg;
    msg << "max |xi_dot| = " << v << " >= c = " << c;
    throw PreconditionError(Precondition::superluminal, msg.str());
  }
}

}  // namespace dynmass
