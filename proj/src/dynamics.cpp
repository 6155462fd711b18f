#include "dynmass/dynamics.hpp"

#include <limits>
#include <numbers>
#include <sstream>

#include "dynmass/symmetry.hpp"

namespace dynmass {

namespace {

void require_compatible(const InternalSpace& internal, const PhysicalParams& params) {
  if (!params.compatible_with(internal))
    throw PreconditionError(Precondition::incompatible_spaces,
                            "physical params and internal space disagree on E0");
}

// Boolean mask of grid points inside the clearance guard bands.
Eigen::Array<bool, Eigen::Dynamic, 1> guard_mask(const GridSpec& grid) {
  const Eigen::ArrayXd x = grid.positions();
  const double guard = guard_width(grid);
  return (x < grid.x_min() + guard) || (x >= grid.x_max() - guard);
}

}  // namespace

std::string to_string(const Hamiltonian& h) {
  switch (h.kind) {
    case HamiltonianKind::exact: return "exact";
    case HamiltonianKind::dynamical_mass:
      return h.include_rest_energy ? "dynamical_mass+rest" : "dynamical_mass";
    case HamiltonianKind::low_energy: return "low_energy";
    case HamiltonianKind::split: return "split";
    case HamiltonianKind::newtonian: return "newtonian";
  }
  return "unknown";
}

std::optional<Hamiltonian> parse_hamiltonian(const std::string& name) {
  if (name == "exact") return Hamiltonian{HamiltonianKind::exact, false};
  if (name == "dynamical_mass") return Hamiltonian{HamiltonianKind::dynamical_mass, false};
  if (name == "dynamical_mass+rest") return Hamiltonian{HamiltonianKind::dynamical_mass, true};
  if (name == "low_energy") return Hamiltonian{HamiltonianKind::low_energy, false};
  if (name == "split") return Hamiltonian{HamiltonianKind::split, false};
  if (name == "newtonian") return Hamiltonian{HamiltonianKind::newtonian, false};
  return std::nullopt;
}

std::function<double(double)> branch_kinetic(const Hamiltonian& h, const InternalSpace& internal,
                                             const PhysicalParams& params, Index level) {
  if (level < 0 || level >= internal.dim())
    throw PreconditionError(Precondition::dimension_mismatch, "level out of range");
  const double E0 = internal.rest_energy();
  const double Ei = internal.level(level);
  const double c = params.c();
  return [=](double p) { return kinetic_energy(h, p, E0, Ei, c); };
}

double gravitational_mass(const Hamiltonian& h, const InternalSpace& internal,
                          const PhysicalParams& params, Index level) {
  const double c2 = params.c() * params.c();
  switch (h.kind) {
    case HamiltonianKind::newtonian: return internal.rest_energy() / c2;
    case HamiltonianKind::split: return (internal.rest_energy() + internal.level(level)) / c2;
    default: return internal.branch_mass(level, params.c());
  }
}

double branch_offset(const Hamiltonian& h, const InternalSpace& internal,
                     const PhysicalParams& /*params*/, Index level) {
  switch (h.kind) {
    case HamiltonianKind::split:
    case HamiltonianKind::newtonian: return internal.rest_energy() + internal.level(level);
    default: return 0.0;
  }
}

Eigen::ArrayXd branch_potential(const Hamiltonian& h, const InternalSpace& internal,
                                const PhysicalParams& params, Index level,
                                const GridSpec& grid) {
  const Eigen::ArrayXd phi = params.potential().sample(grid);
  const double c2 = params.c() * params.c();
  switch (h.kind) {
    case HamiltonianKind::exact:
    case HamiltonianKind::low_energy:
      // H_r Phi / c^2: the weak-field factor sqrt(-g00) ~ 1 + Phi/c^2 acting on the rest energy
      return internal.branch_rest_energy(level) * phi / c2;
    default:
      return branch_offset(h, internal, params, level) +
             gravitational_mass(h, internal, params, level) * phi;
  }
}

SplitOperatorPropagator::SplitOperatorPropagator(const GridSpec& grid,
                                                 const InternalSpace& internal,
                                                 const Hamiltonian& h,
                                                 const PhysicalParams& params, double dt)
    : grid_(grid),
      dt_(dt),
      hbar_(params.hbar()),
      spectral_(grid.n_points()),
      row_(grid.n_points()),
      spectrum_(grid.n_points()) {
  require_compatible(internal, params);
  if (!(dt > 0.0)) throw InvariantError("propagator: dt must be positive");
  const Eigen::ArrayXd p = grid.momenta(params.hbar());
  for (Index i = 0; i < internal.dim(); ++i) {
    const auto T = branch_kinetic(h, internal, params, i);
    Eigen::ArrayXd kinetic = p.unaryExpr(T);
    const Eigen::ArrayXd V = branch_potential(h, internal, params, i, grid);
    kinetic_phase_.push_back((Complex(0.0, -dt / hbar_) * kinetic.cast<Complex>()).exp());
    half_potential_phase_.push_back((Complex(0.0, -0.5 * dt / hbar_) * V.cast<Complex>()).exp());
    kinetic_.push_back(std::move(kinetic));
  }
}

void SplitOperatorPropagator::step(Eigen::MatrixXcd& amplitudes) {
  for (Index i = 0; i < amplitudes.rows(); ++i) {
    const auto half = static_cast<std::size_t>(i);
    row_ = amplitudes.row(i).transpose();
    row_.array() *= half_potential_phase_[half];
    spectral_.forward(row_, spectrum_);
    spectrum_.array() *= kinetic_phase_[half];
    spectral_.inverse(spectrum_, row_);
    row_.array() *= half_potential_phase_[half];
    amplitudes.row(i) = row_.transpose();
  }
}

double SplitOperatorPropagator::kinetic_phase_spread(const CompositeState& state) const {
  Spectral spectral(grid_.n_points());
  Wavefunction phi(grid_.n_points());
  double worst = 0.0;
  for (Index i = 0; i < state.internal().dim(); ++i) {
    spectral.forward(state.branch(i), phi);
    const Eigen::ArrayXd density = phi.array().abs2();
    const double floor = 1e-20 * density.maxCoeff();
    const Eigen::ArrayXd& T = kinetic_[static_cast<std::size_t>(i)];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Index k = 0; k < density.size(); ++k) {
      if (density(k) > floor) {
        lo = std::min(lo, T(k));
        hi = std::max(hi, T(k));
      }
    }
    if (hi >= lo) worst = std::max(worst, dt_ * (hi - lo) / hbar_);
  }
  return worst;
}

CompositeState propagate(const CompositeState& state, const Hamiltonian& h,
                         const PhysicalParams& params, double dt, std::size_t steps,
                         std::size_t stride,
                         const std::function<void(std::size_t, const CompositeState&)>& observe) {
  SplitOperatorPropagator propagator(state.grid(), state.internal(), h, params, dt);
  const double spread = propagator.kinetic_phase_spread(state);
  if (!(spread < std::numbers::pi)) {
    std::ostringstream msg;
    msg << "kinetic phase per step spans " << spread << " rad over occupied momenta (>= pi)";
    throw PreconditionError(Precondition::aliasing, msg.str());
  }
  require_clearance(state, "propagate");

  const GridSpec& grid = state.grid();
  const auto mask = guard_mask(grid);
  Eigen::MatrixXcd amps = state.amplitudes();
  if (observe) observe(0, state);
  for (std::size_t n = 1; n <= steps; ++n) {
    propagator.step(amps);
    double edge = 0.0;
    for (Index k = 0; k < grid.n_points(); ++k)
      if (mask(k)) edge += amps.col(k).squaredNorm();
    if (edge * grid.dx() > 1e-8)
      throw PreconditionError(Precondition::boundary_violation,
                              "packet reached the guard band at step " + std::to_string(n));
    if (observe && stride > 0 && n % stride == 0)
      observe(n, CompositeState(grid, state.internal(), amps));
  }
  return CompositeState(grid, state.internal(), std::move(amps));
}

CompositeState propagate(const CompositeState& state, const Hamiltonian& h,
                         const PhysicalParams& params, double dt, std::size_t steps) {
  return propagate(state, h, params, dt, steps, 0, nullptr);
}

std::vector<CompositeState> propagate_history(const CompositeState& state, const Hamiltonian& h,
                                              const PhysicalParams& params, double dt,
                                              std::size_t steps, std::size_t stride) {
  std::vector<CompositeState> history;
  history.reserve(steps / std::max<std::size_t>(stride, 1) + 1);
  propagate(state, h, params, dt, steps, stride,
            [&](std::size_t, const CompositeState& s) { history.push_back(s); });
  return history;
}

double internal_frequency(double omega0, double v, double phi, const PhysicalParams& params) {
  const double c = params.c();
  if (!(std::abs(v) < c)) {
    std::ostringstream msg;
    msg << "|v| = " << std::abs(v) << " >= c = " << c;
    throw PreconditionError(Precondition::superluminal, msg.str());
  }
  return omega0 * (1.0 - v * v / (2.0 * c * c) + phi / (c * c));
}

ProperTime proper_time(const Trajectory& traj, const PhysicalParams& params) {
  if (!traj.closed())
    throw PreconditionError(Precondition::open_trajectory, "proper time needs a closed path");
  require_subluminal(traj, params.c());
  const double h = traj.step();
  const double c2 = params.c() * params.c();
  const Eigen::ArrayXd beta2 = traj.segment_velocities().array().square() / c2;
  // 1 - sqrt(1 - b^2) written without cancellation
  const double deficit = h * (beta2 / (1.0 + (1.0 - beta2).sqrt())).sum();
  const double lowest = h * (0.5 * beta2).sum();
  return {traj.duration() - deficit, deficit, lowest};
}

double closed_path_phase(const Trajectory& traj, double mass, const PhysicalParams& params) {
  if (!traj.closed())
    throw PreconditionError(Precondition::open_trajectory, "closed-path phase needs a closed path");
  const Eigen::VectorXd action = traj.action_integral();
  return mass * action(action.size() - 1) / params.hbar();
}

Eigen::VectorXd clock_phase_along(const Trajectory& traj, double omega0,
                                  const PhysicalParams& params) {
  const Eigen::VectorXd v = traj.segment_velocities();
  const Eigen::VectorXd& xi = traj.positions();
  const Potential& potential = params.potential();
  const double h = traj.step();
  Eigen::VectorXd phase(xi.size());
  phase(0) = 0.0;
  for (Index k = 0; k < v.size(); ++k) {
    const double phi_mid = potential(0.5 * (xi(k) + xi(k + 1)));
    phase(k + 1) = phase(k) + h * internal_frequency(omega0, v(k), phi_mid, params);
  }
  return phase;
}

namespace {

Eigen::MatrixXcd frame_phase_factors(const CompositeState& state, const Trajectory& traj,
                                     double t, const PhysicalParams& params,
                                     const Hamiltonian& h, double sign) {
  const Eigen::ArrayXd x = state.grid().positions();
  const double v = traj.velocity_at(t);
  const double action = traj.action_at(t);
  Eigen::MatrixXcd factors(state.internal().dim(), state.grid().n_points());
  for (Index i = 0; i < state.internal().dim(); ++i) {
    const double mass = gravitational_mass(h, state.internal(), params, i);
    const Eigen::ArrayXd f = mass * (v * x + action) / params.hbar();
    factors.row(i) = (Complex(0.0, sign) * f.cast<Complex>()).exp().transpose();
  }
  return factors;
}

}  // namespace

CompositeState frame_transform(const CompositeState& state, const Trajectory& traj, double t,
                               const PhysicalParams& params, const Hamiltonian& h) {
  require_compatible(state.internal(), params);
  const CompositeState shifted = apply_translation(state, -traj.position_at(t), params);
  Eigen::MatrixXcd amps =
      shifted.amplitudes().cwiseProduct(frame_phase_factors(state, traj, t, params, h, -1.0));
  return CompositeState(state.grid(), state.internal(), std::move(amps));
}

CompositeState inverse_frame_transform(const CompositeState& state, const Trajectory& traj,
                                       double t, const PhysicalParams& params,
                                       const Hamiltonian& h) {
  require_compatible(state.internal(), params);
  Eigen::MatrixXcd amps =
      state.amplitudes().cwiseProduct(frame_phase_factors(state, traj, t, params, h, +1.0));
  const CompositeState phased(state.grid(), state.internal(), std::move(amps));
  return apply_translation(phased, traj.position_at(t), params);
}

double schrodinger_residual(const std::vector<CompositeState>& history, double dt,
                            const Hamiltonian& h, const PhysicalParams& params,
                            const std::optional<Trajectory>& non_inertial) {
  const std::size_t skip = non_inertial ? 2 : 1;
  if (history.size() < 2 * skip + 1)
    throw PreconditionError(Precondition::too_few_samples,
                            "history needs at least " + std::to_string(2 * skip + 1) + " samples");
  const CompositeState& first = history.front();
  const GridSpec& grid = first.grid();
  const InternalSpace& internal = first.internal();
  require_compatible(internal, params);

  const Eigen::ArrayXd p = grid.momenta(params.hbar());
  const Eigen::ArrayXd x = grid.positions();
  std::vector<Eigen::ArrayXd> kinetic;
  std::vector<Eigen::ArrayXd> potential;
  std::vector<double> weight;
  for (Index i = 0; i < internal.dim(); ++i) {
    kinetic.push_back(p.unaryExpr(branch_kinetic(h, internal, params, i)));
    potential.push_back(branch_potential(h, internal, params, i, grid));
    weight.push_back(gravitational_mass(h, internal, params, i));
  }

  Spectral spectral(grid.n_points());
  const Complex ihbar(0.0, params.hbar());
  double worst = 0.0;
  for (std::size_t k = skip; k + skip < history.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const double accel = non_inertial ? non_inertial->acceleration_at(t) : 0.0;
    double sq = 0.0;
    for (Index i = 0; i < internal.dim(); ++i) {
      const auto b = static_cast<std::size_t>(i);
      const Wavefunction phi = history[k].branch(i);
      const Wavefunction dphi =
          (history[k + 1].branch(i) - history[k - 1].branch(i)) / (2.0 * dt);
      Wavefunction hphi = spectral.apply(phi, kinetic[b]);
      hphi.array() += (potential[b] + weight[b] * accel * x).cast<Complex>() * phi.array();
      sq += (ihbar * dphi - hphi).squaredNorm();
    }
    worst = std::max(worst, std::sqrt(sq * grid.dx()));
  }
  return worst;
}

}  // namespace dynmass
