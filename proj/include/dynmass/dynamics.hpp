#pragma once

// Center-of-mass Hamiltonians for a particle with internal energy levels, their
// split-operator propagator, the internal-clock frequency, proper-time functionals
// along classical paths, and the transformation to a frame moving along xi(t).

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dynmass/hilbert.hpp"
#include "dynmass/spectral.hpp"
#include "dynmass/trajectory.hpp"

namespace dynmass {

enum class HamiltonianKind {
  exact,           ///< sqrt(c^2 p^2 + H_r^2) with the weak-field metric factor in V
  dynamical_mass,  ///< p^2 / 2M + M Phi, optionally + M c^2
  low_energy,      ///< H_r + p^2 c^2 / 2 H_r + H_r Phi / c^2
  split,           ///< low_energy expanded to first order in H0 / E0
  newtonian,       ///< m c^2 + H0 + p^2 / 2m + m Phi
};

struct Hamiltonian {
  HamiltonianKind kind = HamiltonianKind::newtonian;
  bool include_rest_energy = false;  ///< only read by dynamical_mass

  friend bool operator==(const Hamiltonian&, const Hamiltonian&) = default;
};

/// "exact", "dynamical_mass", "dynamical_mass+rest", "low_energy", "split", "newtonian"
std::string to_string(const Hamiltonian& h);
std::optional<Hamiltonian> parse_hamiltonian(const std::string& name);

/// Momentum-diagonal part T_i(p) of branch i with rest energy E0 + Ei. Templated so that
/// the closed forms can be evaluated in extended precision.
template <typename Scalar>
Scalar kinetic_energy(const Hamiltonian& h, Scalar p, Scalar E0, Scalar Ei, Scalar c) {
  using std::sqrt;
  const Scalar Hr = E0 + Ei;
  const Scalar c2 = c * c;
  switch (h.kind) {
    case HamiltonianKind::exact:
      return sqrt(c2 * p * p + Hr * Hr);
    case HamiltonianKind::dynamical_mass: {
      const Scalar M = Hr / c2;
      const Scalar kin = p * p / (Scalar(2) * M);
      return h.include_rest_energy ? M * c2 + kin : kin;
    }
    case HamiltonianKind::low_energy:
      return Hr + p * p * c2 / (Scalar(2) * Hr);
    case HamiltonianKind::split:
      return p * p * c2 / (Scalar(2) * E0) - Ei * p * p * c2 / (Scalar(2) * E0 * E0);
    case HamiltonianKind::newtonian:
      return p * p / (Scalar(2) * (E0 / c2));
  }
  return Scalar(0);
}

/// dT_i/dp, the center-of-mass velocity operator of branch i.
template <typename Scalar>
Scalar kinetic_velocity(const Hamiltonian& h, Scalar p, Scalar E0, Scalar Ei, Scalar c) {
  using std::sqrt;
  const Scalar Hr = E0 + Ei;
  const Scalar c2 = c * c;
  switch (h.kind) {
    case HamiltonianKind::exact: return c2 * p / sqrt(c2 * p * p + Hr * Hr);
    case HamiltonianKind::dynamical_mass: return p / (Hr / c2);
    case HamiltonianKind::low_energy: return p * c2 / Hr;
    case HamiltonianKind::split: return p * c2 / E0 - Ei * p * c2 / (E0 * E0);
    case HamiltonianKind::newtonian: return p / (E0 / c2);
  }
  return Scalar(0);
}

/// T_i as a function of momentum.
std::function<double(double)> branch_kinetic(const Hamiltonian& h, const InternalSpace& internal,
                                             const PhysicalParams& params, Index level);

/// Coefficient of Phi in V_i: the weight of branch i (M_i, or m for newtonian).
double gravitational_mass(const Hamiltonian& h, const InternalSpace& internal,
                          const PhysicalParams& params, Index level);

/// Position-independent part of V_i (rest and internal energy not already in T_i).
double branch_offset(const Hamiltonian& h, const InternalSpace& internal,
                     const PhysicalParams& params, Index level);

/// V_i(x) = offset_i + gravitational_mass_i * Phi(x) sampled on the grid.
Eigen::ArrayXd branch_potential(const Hamiltonian& h, const InternalSpace& internal,
                                const PhysicalParams& params, Index level,
                                const GridSpec& grid);

/// One Strang step per call:
///   exp(-i V dt / 2 hbar) F^-1 exp(-i T dt / hbar) F exp(-i V dt / 2 hbar)
/// with all phase tables precomputed. Not thread-safe (owns an FFT plan).
class SplitOperatorPropagator {
 public:
  SplitOperatorPropagator(const GridSpec& grid, const InternalSpace& internal,
                          const Hamiltonian& h, const PhysicalParams& params, double dt);

  void step(Eigen::MatrixXcd& amplitudes);
  double dt() const { return dt_; }

  /// Largest kinetic phase spread dt |T_i(p) - T_i(p')| / hbar over the momenta the
  /// state occupies (density above 1e-20 of the peak).
  double kinetic_phase_spread(const CompositeState& state) const;

 private:
  GridSpec grid_;
  double dt_;
  double hbar_;
  std::vector<Eigen::ArrayXd> kinetic_;
  std::vector<Eigen::ArrayXcd> kinetic_phase_;
  std::vector<Eigen::ArrayXcd> half_potential_phase_;
  Spectral spectral_;
  Wavefunction row_;
  Wavefunction spectrum_;
};

/// `steps` Strang steps of size dt. Checks kinetic aliasing up front and boundary
/// clearance after every step.
CompositeState propagate(const CompositeState& state, const Hamiltonian& h,
                         const PhysicalParams& params, double dt, std::size_t steps);

/// Same as propagate, calling `observe(step, state)` at step 0 and every `stride` steps.
CompositeState propagate(const CompositeState& state, const Hamiltonian& h,
                         const PhysicalParams& params, double dt, std::size_t steps,
                         std::size_t stride,
                         const std::function<void(std::size_t, const CompositeState&)>& observe);

/// States at steps 0, stride, 2 stride, ..., steps.
std::vector<CompositeState> propagate_history(const CompositeState& state, const Hamiltonian& h,
                                              const PhysicalParams& params, double dt,
                                              std::size_t steps, std::size_t stride = 1);

/// omega0 (1 - v^2 / 2c^2 + Phi / c^2)
double internal_frequency(double omega0, double v, double phi, const PhysicalParams& params);

struct ProperTime {
  double elapsed;                ///< T' = int sqrt(1 - xi_dot^2 / c^2) dt
  double deficit;                ///< T - T'
  double deficit_lowest_order;   ///< int xi_dot^2 / 2c^2 dt
};

ProperTime proper_time(const Trajectory& traj, const PhysicalParams& params);

/// (mass / hbar) int_0^T xi_dot^2 / 2 dt, not reduced mod 2 pi.
double closed_path_phase(const Trajectory& traj, double mass, const PhysicalParams& params);

/// Internal-clock phase accumulated up to each sample of a classical path, integrating
/// omega(v, Phi(xi)) over the segments.
Eigen::VectorXd clock_phase_along(const Trajectory& traj, double omega0,
                                  const PhysicalParams& params);

/// phi(x', t) = exp(-i f_i(x', t)) psi(x' + xi(t), t) with
/// f_i = M_i (xi_dot x' + int xi_dot^2/2 dt) / hbar and M_i the branch weight under `h`.
CompositeState frame_transform(const CompositeState& state, const Trajectory& traj, double t,
                               const PhysicalParams& params,
                               const Hamiltonian& h = {HamiltonianKind::dynamical_mass, false});
CompositeState inverse_frame_transform(const CompositeState& state, const Trajectory& traj,
                                       double t, const PhysicalParams& params,
                                       const Hamiltonian& h = {HamiltonianKind::dynamical_mass,
                                                               false});

/// max_k || i hbar (phi_{k+1} - phi_{k-1}) / 2 dt - H phi_k || over interior samples of a
/// history uniformly spaced by dt starting at t = 0. With a trajectory the Hamiltonian
/// gains the non-inertial term M_i xi_ddot(t) x', and samples whose stencil touches a
/// trajectory endpoint are skipped.
double schrodinger_residual(const std::vector<CompositeState>& history, double dt,
                            const Hamiltonian& h, const PhysicalParams& params,
                            const std::optional<Trajectory>& non_inertial = std::nullopt);

}  // namespace dynmass
