#pragma once

// Closed-form predictions. Pure functions of parameters: nothing here touches grids,
// states or propagators.

namespace dynmass::predict {

/// -M a w / hbar
double loop_phase(double mass, double a, double w, double hbar);

/// phase_1 - phase_2 of the loop for masses M1, M2: (M2 - M1) a w / hbar
double relative_loop_phase(double m1, double m2, double a, double w, double hbar);

/// (omega - omega0) / omega0 = -v^2 / 2c^2 + Phi / c^2
double clock_shift(double v, double phi, double c);

/// tau(trapezoid) - tau(rest) at lowest order for a path that ramps at `speed` to `height`
/// in a uniform field g, holds, and ramps back within `duration`.
double trapezoid_proper_time_gain(double height, double speed, double duration, double g,
                                  double c);

/// |cos(dE dtau / 2 hbar)|
double clock_visibility(double delta_E, double delta_tau, double hbar);

/// int xi_dot^2 / 2 dt for the out-and-back path at constant speed.
double triangular_action(double speed, double duration);

/// T - T' = T (1 - sqrt(1 - v^2/c^2)) for the out-and-back path at constant speed.
double triangular_proper_time_deficit(double speed, double duration, double c);

/// M S / hbar
double frame_phase(double mass, double action, double hbar);

/// Relative-phase discrepancy between the first-order split Hamiltonian and the Newtonian
/// one for an excited level E at rest energy E0, for a Gaussian packet starting at x0
/// with momentum p0 and momentum spread sigma_p in a uniform field g:
///   (E / hbar) int_0^T [(<p>^2 + sigma_p^2) c^2 / 2 E0^2 - g <x> / c^2] dt
/// with <p> = p0 - m g t, <x> = x0 + p0 t / m - g t^2 / 2 and m = E0 / c^2.
double split_newtonian_phase(double level, double E0, double x0, double p0, double sigma_p,
                             double g, double duration, double hbar, double c);

/// Time-averaged fractional clock shift of a packet released at rest at height h in a
/// uniform field g over [0, T], including the momentum spread sigma_p of a packet with
/// mass m: g h / c^2 - g^2 T^2 / 3c^2 - sigma_p^2 / 2 m^2 c^2.
double falling_clock_shift(double height, double g, double duration, double sigma_p,
                           double mass, double c);

/// sigma_p = hbar / 2 sigma for a minimum-uncertainty Gaussian.
double gaussian_momentum_spread(double sigma, double hbar);

}  // namespace dynmass::predict
