#include "dynmass/symmetry.hpp"

#include <cmath>
#include <numbers>

#include "dynmass/spectral.hpp"

namespace dynmass {

namespace {

void require_compatible(const CompositeState& state, const PhysicalParams& params) {
  if (!params.compatible_with(state.internal()))
    throw PreconditionError(Precondition::incompatible_spaces,
                            "physical params and internal space disagree on E0");
}

Eigen::MatrixXcd translated_amplitudes(const CompositeState& state, double a, double hbar) {
  const GridSpec& grid = state.grid();
  const Eigen::ArrayXd p = grid.momenta(hbar);
  const Eigen::ArrayXcd shift = (Complex(0.0, -a / hbar) * p.cast<Complex>()).exp();
  Spectral spectral(grid.n_points());
  Eigen::MatrixXcd out(state.amplitudes().rows(), state.amplitudes().cols());
  for (Index i = 0; i < state.internal().dim(); ++i)
    out.row(i) = spectral.apply(state.branch(i), shift).transpose();
  return out;
}

// Apply a spectral operator (a function of p) to one branch.
Wavefunction apply_p(Spectral& spectral, const Wavefunction& psi, const Eigen::ArrayXd& p) {
  return spectral.apply(psi, p);
}

}  // namespace

CompositeState apply_translation(const CompositeState& state, double a,
                                 const PhysicalParams& params) {
  if (a == 0.0) return state;
  CompositeState out(state.grid(), state.internal(),
                     translated_amplitudes(state, a, params.hbar()));
  require_clearance(out, "translation");
  return out;
}

CompositeState apply_boost(const CompositeState& state, double w, double t,
                           const PhysicalParams& params) {
  require_compatible(state, params);
  if (w == 0.0) return state;
  const double hbar = params.hbar();
  Eigen::MatrixXcd amps =
      t == 0.0 ? state.amplitudes() : translated_amplitudes(state, w * t, hbar);
  const Eigen::ArrayXd x = state.grid().positions();
  for (Index i = 0; i < state.internal().dim(); ++i) {
    const double mass = state.internal().branch_mass(i, params.c());
    const Eigen::ArrayXcd kick = (Complex(0.0, mass * w / hbar) * x.cast<Complex>()).exp();
    const Complex ordering_phase = std::exp(Complex(0.0, -mass * w * w * t / (2.0 * hbar)));
    amps.row(i) = (amps.row(i).transpose().array() * kick * ordering_phase).transpose();
  }
  CompositeState out(state.grid(), state.internal(), std::move(amps));
  if (t != 0.0) require_clearance(out, "boost");
  return out;
}

Eigen::VectorXd boost_seam_mismatch(const GridSpec& grid, const InternalSpace& internal,
                                    double w, const PhysicalParams& params) {
  Eigen::VectorXd mismatch(internal.dim());
  for (Index i = 0; i < internal.dim(); ++i) {
    const double winding = internal.branch_mass(i, params.c()) * w * grid.length() / params.hbar();
    mismatch(i) = std::abs(wrap_angle(winding));
  }
  return mismatch;
}

std::vector<BranchPhase> loop_phase(const CompositeState& state, double a, double w,
                                    const PhysicalParams& params) {
  require_compatible(state, params);
  require_clearance(state, "loop input");
  CompositeState s = apply_boost(state, w, 0.0, params);
  s = apply_translation(s, a, params);
  s = apply_boost(s, -w, 0.0, params);
  s = apply_translation(s, -a, params);

  constexpr double kLoopFidelity = 1e-8;
  std::vector<BranchPhase> phases;
  phases.reserve(static_cast<std::size_t>(state.internal().dim()));
  for (Index i = 0; i < state.internal().dim(); ++i) {
    const BranchPhase bp = branch_phase(state, s, i);
    if (bp.fidelity < 1.0 - kLoopFidelity)
      throw PreconditionError(Precondition::branch_deformed,
                              "loop branch " + std::to_string(i) + " fidelity below 1 - 1e-8");
    phases.push_back(bp);
  }
  return phases;
}

Eigen::VectorXd commutator_residual(const CompositeState& state, double t,
                                    const PhysicalParams& params) {
  require_compatible(state, params);
  require_clearance(state, "commutator");
  const GridSpec& grid = state.grid();
  const double hbar = params.hbar();
  const Eigen::ArrayXd x = grid.positions();
  const Eigen::ArrayXd p = grid.momenta(hbar);
  Spectral spectral(grid.n_points());

  Eigen::VectorXd residual(state.internal().dim());
  for (Index i = 0; i < state.internal().dim(); ++i) {
    const double mass = state.internal().branch_mass(i, params.c());
    const Wavefunction psi = state.branch(i);
    auto boost_generator = [&](const Wavefunction& f) -> Wavefunction {
      return (mass * x.cast<Complex>() * f.array()).matrix() - t * apply_p(spectral, f, p);
    };
    const Wavefunction pk = apply_p(spectral, boost_generator(psi), p);
    const Wavefunction kp = boost_generator(apply_p(spectral, psi, p));
    const Wavefunction defect = pk - kp + Complex(0.0, hbar * mass) * psi;
    residual(i) = defect.norm() / psi.norm();
  }
  return residual;
}

}  // namespace dynmass
