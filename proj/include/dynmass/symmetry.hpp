#pragma once

// Galilei group in one space dimension, its central extension by an internal
// coordinate q, and the unitary representation of translations and boosts on
// composite states.

#include <vector>

#include <Eigen/Core>

#include "dynmass/hilbert.hpp"

namespace dynmass {

/// g = (w, a, b) acting as (x, t) -> (x + w t + a, t + b). Rotations are the identity.
template <typename Scalar = double>
struct GalileiElement {
  using Coordinates = Eigen::Matrix<Scalar, 2, 1>;  // (x, t)

  Scalar w{0};
  Scalar a{0};
  Scalar b{0};

  static GalileiElement identity() { return {}; }
  static GalileiElement boost(Scalar w) { return {w, Scalar(0), Scalar(0)}; }
  static GalileiElement translation(Scalar a) { return {Scalar(0), a, Scalar(0)}; }
  static GalileiElement time_shift(Scalar b) { return {Scalar(0), Scalar(0), b}; }

  Coordinates act(const Coordinates& xt) const {
    return Coordinates(xt(0) + w * xt(1) + a, xt(1) + b);
  }

  bool is_identity() const { return w == Scalar(0) && a == Scalar(0) && b == Scalar(0); }

  friend bool operator==(const GalileiElement&, const GalileiElement&) = default;
};

/// g2 after g1: act(compose(g2, g1)) == act(g2) o act(g1).
template <typename Scalar>
GalileiElement<Scalar> compose(const GalileiElement<Scalar>& g2, const GalileiElement<Scalar>& g1) {
  return {g1.w + g2.w, g1.a + g2.a + g2.w * g1.b, g1.b + g2.b};
}

template <typename Scalar>
GalileiElement<Scalar> inverse(const GalileiElement<Scalar>& g) {
  return {-g.w, g.w * g.b - g.a, -g.b};
}

/// g_{-a} g_{-w} g_{a} g_{w}: translate-boost loop, the identity of the Galilei group.
template <typename Scalar>
GalileiElement<Scalar> bargmann_loop_element(Scalar a, Scalar w) {
  using G = GalileiElement<Scalar>;
  return compose(G::translation(-a),
                 compose(G::boost(-w), compose(G::translation(a), G::boost(w))));
}

/// (alpha; g) acting on (q, x, t) as (q + alpha - w x - w^2 t / 2, x + w t + a, t + b).
template <typename Scalar = double>
struct ExtendedGalileiElement {
  using Coordinates = Eigen::Matrix<Scalar, 3, 1>;  // (q, x, t)

  Scalar alpha{0};
  GalileiElement<Scalar> g{};

  static ExtendedGalileiElement identity() { return {}; }
  static ExtendedGalileiElement lift(const GalileiElement<Scalar>& g) { return {Scalar(0), g}; }

  Coordinates act(const Coordinates& qxt) const {
    const Scalar q = qxt(0), x = qxt(1), t = qxt(2);
    return Coordinates(q + alpha - g.w * x - g.w * g.w * t / Scalar(2), x + g.w * t + g.a, t + g.b);
  }

  friend bool operator==(const ExtendedGalileiElement&, const ExtendedGalileiElement&) = default;
};

/// Composition fixed by the coordinate action: act(compose(h2, h1)) == act(h2) o act(h1).
template <typename Scalar>
ExtendedGalileiElement<Scalar> compose(const ExtendedGalileiElement<Scalar>& h2,
                                       const ExtendedGalileiElement<Scalar>& h1) {
  const Scalar alpha =
      h1.alpha + h2.alpha - h2.g.w * h1.g.a - h2.g.w * h2.g.w * h1.g.b / Scalar(2);
  return {alpha, compose(h2.g, h1.g)};
}

template <typename Scalar>
ExtendedGalileiElement<Scalar> inverse(const ExtendedGalileiElement<Scalar>& h) {
  const auto& g = h.g;
  return {-h.alpha - g.w * g.a + g.w * g.w * g.b / Scalar(2), inverse(g)};
}

/// The same loop in the extended group: the Galilei part closes, q shifts by w a.
template <typename Scalar>
ExtendedGalileiElement<Scalar> extended_loop_element(Scalar a, Scalar w) {
  using G = GalileiElement<Scalar>;
  using H = ExtendedGalileiElement<Scalar>;
  return compose(H::lift(G::translation(-a)),
                 compose(H::lift(G::boost(-w)),
                         compose(H::lift(G::translation(a)), H::lift(G::boost(w)))));
}

// --- unitary representation on composite states ---------------------------------

/// U = exp(-i p a / hbar): psi(x) -> psi(x - a), applied in momentum space.
CompositeState apply_translation(const CompositeState& state, double a,
                                 const PhysicalParams& params);

/// U_i = exp(i w K_i / hbar) with K_i = M_i x - t p on branch i. At t = 0 this multiplies
/// branch i by exp(i M_i w x / hbar), raising its mean momentum by M_i w.
CompositeState apply_boost(const CompositeState& state, double w, double t,
                           const PhysicalParams& params);

/// Per branch: distance of M_i w L / hbar from the nearest multiple of 2 pi. Zero means
/// the boost phase is exactly periodic on the grid.
Eigen::VectorXd boost_seam_mismatch(const GridSpec& grid, const InternalSpace& internal,
                                    double w, const PhysicalParams& params);

/// Applies U(g_{-a}) U(g_{-w}) U(g_{a}) U(g_{w}) at t = 0 and returns each branch's phase
/// relative to the input (expected -M_i a w / hbar).
std::vector<BranchPhase> loop_phase(const CompositeState& state, double a, double w,
                                    const PhysicalParams& params);

/// Per branch || (p K - K p) psi_i + i hbar M_i psi_i || / || psi_i ||.
Eigen::VectorXd commutator_residual(const CompositeState& state, double t,
                                    const PhysicalParams& params);

}  // namespace dynmass
