#pragma once

// Discretized Hilbert space: a periodic 1D grid for the center of mass, a finite
// internal level space, and composite states over (level x grid point).

#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "dynmass/errors.hpp"

namespace dynmass {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Wavefunction = Eigen::VectorXcd;

/// Uniform periodic grid on [x_min, x_max) with a power-of-two number of points.
class GridSpec {
 public:
  GridSpec(double x_min, double x_max, Index n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  Index n_points() const { return n_; }
  double length() const { return x_max_ - x_min_; }
  double dx() const { return length() / static_cast<double>(n_); }

  /// x_n = x_min + n dx
  Eigen::ArrayXd positions() const;
  /// p_k = 2 pi hbar k / L in FFT storage order (k = 0..N/2-1, then -N/2..-1).
  Eigen::ArrayXd momenta(double hbar) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double x_min_;
  double x_max_;
  Index n_;
};

/// Internal levels: static rest energy E0 plus the eigenvalues E_i of H0.
class InternalSpace {
 public:
  InternalSpace(double rest_energy, Eigen::VectorXd levels);

  Index dim() const { return levels_.size(); }
  double rest_energy() const { return rest_energy_; }
  const Eigen::VectorXd& levels() const { return levels_; }
  double level(Index i) const { return levels_(i); }

  /// E0 + E_i, the rest energy of branch i.
  double branch_rest_energy(Index i) const { return rest_energy_ + levels_(i); }
  /// M_i = (E0 + E_i) / c^2
  double branch_mass(Index i, double c) const { return branch_rest_energy(i) / (c * c); }

  friend bool operator==(const InternalSpace& a, const InternalSpace& b) {
    return a.rest_energy_ == b.rest_energy_ && a.levels_.size() == b.levels_.size() &&
           a.levels_ == b.levels_;
  }

 private:
  double rest_energy_;
  Eigen::VectorXd levels_;
};

/// Static gravitational potential Phi(x) (energy per unit mass).
class Potential {
 public:
  struct None {
    friend bool operator==(const None&, const None&) = default;
  };
  struct UniformField {
    double g;
    friend bool operator==(const UniformField&, const UniformField&) = default;
  };
  struct Tabulated {
    std::vector<double> x;
    std::vector<double> phi;
    friend bool operator==(const Tabulated&, const Tabulated&) = default;
  };

  Potential() = default;
  static Potential none() { return Potential{}; }
  /// Phi(x) = g x, zero at the reference height x = 0.
  static Potential uniform_field(double g);
  /// Piecewise-linear through the nodes, constant beyond the end nodes.
  static Potential tabulated(std::vector<double> x, std::vector<double> phi);

  double operator()(double x) const;
  Eigen::ArrayXd sample(const GridSpec& grid) const;

  bool is_none() const { return std::holds_alternative<None>(model_); }
  const std::variant<None, UniformField, Tabulated>& model() const { return model_; }

  friend bool operator==(const Potential&, const Potential&) = default;

 private:
  explicit Potential(std::variant<None, UniformField, Tabulated> m) : model_(std::move(m)) {}
  std::variant<None, UniformField, Tabulated> model_;
};

/// hbar, c and the mass parameter m = E0/c^2. E0 is stored, m is derived from it, so
/// m c^2 is never recomputed into a drifting copy of the rest energy.
class PhysicalParams {
 public:
  PhysicalParams(double hbar, double c, double rest_energy, Potential potential = {});

  static PhysicalParams for_internal(const InternalSpace& internal, double hbar, double c,
                                     Potential potential = {}) {
    return PhysicalParams(hbar, c, internal.rest_energy(), std::move(potential));
  }

  double hbar() const { return hbar_; }
  double c() const { return c_; }
  double rest_energy() const { return rest_energy_; }
  double mass() const { return rest_energy_ / (c_ * c_); }
  const Potential& potential() const { return potential_; }

  PhysicalParams with_potential(Potential p) const {
    return PhysicalParams(hbar_, c_, rest_energy_, std::move(p));
  }

  /// Same stored E0 as the internal space.
  bool compatible_with(const InternalSpace& internal) const {
    return rest_energy_ == internal.rest_energy();
  }

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;

 private:
  double hbar_;
  double c_;
  double rest_energy_;
  Potential potential_;
};

/// Normalized amplitudes psi(i, n) over internal level i and grid point n.
class CompositeState {
 public:
  /// Throws InvariantError unless the shape is (internal.dim, grid.n_points) and the
  /// norm is 1 within 1e-10.
  CompositeState(GridSpec grid, InternalSpace internal, Eigen::MatrixXcd amplitudes);

  static CompositeState normalized(GridSpec grid, InternalSpace internal,
                                   Eigen::MatrixXcd amplitudes);

  const GridSpec& grid() const { return grid_; }
  const InternalSpace& internal() const { return internal_; }
  const Eigen::MatrixXcd& amplitudes() const { return amps_; }
  Wavefunction branch(Index level) const { return amps_.row(level).transpose(); }

  double norm() const;
  double branch_probability(Index level) const;

 private:
  GridSpec grid_;
  InternalSpace internal_;
  Eigen::MatrixXcd amps_;
};

constexpr double kNormTolerance = 1e-10;

/// Probability (dx-weighted) inside the guard bands at either end of the grid.
double edge_probability(const Wavefunction& psi, const GridSpec& grid);
double edge_probability(const CompositeState& state);
/// Guard band width used by the clearance rule: L/16 at each end.
double guard_width(const GridSpec& grid);
/// Throws boundary_violation if more than 1e-8 of the probability sits in the guard bands.
void require_clearance(const CompositeState& state, const char* context);

/// exp(-(x-x0)^2/4 sigma^2 + i p0 x / hbar), normalized on the grid.
Wavefunction gaussian_packet(const GridSpec& grid, double x0, double p0, double sigma,
                             double hbar);

/// weights_i * spatial_i(x); spatial has either one entry per level or one shared entry.
CompositeState make_superposition(const GridSpec& grid, const InternalSpace& internal,
                                  const Eigen::VectorXcd& weights,
                                  const std::vector<Wavefunction>& spatial);

/// sum_{i,n} conj(A) B dx, summed in a fixed order so that
/// overlap(A, B) == conj(overlap(B, A)) bit for bit.
Complex overlap(const CompositeState& a, const CompositeState& b);
/// Overlap restricted to one internal branch.
Complex branch_overlap(const CompositeState& a, const CompositeState& b, Index level);
/// <psi_i | psi_j> between the spatial parts of two branches of the same state.
Complex cross_branch_overlap(const CompositeState& state, Index i, Index j);

struct BranchPhase {
  double phase;     ///< principal value in (-pi, pi]
  double fidelity;  ///< |<before_i|after_i>| / |before_i|^2
};

/// Phase of `after` relative to `before` on one branch; throws branch_deformed when the
/// two branches differ by more than a phase.
BranchPhase branch_phase(const CompositeState& before, const CompositeState& after, Index level);

/// Principal value of an angle in (-pi, pi].
double wrap_angle(double angle);

// Moments of a single spatial wavefunction (normalized internally by its own norm).
double position_mean(const Wavefunction& psi, const GridSpec& grid);
double position_second_moment(const Wavefunction& psi, const GridSpec& grid);
double momentum_mean(const Wavefunction& psi, const GridSpec& grid, double hbar);
double momentum_second_moment(const Wavefunction& psi, const GridSpec& grid, double hbar);

}  // namespace dynmass
