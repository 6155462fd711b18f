#include "dynmass/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dynmass/spectral.hpp"

namespace dynmass {

namespace {

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

double squared_norm_dx(const Wavefunction& psi, double dx) { return psi.squaredNorm() * dx; }

}  // namespace

GridSpec::GridSpec(double x_min, double x_max, Index n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points) {
  if (!(x_max > x_min)) throw InvariantError("grid: x_max must exceed x_min");
  if (n_points < 8 || !is_power_of_two(n_points))
    throw InvariantError("grid: n_points must be a power of two >= 8");
}

Eigen::ArrayXd GridSpec::positions() const {
  return x_min_ + dx() * Eigen::ArrayXd::LinSpaced(n_, 0.0, static_cast<double>(n_ - 1));
}

Eigen::ArrayXd GridSpec::momenta(double hbar) const {
  Eigen::ArrayXd p(n_);
  const double dp = 2.0 * std::numbers::pi * hbar / length();
  for (Index k = 0; k < n_; ++k) {
    const Index signed_k = k < n_ / 2 ? k : k - n_;
    p(k) = dp * static_cast<double>(signed_k);
  }
  return p;
}

InternalSpace::InternalSpace(double rest_energy, Eigen::VectorXd levels)
    : rest_energy_(rest_energy), levels_(std::move(levels)) {
  if (!(rest_energy > 0.0)) throw InvariantError("internal: E0 must be positive");
  if (levels_.size() == 0) throw InvariantError("internal: at least one level required");
  for (Index i = 0; i < levels_.size(); ++i) {
    if (!(std::abs(levels_(i)) < rest_energy)) {
      std::ostringstream msg;
      msg << "internal: levels[" << i << "] = " << levels_(i) << " violates |E_i| < E0 = "
          << rest_energy;
      throw InvariantError(msg.str());
    }
    if (i > 0 && levels_(i) < levels_(i - 1))
      throw InvariantError("internal: levels must be sorted ascending");
  }
}

Potential Potential::uniform_field(double g) { return Potential(UniformField{g}); }

Potential Potential::tabulated(std::vector<double> x, std::vector<double> phi) {
  if (x.size() < 2 || x.size() != phi.size())
    throw InvariantError("potential: tabulated needs >= 2 nodes with matching x and phi");
  for (std::size_t k = 1; k < x.size(); ++k)
    if (!(x[k] > x[k - 1])) throw InvariantError("potential: tabulated x must increase");
  return Potential(Tabulated{std::move(x), std::move(phi)});
}

double Potential::operator()(double x) const {
  struct Eval {
    double x;
    double operator()(const None&) const { return 0.0; }
    double operator()(const UniformField& f) const { return f.g * x; }
    double operator()(const Tabulated& t) const {
      if (x <= t.x.front()) return t.phi.front();
      if (x >= t.x.back()) return t.phi.back();
      const auto hi = std::upper_bound(t.x.begin(), t.x.end(), x);
      const auto k = static_cast<std::size_t>(hi - t.x.begin());
      const double s = (x - t.x[k - 1]) / (t.x[k] - t.x[k - 1]);
      return (1.0 - s) * t.phi[k - 1] + s * t.phi[k];
    }
  };
  return std::visit(Eval{x}, model_);
}

Eigen::ArrayXd Potential::sample(const GridSpec& grid) const {
  return grid.positions().unaryExpr([this](double x) { return (*this)(x); });
}

PhysicalParams::PhysicalParams(double hbar, double c, double rest_energy, Potential potential)
    : hbar_(hbar), c_(c), rest_energy_(rest_energy), potential_(std::move(potential)) {
  if (!(hbar > 0.0)) throw InvariantError("physical: hbar must be positive");
  if (!(c > 0.0)) throw InvariantError("physical: c must be positive");
  if (!(rest_energy > 0.0)) throw InvariantError("physical: rest energy must be positive");
}

CompositeState::CompositeState(GridSpec grid, InternalSpace internal, Eigen::MatrixXcd amplitudes)
    : grid_(std::move(grid)), internal_(std::move(internal)), amps_(std::move(amplitudes)) {
  if (amps_.rows() != internal_.dim() || amps_.cols() != grid_.n_points())
    throw InvariantError("state: amplitude shape must be (internal.dim, grid.n_points)");
  const double n = norm();
  if (!(std::abs(n - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg << "state: norm " << n << " differs from 1 by more than " << kNormTolerance;
    throw InvariantError(msg.str());
  }
}

CompositeState CompositeState::normalized(GridSpec grid, InternalSpace internal,
                                          Eigen::MatrixXcd amplitudes) {
  const double n = std::sqrt(amplitudes.squaredNorm() * grid.dx());
  if (!(n > 0.0) || !std::isfinite(n)) throw InvariantError("state: cannot normalize zero state");
  amplitudes /= n;
  return CompositeState(std::move(grid), std::move(internal), std::move(amplitudes));
}

double CompositeState::norm() const { return std::sqrt(amps_.squaredNorm() * grid_.dx()); }

double CompositeState::branch_probability(Index level) const {
  return amps_.row(level).squaredNorm() * grid_.dx();
}

double guard_width(const GridSpec& grid) { return grid.length() / 16.0; }

double edge_probability(const Wavefunction& psi, const GridSpec& grid) {
  const double guard = guard_width(grid);
  const Eigen::ArrayXd x = grid.positions();
  double edge = 0.0;
  for (Index n = 0; n < grid.n_points(); ++n) {
    if (x(n) < grid.x_min() + guard || x(n) >= grid.x_max() - guard) edge += std::norm(psi(n));
  }
  return edge * grid.dx();
}

double edge_probability(const CompositeState& state) {
  double edge = 0.0;
  for (Index i = 0; i < state.internal().dim(); ++i)
    edge += edge_probability(state.branch(i), state.grid());
  return edge;
}

void require_clearance(const CompositeState& state, const char* context) {
  constexpr double kMaxEdgeProbability = 1e-8;
  const double edge = edge_probability(state);
  if (edge > kMaxEdgeProbability) {
    std::ostringstream msg;
    msg << context << ": probability " << edge << " within " << guard_width(state.grid())
        << " of the grid ends";
    throw PreconditionError(Precondition::boundary_violation, msg.str());
  }
}

Wavefunction gaussian_packet(const GridSpec& grid, double x0, double p0, double sigma,
                             double hbar) {
  if (!(sigma >= 4.0 * grid.dx())) {
    std::ostringstream msg;
    msg << "sigma " << sigma << " < 4 dx = " << 4.0 * grid.dx();
    throw PreconditionError(Precondition::unresolved_width, msg.str());
  }
  if (x0 < grid.x_min() + 4.0 * sigma || x0 > grid.x_max() - 4.0 * sigma) {
    std::ostringstream msg;
    msg << "x0 = " << x0 << " must lie in [" << grid.x_min() + 4.0 * sigma << ", "
        << grid.x_max() - 4.0 * sigma << "]";
    throw PreconditionError(Precondition::packet_near_boundary, msg.str());
  }
  const Eigen::ArrayXd x = grid.positions();
  Wavefunction psi(grid.n_points());
  for (Index n = 0; n < grid.n_points(); ++n) {
    const double d = x(n) - x0;
    psi(n) = std::exp(Complex(-d * d / (4.0 * sigma * sigma), p0 * x(n) / hbar));
  }
  psi /= std::sqrt(squared_norm_dx(psi, grid.dx()));
  return psi;
}

CompositeState make_superposition(const GridSpec& grid, const InternalSpace& internal,
                                  const Eigen::VectorXcd& weights,
                                  const std::vector<Wavefunction>& spatial) {
  if (weights.size() != internal.dim())
    throw PreconditionError(Precondition::dimension_mismatch,
                            "weights has " + std::to_string(weights.size()) +
                                " entries, internal space has " + std::to_string(internal.dim()));
  if (spatial.size() != 1 && static_cast<Index>(spatial.size()) != internal.dim())
    throw PreconditionError(Precondition::dimension_mismatch,
                            "need one shared wavefunction or one per level");
  if (weights.squaredNorm() == 0.0)
    throw PreconditionError(Precondition::zero_weights, "all weights are zero");

  Eigen::MatrixXcd amps(internal.dim(), grid.n_points());
  for (Index i = 0; i < internal.dim(); ++i) {
    const Wavefunction& psi = spatial.size() == 1 ? spatial.front() : spatial[i];
    if (psi.size() != grid.n_points())
      throw PreconditionError(Precondition::dimension_mismatch,
                              "spatial wavefunction length differs from grid size");
    const double n = std::sqrt(squared_norm_dx(psi, grid.dx()));
    if (!(n > 0.0)) throw PreconditionError(Precondition::zero_weights, "zero spatial wavefunction");
    amps.row(i) = (weights(i) / n) * psi.transpose();
  }
  return CompositeState::normalized(grid, internal, std::move(amps));
}

namespace {

void require_same_space(const CompositeState& a, const CompositeState& b) {
  if (!(a.grid() == b.grid()) || !(a.internal() == b.internal()))
    throw PreconditionError(Precondition::incompatible_spaces,
                            "states live on different grids or internal spaces");
}

// conj(a) * b accumulated in index order with explicit real arithmetic; swapping the
// arguments negates every imaginary term exactly, so the sums are exact conjugates.
Complex ordered_inner(const Complex* a, const Complex* b, Index n, Index stride) {
  double re = 0.0;
  double im = 0.0;
  for (Index k = 0; k < n; ++k) {
    const Complex& u = a[k * stride];
    const Complex& v = b[k * stride];
    const double rr = u.real() * v.real();
    const double ii = u.imag() * v.imag();
    const double ri = u.real() * v.imag();
    const double ir = u.imag() * v.real();
    re += rr + ii;
    im += ri - ir;
  }
  return {re, im};
}

}  // namespace

Complex branch_overlap(const CompositeState& a, const CompositeState& b, Index level) {
  require_same_space(a, b);
  const Eigen::MatrixXcd& A = a.amplitudes();
  const Eigen::MatrixXcd& B = b.amplitudes();
  // column-major: consecutive grid points of one row are `rows` apart
  return ordered_inner(A.data() + level, B.data() + level, A.cols(), A.rows()) * a.grid().dx();
}

Complex overlap(const CompositeState& a, const CompositeState& b) {
  require_same_space(a, b);
  const Eigen::MatrixXcd& A = a.amplitudes();
  const Eigen::MatrixXcd& B = b.amplitudes();
  return ordered_inner(A.data(), B.data(), A.size(), 1) * a.grid().dx();
}

Complex cross_branch_overlap(const CompositeState& state, Index i, Index j) {
  const Eigen::MatrixXcd& A = state.amplitudes();
  return ordered_inner(A.data() + i, A.data() + j, A.cols(), A.rows()) * state.grid().dx();
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(angle, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

BranchPhase branch_phase(const CompositeState& before, const CompositeState& after, Index level) {
  require_same_space(before, after);
  constexpr double kMinBranchNorm = 1e-6;
  constexpr double kPopulationTolerance = 1e-8;
  constexpr double kFidelityTolerance = 1e-6;

  const double pb = before.branch_probability(level);
  const double pa = after.branch_probability(level);
  if (pb <= kMinBranchNorm || pa <= kMinBranchNorm)
    throw PreconditionError(Precondition::branch_deformed,
                            "branch " + std::to_string(level) + " is empty");
  if (std::abs(pb - pa) > kPopulationTolerance)
    throw PreconditionError(Precondition::branch_deformed,
                            "branch " + std::to_string(level) + " populations differ");

  const Complex o = branch_overlap(before, after, level);
  const double fidelity = std::abs(o) / pb;
  if (fidelity < 1.0 - kFidelityTolerance) {
    std::ostringstream msg;
    msg << "branch " << level << " fidelity " << fidelity << " < 1 - " << kFidelityTolerance;
    throw PreconditionError(Precondition::branch_deformed, msg.str());
  }
  double phase = std::arg(o);
  if (phase <= -std::numbers::pi) phase = std::numbers::pi;
  return {phase, fidelity};
}

double position_mean(const Wavefunction& psi, const GridSpec& grid) {
  const Eigen::ArrayXd density = psi.array().abs2();
  return (density * grid.positions()).sum() / density.sum();
}

double position_second_moment(const Wavefunction& psi, const GridSpec& grid) {
  const Eigen::ArrayXd density = psi.array().abs2();
  return (density * grid.positions().square()).sum() / density.sum();
}

namespace {

Eigen::ArrayXd momentum_density(const Wavefunction& psi, const GridSpec& grid) {
  Spectral spectral(grid.n_points());
  Wavefunction phi(grid.n_points());
  spectral.forward(psi, phi);
  return phi.array().abs2();
}

}  // namespace

double momentum_mean(const Wavefunction& psi, const GridSpec& grid, double hbar) {
  const Eigen::ArrayXd density = momentum_density(psi, grid);
  return (density * grid.momenta(hbar)).sum() / density.sum();
}

double momentum_second_moment(const Wavefunction& psi, const GridSpec& grid, double hbar) {
  const Eigen::ArrayXd density = momentum_density(psi, grid);
  return (density * grid.momenta(hbar).square()).sum() / density.sum();
}

}  // namespace dynmass
