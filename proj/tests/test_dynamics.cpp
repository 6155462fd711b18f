#include <cmath>

#include "doctest.h"
#include "dynmass/dynamics.hpp"
#include "dynmass/numerics.hpp"
#include "dynmass/symmetry.hpp"

using namespace dynmass;

namespace {

const GridSpec kGrid(-40.0, 40.0, 2048);
const InternalSpace kTwoLevel(100.0, Eigen::Vector2d(0.0, 10.0));
const PhysicalParams kParams = PhysicalParams::for_internal(kTwoLevel, 1.0, 10.0);

const Hamiltonian kExact{HamiltonianKind::exact, false};
const Hamiltonian kDynamical{HamiltonianKind::dynamical_mass, false};
const Hamiltonian kDynamicalRest{HamiltonianKind::dynamical_mass, true};
const Hamiltonian kLowEnergy{HamiltonianKind::low_energy, false};
const Hamiltonian kSplit{HamiltonianKind::split, false};
const Hamiltonian kNewtonian{HamiltonianKind::newtonian, false};

CompositeState packet(double x0, double p0, const InternalSpace& internal = kTwoLevel,
                      double sigma = 1.0) {
  return make_superposition(kGrid, internal, Eigen::VectorXcd::Ones(internal.dim()),
                            {gaussian_packet(kGrid, x0, p0, sigma, 1.0)});
}

double infidelity(const CompositeState& a, const CompositeState& b) {
  return 1.0 - std::norm(overlap(a, b));
}

}  // namespace

TEST_CASE("kinetic closed forms") {
  CHECK(branch_kinetic(kNewtonian, kTwoLevel, kParams, 0)(0.0) == 0.0);
  CHECK(branch_kinetic(kNewtonian, kTwoLevel, kParams, 1)(2.0) == doctest::Approx(2.0));

  for (double p : {0.0, 0.3, 1.0, 5.0, 40.0}) {
    for (Index i = 0; i < 2; ++i) {
      const double le = branch_kinetic(kLowEnergy, kTwoLevel, kParams, i)(p);
      const double dm = branch_kinetic(kDynamicalRest, kTwoLevel, kParams, i)(p);
      CHECK(std::abs(le - dm) <= 1e-12 * std::abs(le));
    }
  }

  // extended precision: exact vs low-energy at p = 0.1 H_r / c
  const long double E0 = 100.0L, c = 10.0L, p = 0.1L * E0 / c;
  const long double exact = kinetic_energy(kExact, p, E0, 0.0L, c);
  const long double low = kinetic_energy(kLowEnergy, p, E0, 0.0L, c);
  CHECK(std::abs(static_cast<double>(exact / E0) - 1.004987562112089) < 1e-12);
  CHECK(std::abs(static_cast<double>(low / E0) - 1.005) < 1e-15);
  CHECK(static_cast<double>((low - exact) / exact) == doctest::Approx(1.2376e-5).epsilon(1e-3));
}

TEST_CASE("exact minus low-energy gap scales as (pc/E0)^4") {
  Eigen::VectorXd ratio(6), gap(6);
  for (int k = 0; k < 6; ++k) {
    const long double r = std::pow(10.0L, -3.0L + 0.4L * k);
    const long double p = r * 100.0L / 10.0L;
    const long double ex = kinetic_energy(kExact, p, 100.0L, 0.0L, 10.0L);
    const long double le = kinetic_energy(kLowEnergy, p, 100.0L, 0.0L, 10.0L);
    CHECK(le >= ex);
    ratio(k) = static_cast<double>(r);
    gap(k) = static_cast<double>(le - ex);
  }
  CHECK(log_log_slope(ratio, gap) == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("free Newtonian packet follows Ehrenfest") {
  const InternalSpace one(100.0, Eigen::VectorXd::Zero(1));
  const PhysicalParams params = PhysicalParams::for_internal(one, 1.0, 10.0);
  const CompositeState psi = packet(-2.0, 1.5, one);
  const CompositeState out = propagate(psi, kNewtonian, params, 1e-3, 1000);
  CHECK(std::abs(position_mean(out.branch(0), kGrid) - (-2.0 + 1.5 * 1.0)) < 1e-6);
  CHECK(std::abs(out.norm() - 1.0) < 1e-10);
}

TEST_CASE("uniform field: d<p>/dt = -(weight) g per branch") {
  const double g = 0.5;
  const PhysicalParams params = kParams.with_potential(Potential::uniform_field(g));
  for (const Hamiltonian& h : {kExact, kDynamical, kLowEnergy, kSplit, kNewtonian}) {
    CAPTURE(to_string(h));
    Eigen::VectorXd t(11);
    Eigen::MatrixXd p(11, 2);
    Index n = 0;
    propagate(packet(0.0, 0.0), h, params, 1e-3, 1000, 100,
              [&](std::size_t step, const CompositeState& s) {
                t(n) = 1e-3 * static_cast<double>(step);
                for (Index i = 0; i < 2; ++i) p(n, i) = momentum_mean(s.branch(i), kGrid, 1.0);
                ++n;
              });
    // finite-difference the measured <p>(t)
    for (Index i = 0; i < 2; ++i) {
      const double force = (p(10, i) - p(0, i)) / (t(10) - t(0));
      const double expected = -gravitational_mass(h, kTwoLevel, params, i) * g;
      CHECK(std::abs(force - expected) < 1e-6);
    }
  }
}

TEST_CASE("low-energy and dynamical-mass(+rest) are the same operator") {
  const PhysicalParams params = kParams.with_potential(Potential::uniform_field(0.3));
  const CompositeState psi = packet(1.0, 0.7);
  const CompositeState a = propagate(psi, kLowEnergy, params, 1e-3, 500);
  const CompositeState b = propagate(psi, kDynamicalRest, params, 1e-3, 500);
  CHECK(infidelity(a, b) < 1e-12);
}

TEST_CASE("unitarity and norm drift") {
  const PhysicalParams params = kParams.with_potential(Potential::uniform_field(0.2));
  for (const Hamiltonian& h : {kExact, kDynamicalRest, kLowEnergy, kSplit, kNewtonian}) {
    const CompositeState out = propagate(packet(0.0, 0.5), h, params, 2e-3, 500);
    CHECK(std::abs(out.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("Strang splitting is second order") {
  // harmonic well Phi = x^2 / 2, tabulated on the grid nodes
  const Eigen::ArrayXd x = kGrid.positions();
  std::vector<double> xs(x.data(), x.data() + x.size()), phi(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) phi[k] = 0.5 * xs[k] * xs[k];
  const InternalSpace one(100.0, Eigen::VectorXd::Zero(1));
  const PhysicalParams params =
      PhysicalParams::for_internal(one, 1.0, 10.0, Potential::tabulated(xs, phi));
  const CompositeState psi = packet(2.0, 0.0, one);
  const double T = 1.0, dt = 0.02;
  auto run = [&](double step) {
    return propagate(psi, kNewtonian, params, step, static_cast<std::size_t>(std::lround(T / step)));
  };
  const CompositeState ref = run(dt / 8.0);
  const double e1 = (run(dt).amplitudes() - ref.amplitudes()).norm();
  const double e2 = (run(dt / 2.0).amplitudes() - ref.amplitudes()).norm();
  CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("aliasing and boundary guards") {
  const InternalSpace one(100.0, Eigen::VectorXd::Zero(1));
  const PhysicalParams params = PhysicalParams::for_internal(one, 1.0, 10.0);
  try {
    propagate(packet(0.0, 20.0, one), kNewtonian, params, 0.1, 1);
    FAIL("expected aliasing");
  } catch (const PreconditionError& e) {
    CHECK(e.kind() == Precondition::aliasing);
  }
  try {
    propagate(packet(20.0, 10.0, one), kNewtonian, params, 1e-2, 300);
    FAIL("expected boundary violation");
  } catch (const PreconditionError& e) {
    CHECK(e.kind() == Precondition::boundary_violation);
  }
}

TEST_CASE("internal frequency") {
  CHECK(internal_frequency(1.0, 0.0, 0.0, kParams) == 1.0);
  CHECK(internal_frequency(1.0, 2.0, 0.0, kParams) == doctest::Approx(0.98));
  CHECK(internal_frequency(1.0, 0.0, 1.0, kParams) == doctest::Approx(1.01));
  CHECK_THROWS_AS(internal_frequency(1.0, 10.0, 0.0, kParams), PreconditionError);
}

TEST_CASE("proper time along closed paths") {
  const Trajectory still = Trajectory::stationary(1.0, 100);
  CHECK(proper_time(still, kParams).deficit == 0.0);

  // piecewise-constant speed 0.1c: exact deficit T (1 - sqrt(1 - 0.01))
  const Trajectory tri = Trajectory::triangular(1.0, 1.0, 1000);
  const ProperTime pt = proper_time(tri, kParams);
  CHECK(std::abs(pt.deficit - (1.0 - std::sqrt(0.99))) < 1e-10);
  CHECK(std::abs(pt.deficit_lowest_order - 5e-3) < 1e-12);
  CHECK(std::abs(pt.elapsed - std::sqrt(0.99)) < 1e-10);

  const ProperTime slow = proper_time(Trajectory::triangular(0.5, 1.0, 1000), kParams);
  CHECK(slow.deficit_lowest_order == doctest::Approx(pt.deficit_lowest_order / 4.0));

  CHECK_THROWS_AS(proper_time(Trajectory::triangular(20.0, 1.0, 100), kParams), PreconditionError);
  const Trajectory open = Trajectory::sampled(1.0, 100, [](double t) { return t; }, false);
  CHECK_THROWS_AS(proper_time(open, kParams), PreconditionError);
}

TEST_CASE("closed-path phase") {
  CHECK(closed_path_phase(Trajectory::stationary(1.0, 100), 1.0, kParams) == 0.0);
  const Trajectory tri = Trajectory::triangular(1.0, 1.0, 1000);
  // quadrature oracle: xi_dot^2 / 2 = 1/2 on every segment
  CHECK(std::abs(closed_path_phase(tri, 1.0, kParams) - 0.5) < 1e-12);
  CHECK(closed_path_phase(tri, 2.0, kParams) == doctest::Approx(2.0 * closed_path_phase(tri, 1.0, kParams)));
  const ProperTime pt = proper_time(tri, kParams);
  CHECK(std::abs(closed_path_phase(tri, 1.0, kParams) - kParams.rest_energy() * pt.deficit_lowest_order) < 1e-12);
}

TEST_CASE("trajectory differencing") {
  const double w = 2.0;
  const Trajectory osc = Trajectory::sampled(2.0, 2000, [&](double t) { return std::sin(w * t); }, false);
  const Eigen::VectorXd v = osc.point_velocities();
  const Eigen::VectorXd a = osc.point_accelerations();
  for (Index k = 0; k < osc.times().size(); k += 250) {
    const double t = osc.times()(k);
    CHECK(std::abs(v(k) - w * std::cos(w * t)) < 1e-5);
    CHECK(std::abs(a(k) + w * w * std::sin(w * t)) < 1e-4);
  }
  CHECK_THROWS_AS(Trajectory(Eigen::Vector4d(0, 1, 2, 4), Eigen::Vector4d::Zero(), false),
                  InvariantError);
}

TEST_CASE("frame transform") {
  const InternalSpace one(100.0, Eigen::VectorXd::Zero(1));
  const PhysicalParams params = PhysicalParams::for_internal(one, 1.0, 10.0);
  const CompositeState psi = packet(0.0, 0.3, one);

  SUBCASE("static path is the identity") {
    const CompositeState out = frame_transform(psi, Trajectory::stationary(1.0, 100), 0.5, params);
    CHECK((out.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("constant velocity equals boost(-w) after translation(-w t)") {
    const double w = 0.8, t = 1.5;
    const Trajectory line = Trajectory::sampled(2.0, 200, [&](double s) { return w * s; }, false);
    const CompositeState framed = frame_transform(psi, line, t, params);
    const CompositeState composed =
        apply_boost(apply_translation(psi, -w * t, params), -w, 0.0, params);
    CHECK(std::abs(overlap(composed, framed)) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("round trip") {
    const Trajectory osc =
        Trajectory::sampled(2.0, 400, [](double s) { return 1.5 * std::sin(2.0 * s); }, false);
    const CompositeState there = frame_transform(psi, osc, 0.7, params);
    const CompositeState back = inverse_frame_transform(there, osc, 0.7, params);
    CHECK(std::abs(overlap(back, psi)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("clock phase along a path") {
  const Trajectory still = Trajectory::stationary(2.0, 200);
  const Eigen::VectorXd phase = clock_phase_along(still, 1.5, kParams);
  CHECK(phase(200) == doctest::Approx(3.0));
  const Trajectory line = Trajectory::sampled(1.0, 100, [](double t) { return 2.0 * t; }, false);
  CHECK(clock_phase_along(line, 1.0, kParams)(100) == doctest::Approx(0.98));
}

TEST_CASE("Schrodinger residual") {
  const InternalSpace one(100.0, Eigen::VectorXd::Zero(1));
  const PhysicalParams params = PhysicalParams::for_internal(one, 1.0, 10.0);
  const CompositeState psi = packet(0.0, 0.5, one);
  const double T = 0.4;

  auto residuals = [&](double dt) {
    const auto steps = static_cast<std::size_t>(std::lround(T / dt));
    const auto lab = propagate_history(psi, kNewtonian, params, dt, steps);
    const Trajectory xi = Trajectory::sampled(
        T, static_cast<Index>(steps), [](double t) { return 1.0 - std::cos(3.0 * t); }, false);
    std::vector<CompositeState> primed;
    for (std::size_t k = 0; k < lab.size(); ++k)
      primed.push_back(frame_transform(lab[k], xi, dt * static_cast<double>(k), params, kNewtonian));
    return std::tuple{schrodinger_residual(lab, dt, kNewtonian, params),
                      schrodinger_residual(primed, dt, kNewtonian, params, xi),
                      schrodinger_residual(primed, dt, kNewtonian, params)};
  };
  const auto [lab1, with1, without1] = residuals(4e-3);
  const auto [lab2, with2, without2] = residuals(2e-3);
  const auto [lab3, with3, without3] = residuals(1e-3);
  CHECK(std::log2(lab1 / lab2) > 1.9);
  CHECK(std::log2(lab2 / lab3) > 1.9);
  CHECK(std::log2(with1 / with2) > 1.9);
  CHECK(std::log2(with2 / with3) > 1.9);
  CHECK(without3 > 0.5 * without1);
  CHECK(without3 > 10.0 * with3);

  CHECK_THROWS_AS(schrodinger_residual({psi, psi}, 1e-3, kNewtonian, params), PreconditionError);
}
