#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dynmass/experiments.hpp"
#include "dynmass/predictions.hpp"
#include "oracles.hpp"

using namespace dynmass;

namespace {

const ResultRow& find_row(const ExperimentResult& r, const std::string& label, std::size_t nth = 0) {
  for (const ResultRow& row : r.rows)
    if (row.label == label && nth-- == 0) return row;
  FAIL("no row " << label);
  return r.rows.front();
}

bool bit_identical(const ExperimentResult& a, const ExperimentResult& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const ResultRow &x = a.rows[k], &y = b.rows[k];
    if (x.label != y.label || x.inputs != y.inputs || x.measured != y.measured ||
        x.predicted != y.predicted || x.extras != y.extras)
      return false;
  }
  return true;
}

Setup small_setup() {
  Setup s;
  s.grid = GridSpec(-20.0, 20.0, 512);
  return s;
}

}  // namespace

TEST_CASE("row scoring") {
  const ResultRow abs_row = make_row("a", {}, 1.0, 1.5, 1.0, ToleranceKind::absolute);
  CHECK(abs_row.abs_error == 0.5);
  CHECK(abs_row.score() == 0.5);
  CHECK(abs_row.passed());
  const ResultRow rel_row = make_row("r", {}, 1.1, 1.0, 0.05, ToleranceKind::relative);
  CHECK(!rel_row.passed());
  // relative tolerance falls back to absolute when the prediction is zero
  const ResultRow zero = make_row("z", {}, 1e-9, 0.0, 1e-8, ToleranceKind::relative);
  CHECK(zero.passed());
  CHECK(std::isinf(zero.rel_error));
  CHECK(make_row("t", {}, 0.0, 0.0, 0.0, ToleranceKind::absolute).passed());
  CHECK(!make_row("t", {}, 1e-300, 0.0, 0.0, ToleranceKind::absolute).passed());

  ExperimentResult r;
  r.rows = {abs_row, make_row("b", {}, 1.0, 1.9, 1.0, ToleranceKind::absolute)};
  CHECK(r.passed());
  CHECK(r.worst_row()->label == "b");
  r.override_tolerance(0.0);
  CHECK(!r.passed());
  CHECK(!ExperimentResult{}.passed());
}

TEST_CASE("exp_bargmann") {
  Setup setup;
  const ExperimentResult r = exp_bargmann(setup, {});
  CHECK(r.passed());
  CHECK(r.rows.size() == 5 * 4);
  CHECK(find_row(r, "identity").measured == 0.0);

  SUBCASE("relative phase 0.04 against the dense oracle") {
    const ResultRow& rel = find_row(r, "rel(1,2)");
    CHECK(rel.inputs == std::vector<double>{0.5, 0.8});
    const double d1 = oracle::dense_loop_phase(-8.0, 8.0, 64, 1.0, 1.0, 0.5, 0.8, 1.0);
    const double d2 = oracle::dense_loop_phase(-8.0, 8.0, 64, 1.0, 1.1, 0.5, 0.8, 1.0);
    CHECK(std::abs(rel.measured - (d1 - d2)) < 1e-8);
    CHECK(std::abs(rel.measured - 0.04) < 1e-8);
  }
  SUBCASE("equal masses give no relative phase") {
    Setup same;
    same.internal = InternalSpace(100.0, Eigen::Vector2d(10.0, 10.0));
    const ExperimentResult eq = exp_bargmann(same, {});
    for (const ResultRow& row : eq.rows)
      if (row.label == "rel(1,2)") CHECK(std::abs(row.measured) < 1e-12);
  }
  SUBCASE("deterministic, also with worker threads") {
    Setup threaded;
    threaded.jobs = 3;
    CHECK(bit_identical(r, exp_bargmann(setup, {})));
    CHECK(bit_identical(r, exp_bargmann(threaded, {})));
  }
  SUBCASE("predicted column is the closed form alone") {
    for (const ResultRow& row : r.rows)
      if (row.label == "2")
        CHECK(row.predicted == predict::loop_phase(1.1, row.inputs[0], row.inputs[1], 1.0));
  }
}

TEST_CASE("exp_clock_dilation semiclassical") {
  Setup setup;
  ClockDilationConfig cfg;
  cfg.v_over_c = {0.0, 0.05, 0.1, 0.2};
  cfg.gh_over_c2 = {1e-3, 1e-2};
  const ExperimentResult r = exp_clock_dilation(setup, cfg);
  CHECK(r.passed());
  CHECK(std::abs(r.rows[0].measured) < 1e-12);
  CHECK(r.rows[2].measured == doctest::Approx(-5e-3).epsilon(1e-9));
  CHECK(r.rows[5].measured == doctest::Approx(1e-2).epsilon(1e-9));
}

TEST_CASE("exp_clock_dilation wavepacket") {
  Setup setup;
  setup.grid = GridSpec(-40.0, 40.0, 1024);
  ClockDilationConfig cfg;
  cfg.mode = ClockMode::wavepacket;
  cfg.v_over_c = {0.1};
  cfg.gh_over_c2 = {1e-2};
  const ExperimentResult r = exp_clock_dilation(setup, cfg);
  CHECK(r.passed());
  for (const ResultRow& row : r.rows) {
    CHECK(row.rel_error < 0.02);
    CHECK(row.extras[1] < 0.1 * std::abs(row.predicted));  // spread correction
  }

  SUBCASE("spread-dominated packets are rejected") {
    ClockDilationConfig narrow = cfg;
    narrow.wavepacket_sigma = 0.5;
    narrow.v_over_c = {0.05};
    narrow.gh_over_c2 = {};
    try {
      exp_clock_dilation(setup, narrow);
      FAIL("expected spread-dominated");
    } catch (const PreconditionError& e) {
      CHECK(e.kind() == Precondition::spread_dominated);
    }
  }
}

TEST_CASE("exp_interferometer") {
  Setup setup;
  const ExperimentResult r = exp_interferometer(setup, {});
  CHECK(r.passed());

  const PhysicalParams params = setup.params.with_potential(Potential::uniform_field(1.0));
  const Trajectory rest = Trajectory::stationary(2.0, 20000);
  SUBCASE("identical paths") {
    const ResultRow row = interferometer_row(rest, rest, 50.0, 0.0, params, 1e-6);
    CHECK(row.measured == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(row.passed());
  }
  const Trajectory raised = Trajectory::trapezoid(1.0, 5.0, 2.0, 20000);
  const double dtau = predict::trapezoid_proper_time_gain(1.0, 5.0, 2.0, 1.0, 10.0);
  SUBCASE("dE dtau / hbar = pi closes the interferometer") {
    const ResultRow row = interferometer_row(rest, raised, std::numbers::pi / std::abs(dtau), dtau, params, 1e-6);
    CHECK(row.passed());
    CHECK(row.measured < 1e-6);
  }
  SUBCASE("dE dtau / hbar = pi / 2 gives cos(pi / 4)") {
    const ResultRow row =
        interferometer_row(rest, raised, 0.5 * std::numbers::pi / std::abs(dtau), dtau, params, 1e-6);
    CHECK(row.passed());
    CHECK(std::abs(row.measured - std::sqrt(0.5)) < 1e-6);
  }
  SUBCASE("mismatched endpoints") {
    const Trajectory shorter = Trajectory::stationary(1.0, 20000);
    try {
      interferometer_row(rest, shorter, 1.0, 0.0, params, 1e-6);
      FAIL("expected mismatched endpoints");
    } catch (const PreconditionError& e) {
      CHECK(e.kind() == Precondition::mismatched_endpoints);
    }
  }
}

TEST_CASE("exp_newtonian_sweep") {
  Setup setup = small_setup();
  SUBCASE("epsilon = 0: identical Hamiltonians") {
    NewtonianSweepConfig cfg;
    cfg.epsilons = {0.0};
    const ExperimentResult r = exp_newtonian_sweep(setup, cfg);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].extras[0] < 1e-10);
    CHECK(std::abs(r.rows[0].measured) < 1e-10);
  }
  SUBCASE("first-order convergence") {
    const ExperimentResult r = exp_newtonian_sweep(setup, {});
    CHECK(r.passed());
    const ResultRow& slope = find_row(r, "slope");
    CHECK(std::abs(slope.measured - 1.0) < 0.1);
    // infidelity is second order
    CHECK(r.rows[4].extras[0] / r.rows[0].extras[0] == doctest::Approx(1e4).epsilon(0.05));
  }
  SUBCASE("phase discrepancy accumulates linearly in time") {
    NewtonianSweepConfig cfg;
    cfg.epsilons = {1e-2};
    cfg.g = 0.0;
    const double one = exp_newtonian_sweep(setup, cfg).rows[0].measured;
    cfg.duration = 2.0;
    const double two = exp_newtonian_sweep(setup, cfg).rows[0].measured;
    CHECK(two / one == doctest::Approx(2.0).epsilon(1e-3));
  }
}

TEST_CASE("exp_wep") {
  Setup setup;
  setup.internal = InternalSpace(100.0, Eigen::Vector2d(-0.05, 0.05));
  const ExperimentResult r = exp_wep(setup, {});
  CHECK(r.passed());
  const ResultRow& newton1 = find_row(r, "newtonian:acceleration:1");
  const ResultRow& newton2 = find_row(r, "newtonian:acceleration:2");
  CHECK(std::abs(newton1.measured - newton2.measured) < 1e-12);
  // the internal clock feels the height under low_energy, not under newtonian
  CHECK(find_row(r, "low_energy:clock_shift").measured > 0.09);
  CHECK(std::abs(find_row(r, "newtonian:clock_shift").measured) < 1e-8);

  SUBCASE("no field, no acceleration") {
    WepConfig cfg;
    cfg.g = 0.0;
    cfg.duration = 0.2;
    const ExperimentResult free = exp_wep(setup, cfg);
    for (const ResultRow& row : free.rows)
      if (row.label.find("acceleration") != std::string::npos) CHECK(std::abs(row.measured) < 1e-10);
  }
}

TEST_CASE("exp_frame_phase") {
  Setup setup;
  const ExperimentResult r = exp_frame_phase(setup, {});
  CHECK(r.passed());
  CHECK(std::abs(find_row(r, "1").measured - 0.5) < 1e-6);
  CHECK(std::abs(find_row(r, "2").measured - 0.55) < 1e-6);
  // proper-time reading differs at relative order (v/c)^2 / 4
  CHECK(find_row(r, "proper_time:1").rel_error == doctest::Approx(0.0025).epsilon(0.01));

  SUBCASE("no motion, no phase") {
    FramePhaseConfig still;
    still.speed = 0.0;
    for (const ResultRow& row : exp_frame_phase(setup, still).rows)
      if (row.label == "1" || row.label == "2") CHECK(std::abs(row.measured) < 1e-14);
  }
  SUBCASE("relative phase matches the Bargmann loop of equal area") {
    for (auto [a, w] : {std::pair{0.5, 0.8}, {1.0, 0.5}, {2.0, 0.6}}) {
      BargmannConfig loop;
      loop.loops = {{a, w}};
      FramePhaseConfig tri;
      tri.speed = w;
      tri.duration = 2.0 * a / w;  // S = w^2 T / 2 = a w
      const double bargmann_rel = find_row(exp_bargmann(setup, loop), "rel(1,2)").measured;
      const double frame_rel = find_row(exp_frame_phase(setup, tri), "rel(1,2)").measured;
      CHECK(std::abs(bargmann_rel + frame_rel) < 1e-6);
    }
  }
}

TEST_CASE("catalog") {
  const auto& c = experiment_catalog();
  REQUIRE(c.size() == 6);
  CHECK(c[0].name == "exp_bargmann");
  CHECK(c[5].name == "exp_frame_phase");
}
