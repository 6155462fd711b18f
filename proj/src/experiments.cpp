#include "dynmass/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

#include "dynmass/numerics.hpp"
#include "dynmass/predictions.hpp"
#include "dynmass/spectral.hpp"
#include "dynmass/symmetry.hpp"

namespace dynmass {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) out += (k ? "," : "") + num(values[k]);
  return out;
}

// Runs fn(0..n-1) on up to `jobs` threads; results keep index order.
template <typename Fn>
auto parallel_map(std::size_t n, unsigned jobs, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < n;) {
      try {
        slots[k].emplace(fn(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    out.push_back(std::move(*slots[k]));
  }
  return out;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::size_t step_count(double duration, double dt) {
  const double steps = duration / dt;
  const auto n = static_cast<std::size_t>(std::llround(steps));
  if (n == 0 || std::abs(steps - static_cast<double>(n)) > 1e-9 * steps)
    throw InvariantError("duration must be a positive integer multiple of dt");
  return n;
}

CompositeState shared_packet(const GridSpec& grid, const InternalSpace& internal, double x0,
                             double p0, double sigma, double hbar) {
  const Eigen::VectorXcd weights = Eigen::VectorXcd::Ones(internal.dim());
  return make_superposition(grid, internal, weights, {gaussian_packet(grid, x0, p0, sigma, hbar)});
}

PhysicalParams params_for(const Setup& setup, const InternalSpace& internal, Potential potential) {
  return PhysicalParams::for_internal(internal, setup.params.hbar(), setup.params.c(),
                                      std::move(potential));
}

// <dT_i/dp> over the momentum density of one branch.
double velocity_mean(Spectral& fft, const Wavefunction& psi, const Eigen::ArrayXd& velocity) {
  Wavefunction spectrum(psi.size());
  fft.forward(psi, spectrum);
  const Eigen::ArrayXd density = spectrum.array().abs2();
  return (density * velocity).sum() / density.sum();
}

double momentum_variance(const Wavefunction& psi, const GridSpec& grid, double hbar) {
  const double mean = momentum_mean(psi, grid, hbar);
  return momentum_second_moment(psi, grid, hbar) - mean * mean;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

double ResultRow::score() const {
  const double error = tolerance_kind == ToleranceKind::relative && predicted != 0.0 ? rel_error
                                                                                     : abs_error;
  if (!std::isfinite(error)) return std::numeric_limits<double>::infinity();
  if (tolerance <= 0.0) return error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return error / tolerance;
}

ResultRow make_row(std::string label, std::vector<double> inputs, double measured,
                   double predicted, double tolerance, ToleranceKind kind,
                   std::vector<double> extras) {
  ResultRow row;
  row.label = std::move(label);
  row.inputs = std::move(inputs);
  row.measured = measured;
  row.predicted = predicted;
  row.abs_error = std::abs(measured - predicted);
  row.rel_error = predicted != 0.0 ? row.abs_error / std::abs(predicted)
                                   : (row.abs_error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  row.tolerance = tolerance;
  row.tolerance_kind = kind;
  row.extras = std::move(extras);
  return row;
}

bool ExperimentResult::passed() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.passed(); });
}

const ResultRow* ExperimentResult::worst_row() const {
  const ResultRow* worst = nullptr;
  for (const ResultRow& r : rows)
    if (!worst || r.score() > worst->score()) worst = &r;
  return worst;
}

void ExperimentResult::override_tolerance(double tolerance) {
  for (ResultRow& r : rows) r.tolerance = tolerance;
}

// --- Bargmann loop ---------------------------------------------------------------

ExperimentResult exp_bargmann(const Setup& setup, const BargmannConfig& config) {
  const Stopwatch clock;
  ExperimentResult result;
  result.name = "exp_bargmann";
  result.label_column = "branch";
  result.input_columns = {"a", "w"};
  result.quantity = "phase";
  result.extra_columns = {"fidelity"};

  const InternalSpace& internal = setup.internal;
  const PhysicalParams params = params_for(setup, internal, Potential::none());
  const double hbar = params.hbar();
  const CompositeState state =
      shared_packet(setup.grid, internal, setup.x0, setup.p0, setup.sigma, hbar);

  const auto measured = parallel_map(config.loops.size(), setup.jobs, [&](std::size_t k) {
    return loop_phase(state, config.loops[k].first, config.loops[k].second, params);
  });

  for (std::size_t k = 0; k < config.loops.size(); ++k) {
    const auto [a, w] = config.loops[k];
    const GalileiElement<double> abstract = bargmann_loop_element(a, w);
    const double departure =
        std::max({std::abs(abstract.w), std::abs(abstract.a), std::abs(abstract.b)});
    result.rows.push_back(make_row("identity", {a, w}, departure, 0.0, 0.0,
                                   ToleranceKind::absolute, {1.0}));
    for (Index i = 0; i < internal.dim(); ++i) {
      const double mass = internal.branch_mass(i, params.c());
      result.rows.push_back(make_row(std::to_string(i + 1), {a, w}, measured[k][i].phase,
                                     predict::loop_phase(mass, a, w, hbar), config.tolerance,
                                     ToleranceKind::absolute, {measured[k][i].fidelity}));
    }
    const double m1 = internal.branch_mass(0, params.c());
    for (Index i = 1; i < internal.dim(); ++i) {
      const double rel = wrap_angle(measured[k][0].phase - measured[k][i].phase);
      const double fidelity = std::min(measured[k][0].fidelity, measured[k][i].fidelity);
      result.rows.push_back(make_row(
          "rel(1," + std::to_string(i + 1) + ")", {a, w}, rel,
          predict::relative_loop_phase(m1, internal.branch_mass(i, params.c()), a, w, hbar),
          config.tolerance, ToleranceKind::absolute, {fidelity}));
    }
  }

  std::vector<double> as, ws;
  for (const auto& [a, w] : config.loops) {
    as.push_back(a);
    ws.push_back(w);
  }
  result.parameters = {{"a", num_list(as)}, {"w", num_list(ws)}, {"tolerance", num(config.tolerance)}};
  result.runtime_seconds = clock.seconds();
  return result;
}

// --- clock time dilation ----------------------------------------------------------

namespace {

struct ClockCase {
  std::string label;
  double v_over_c;
  double gh_over_c2;
};

ResultRow semiclassical_clock(const Setup& setup, const ClockDilationConfig& config,
                              const ClockCase& cc) {
  const double c = setup.params.c();
  const double hbar = setup.params.hbar();
  const double omega0 = config.delta_E / hbar;
  const double v = cc.v_over_c * c;
  const double g = cc.gh_over_c2 == 0.0 ? 0.0 : cc.gh_over_c2 * c * c / config.height;
  const double height = cc.gh_over_c2 == 0.0 ? 0.0 : config.height;
  const PhysicalParams params = setup.params.with_potential(
      g == 0.0 ? Potential::none() : Potential::uniform_field(g));

  const auto segments = static_cast<Index>(config.samples);
  const Trajectory path = Trajectory::sampled(
      config.duration, segments, [=](double t) { return height + v * t; }, false);
  require_subluminal(path, c);
  const Eigen::VectorXd phase = clock_phase_along(path, omega0, params);
  const double omega = fit_line(path.times(), phase).slope;
  const double measured = omega / omega0 - 1.0;
  return make_row(cc.label, {cc.v_over_c, cc.gh_over_c2}, measured,
                  predict::clock_shift(v, g * height, c), config.semiclassical_tolerance,
                  ToleranceKind::relative, {measured, 0.0});
}

ResultRow wavepacket_clock(const Setup& setup, const ClockDilationConfig& config,
                           const ClockCase& cc) {
  const double c = setup.params.c();
  const double hbar = setup.params.hbar();
  const double E0 = setup.internal.rest_energy();
  const double omega0 = config.delta_E / hbar;
  const double v = cc.v_over_c * c;
  const double height = cc.gh_over_c2 == 0.0 ? 0.0 : config.height;
  const double g = cc.gh_over_c2 == 0.0 ? 0.0 : cc.gh_over_c2 * c * c / config.height;

  const InternalSpace internal(E0, Eigen::Vector2d(-0.5 * config.delta_E, 0.5 * config.delta_E));
  const PhysicalParams params = params_for(
      setup, internal, g == 0.0 ? Potential::none() : Potential::uniform_field(g));
  const double mass = params.mass();
  const double x0 = height;
  const double travel = v * config.duration;
  const double center = x0 + 0.5 * travel;
  const GridSpec grid(center - config.wavepacket_half_width, center + config.wavepacket_half_width,
                      setup.grid.n_points());
  const CompositeState start =
      shared_packet(grid, internal, x0, mass * v, config.wavepacket_sigma, hbar);

  const std::size_t steps = step_count(config.duration, setup.dt);
  const std::size_t stride = std::max<std::size_t>(1, steps / std::max<std::size_t>(config.samples, 1));
  std::vector<double> t, phase;
  propagate(start, {HamiltonianKind::low_energy, false}, params, setup.dt, steps, stride,
            [&](std::size_t step, const CompositeState& s) {
              t.push_back(setup.dt * static_cast<double>(step));
              phase.push_back(std::arg(cross_branch_overlap(s, 0, 1)));
            });
  if (t.size() < 3)
    throw PreconditionError(Precondition::too_few_samples, "clock fit needs at least 3 samples");

  const double omega = -fit_line(to_vector(t), unwrap(to_vector(phase))).slope;
  const double raw = omega / omega0 - 1.0;
  const double spread = momentum_variance(start.branch(0), grid, hbar) / (2.0 * mass * mass * c * c);
  const double predicted = predict::clock_shift(v, g * height, c);
  if (predicted != 0.0 && spread > 0.1 * std::abs(predicted))
    throw PreconditionError(Precondition::spread_dominated,
                            "momentum-spread correction " + num(spread) +
                                " exceeds 10% of the expected shift " + num(predicted));
  return make_row(cc.label, {cc.v_over_c, cc.gh_over_c2}, raw + spread, predicted,
                  config.wavepacket_tolerance, ToleranceKind::relative, {raw, spread});
}

}  // namespace

ExperimentResult exp_clock_dilation(const Setup& setup, const ClockDilationConfig& config) {
  const Stopwatch clock;
  ExperimentResult result;
  result.name = "exp_clock_dilation";
  result.label_column = "case";
  result.input_columns = {"v_over_c", "gh_over_c2"};
  result.quantity = "shift";
  result.extra_columns = {"raw_shift", "spread_correction"};
  if (!(config.delta_E > 0.0)) throw InvariantError("delta_E must be positive");
  if (!(config.height > 0.0)) throw InvariantError("height must be positive");

  std::vector<ClockCase> cases;
  for (double r : config.v_over_c) cases.push_back({"v", r, 0.0});
  for (double r : config.gh_over_c2) cases.push_back({"gh", 0.0, r});
  const bool wavepacket = config.mode == ClockMode::wavepacket;
  result.rows = parallel_map(cases.size(), setup.jobs, [&](std::size_t k) {
    return wavepacket ? wavepacket_clock(setup, config, cases[k])
                      : semiclassical_clock(setup, config, cases[k]);
  });

  result.parameters = {{"mode", wavepacket ? "wavepacket" : "semiclassical"},
                       {"v_over_c", num_list(config.v_over_c)},
                       {"gh_over_c2", num_list(config.gh_over_c2)},
                       {"delta_E", num(config.delta_E)},
                       {"duration", num(config.duration)},
                       {"height", num(config.height)}};
  result.runtime_seconds = clock.seconds();
  return result;
}

// --- two-path clock interferometer ------------------------------------------------

ResultRow interferometer_row(const Trajectory& path1, const Trajectory& path2, double delta_E,
                             double predicted_dtau, const PhysicalParams& params,
                             double tolerance) {
  if (path1.segments() != path2.segments() || path1.step() != path2.step() ||
      path1.positions()(0) != path2.positions()(0) ||
      path1.positions()(path1.segments()) != path2.positions()(path2.segments()))
    throw PreconditionError(Precondition::mismatched_endpoints,
                            "interferometer paths must share endpoints and duration");
  require_subluminal(path1, params.c());
  require_subluminal(path2, params.c());
  const double omega0 = delta_E / params.hbar();
  const double phi1 = clock_phase_along(path1, omega0, params)(path1.segments());
  const double phi2 = clock_phase_along(path2, omega0, params)(path2.segments());
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Vector2cd chi1(r, r * std::polar(1.0, -phi1));
  const Eigen::Vector2cd chi2(r, r * std::polar(1.0, -phi2));
  const double visibility = std::abs(chi1.dot(chi2));
  return make_row("", {}, visibility, predict::clock_visibility(delta_E, predicted_dtau, params.hbar()),
                  tolerance, ToleranceKind::absolute, {phi2 - phi1, predicted_dtau});
}

ExperimentResult exp_interferometer(const Setup& setup, const InterferometerConfig& config) {
  const Stopwatch clock;
  ExperimentResult result;
  result.name = "exp_interferometer";
  result.label_column = "path";
  result.input_columns = {"height", "g", "delta_E"};
  result.quantity = "visibility";
  result.extra_columns = {"clock_phase_difference", "dtau_predicted"};

  const PhysicalParams params = setup.params.with_potential(Potential::uniform_field(config.g));
  const double c = params.c();
  result.rows = parallel_map(config.heights.size(), setup.jobs, [&](std::size_t k) {
    const double h = config.heights[k];
    const Trajectory rest = Trajectory::stationary(config.duration, config.segments);
    const Trajectory raised =
        Trajectory::trapezoid(h, config.ramp_speed, config.duration, config.segments);
    const double dtau =
        predict::trapezoid_proper_time_gain(h, config.ramp_speed, config.duration, config.g, c);
    ResultRow row = interferometer_row(rest, raised, config.delta_E, dtau, params, config.tolerance);
    row.label = "trapezoid";
    row.inputs = {h, config.g, config.delta_E};
    return row;
  });

  result.parameters = {{"heights", num_list(config.heights)},
                       {"g", num(config.g)},
                       {"ramp_speed", num(config.ramp_speed)},
                       {"duration", num(config.duration)},
                       {"segments", std::to_string(config.segments)},
                       {"delta_E", num(config.delta_E)}};
  result.runtime_seconds = clock.seconds();
  return result;
}

// --- Newtonian-limit sweep --------------------------------------------------------

ExperimentResult exp_newtonian_sweep(const Setup& setup, const NewtonianSweepConfig& config) {
  const Stopwatch clock;
  ExperimentResult result;
  result.name = "exp_newtonian_sweep";
  result.label_column = "case";
  result.input_columns = {"epsilon", "duration"};
  result.quantity = "phase_discrepancy";
  result.extra_columns = {"infidelity"};

  const double E0 = setup.internal.rest_energy();
  const double hbar = setup.params.hbar();
  const double c = setup.params.c();
  const std::size_t steps = step_count(config.duration, setup.dt);
  const std::size_t stride = std::clamp<std::size_t>(config.stride, 1, steps);

  struct Measurement {
    double discrepancy;
    double infidelity;
  };
  const auto measured = parallel_map(config.epsilons.size(), setup.jobs, [&](std::size_t k) {
    const double level = config.epsilons[k] * E0;
    Eigen::Vector2d levels(0.0, level);
    if (level < 0.0) levels = Eigen::Vector2d(level, 0.0);
    const Index excited = level < 0.0 ? 0 : 1;
    const Index ground = 1 - excited;
    const InternalSpace internal(E0, levels);
    const PhysicalParams params = params_for(setup, internal, Potential::uniform_field(config.g));
    const CompositeState start =
        shared_packet(setup.grid, internal, setup.x0, config.p0, setup.sigma, hbar);

    auto run = [&](HamiltonianKind kind, std::vector<Complex>& z) {
      return propagate(start, {kind, false}, params, setup.dt, steps, stride,
                       [&](std::size_t, const CompositeState& s) {
                         z.push_back(cross_branch_overlap(s, ground, excited));
                       });
    };
    std::vector<Complex> z_split, z_newton;
    const CompositeState split = run(HamiltonianKind::split, z_split);
    const CompositeState newton = run(HamiltonianKind::newtonian, z_newton);
    Eigen::VectorXd raw(static_cast<Index>(z_split.size()));
    for (std::size_t j = 0; j < z_split.size(); ++j)
      raw(static_cast<Index>(j)) = std::arg(z_split[j] * std::conj(z_newton[j]));
    const Eigen::VectorXd tracked = unwrap(raw);
    return Measurement{tracked(tracked.size() - 1) - tracked(0),
                       1.0 - std::norm(overlap(split, newton))};
  });

  const double sigma_p = predict::gaussian_momentum_spread(setup.sigma, hbar);
  std::vector<double> eps_fit, disc_fit;
  for (std::size_t k = 0; k < config.epsilons.size(); ++k) {
    const double eps = config.epsilons[k];
    const double predicted = predict::split_newtonian_phase(eps * E0, E0, setup.x0, config.p0,
                                                            sigma_p, config.g, config.duration, hbar, c);
    result.rows.push_back(make_row("epsilon", {eps, config.duration}, measured[k].discrepancy,
                                   predicted, config.row_tolerance, ToleranceKind::relative,
                                   {measured[k].infidelity}));
    if (eps != 0.0) {
      eps_fit.push_back(std::abs(eps));
      disc_fit.push_back(measured[k].discrepancy);
    }
  }
  if (eps_fit.size() >= 2) {
    const double slope = log_log_slope(to_vector(eps_fit), to_vector(disc_fit));
    result.rows.push_back(make_row("slope", {std::numeric_limits<double>::quiet_NaN(), config.duration},
                                   slope, 1.0, config.slope_tolerance, ToleranceKind::absolute,
                                   {std::numeric_limits<double>::quiet_NaN()}));
  }

  result.parameters = {{"epsilons", num_list(config.epsilons)},
                       {"p0", num(config.p0)},
                       {"g", num(config.g)},
                       {"duration", num(config.duration)}};
  result.runtime_seconds = clock.seconds();
  return result;
}

// --- weak equivalence principle ---------------------------------------------------

ExperimentResult exp_wep(const Setup& setup, const WepConfig& config) {
  const Stopwatch clock;
  ExperimentResult result;
  result.name = "exp_wep";
  result.label_column = "row";
  result.input_columns = {"g", "level"};
  result.quantity = "value";

  const InternalSpace& internal = setup.internal;
  const PhysicalParams params = params_for(setup, internal, Potential::uniform_field(config.g));
  const double hbar = params.hbar();
  const std::size_t steps = step_count(config.duration, setup.dt);
  const std::size_t stride = std::clamp<std::size_t>(config.stride, 1, steps);
  const Index dim = internal.dim();
  const CompositeState start =
      shared_packet(setup.grid, internal, config.height, 0.0, setup.sigma, hbar);

  struct Measurement {
    std::vector<double> acceleration;
    double phase_rate;
  };
  const auto measured = parallel_map(config.kinds.size(), setup.jobs, [&](std::size_t k) {
    const Hamiltonian& h = config.kinds[k];
    Spectral fft(setup.grid.n_points());
    const Eigen::ArrayXd p = setup.grid.momenta(hbar);
    std::vector<Eigen::ArrayXd> velocity;
    for (Index i = 0; i < dim; ++i) {
      Eigen::ArrayXd v(p.size());
      for (Index n = 0; n < p.size(); ++n)
        v(n) = kinetic_velocity(h, p(n), internal.rest_energy(), internal.level(i), params.c());
      velocity.push_back(std::move(v));
    }
    std::vector<double> t, z_phase;
    std::vector<std::vector<double>> v_mean(static_cast<std::size_t>(dim));
    propagate(start, h, params, setup.dt, steps, stride,
              [&](std::size_t step, const CompositeState& s) {
                t.push_back(setup.dt * static_cast<double>(step));
                for (Index i = 0; i < dim; ++i)
                  v_mean[static_cast<std::size_t>(i)].push_back(
                      velocity_mean(fft, s.branch(i), velocity[static_cast<std::size_t>(i)]));
                if (dim > 1) z_phase.push_back(std::arg(cross_branch_overlap(s, 0, dim - 1)));
              });
    Measurement m;
    for (Index i = 0; i < dim; ++i)
      m.acceleration.push_back(fit_line(to_vector(t), to_vector(v_mean[static_cast<std::size_t>(i)])).slope);
    m.phase_rate = 0.0;
    if (dim > 1) {
      const Eigen::VectorXd tracked = unwrap(to_vector(z_phase));
      m.phase_rate = -(tracked(tracked.size() - 1) - tracked(0)) / (t.back() - t.front());
    }
    return m;
  });

  const double sigma_p = predict::gaussian_momentum_spread(setup.sigma, hbar);
  const double omega0 = dim > 1 ? (internal.level(dim - 1) - internal.level(0)) / hbar : 0.0;
  for (std::size_t k = 0; k < config.kinds.size(); ++k) {
    const Hamiltonian& h = config.kinds[k];
    const std::string name = to_string(h);
    for (Index i = 0; i < dim; ++i)
      result.rows.push_back(make_row(name + ":acceleration:" + std::to_string(i + 1),
                                     {config.g, internal.level(i)}, measured[k].acceleration[static_cast<std::size_t>(i)],
                                     -config.g, config.acceleration_tolerance, ToleranceKind::relative));
    // without the rest energy the dynamical-mass branches carry no internal clock
    const bool has_clock = h.kind != HamiltonianKind::dynamical_mass || h.include_rest_energy;
    if (dim < 2 || !has_clock || omega0 == 0.0) continue;
    const double shift = measured[k].phase_rate / omega0 - 1.0;
    const double level = internal.level(dim - 1) - internal.level(0);
    if (h.kind == HamiltonianKind::newtonian) {
      result.rows.push_back(make_row(name + ":clock_shift", {config.g, level}, shift, 0.0,
                                     config.universal_rate_tolerance, ToleranceKind::absolute));
    } else {
      result.rows.push_back(make_row(
          name + ":clock_shift", {config.g, level}, shift,
          predict::falling_clock_shift(config.height, config.g, config.duration, sigma_p,
                                       params.mass(), params.c()),
          config.rate_tolerance, ToleranceKind::relative));
    }
  }

  std::string kinds;
  for (const Hamiltonian& h : config.kinds) kinds += (kinds.empty() ? "" : ",") + to_string(h);
  result.parameters = {{"kinds", kinds},
                       {"g", num(config.g)},
                       {"height", num(config.height)},
                       {"duration", num(config.duration)}};
  result.runtime_seconds = clock.seconds();
  return result;
}

// --- frame phase along a closed path ---------------------------------------------

ExperimentResult exp_frame_phase(const Setup& setup, const FramePhaseConfig& config) {
  const Stopwatch clock;
  ExperimentResult result;
  result.name = "exp_frame_phase";
  result.label_column = "branch";
  result.input_columns = {"speed", "duration", "mass"};
  result.quantity = "phase";
  result.extra_columns = {"fidelity"};

  const InternalSpace& internal = setup.internal;
  const PhysicalParams params = params_for(setup, internal, Potential::none());
  const double hbar = params.hbar();
  const double c = params.c();
  const Trajectory path = Trajectory::triangular(config.speed, config.duration, config.segments);
  require_subluminal(path, c);

  const CompositeState psi =
      shared_packet(setup.grid, internal, setup.x0, setup.p0, setup.sigma, hbar);
  const double T = path.duration();
  const CompositeState primed = frame_transform(psi, path, T, params);
  const CompositeState chi = apply_boost(primed, path.velocity_at(T), 0.0, params);

  const double action = predict::triangular_action(config.speed, config.duration);
  const double deficit = predict::triangular_proper_time_deficit(config.speed, config.duration, c);
  const double beta2 = config.speed * config.speed / (c * c);
  std::vector<BranchPhase> phases;
  for (Index i = 0; i < internal.dim(); ++i) phases.push_back(branch_phase(chi, psi, i));

  for (Index i = 0; i < internal.dim(); ++i) {
    const double mass = internal.branch_mass(i, c);
    const std::vector<double> in{config.speed, config.duration, mass};
    result.rows.push_back(make_row(std::to_string(i + 1), in, phases[i].phase,
                                   predict::frame_phase(mass, action, hbar), config.tolerance,
                                   ToleranceKind::absolute, {phases[i].fidelity}));
    // the proper-time reading agrees only to lowest order in (v/c)^2
    result.rows.push_back(make_row("proper_time:" + std::to_string(i + 1), in, phases[i].phase,
                                   mass * c * c * deficit / hbar, beta2, ToleranceKind::relative,
                                   {phases[i].fidelity}));
  }
  const double m1 = internal.branch_mass(0, c);
  for (Index i = 1; i < internal.dim(); ++i) {
    const double mass = internal.branch_mass(i, c);
    result.rows.push_back(make_row(
        "rel(1," + std::to_string(i + 1) + ")", {config.speed, config.duration, mass - m1},
        wrap_angle(phases[0].phase - phases[i].phase),
        predict::frame_phase(m1, action, hbar) - predict::frame_phase(mass, action, hbar),
        config.tolerance, ToleranceKind::absolute,
        {std::min(phases[0].fidelity, phases[i].fidelity)}));
  }

  result.parameters = {{"speed", num(config.speed)},
                       {"duration", num(config.duration)},
                       {"segments", std::to_string(config.segments)}};
  result.runtime_seconds = clock.seconds();
  return result;
}

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog{
      {"exp_bargmann", "translate-boost loop: identity in the group, phase -M a w / hbar on states",
       "U(loop) = exp(-i M a w / hbar)", {"loops"}},
      {"exp_clock_dilation", "internal clock frequency shift versus speed and height",
       "omega = omega0 (1 - v^2/2c^2 + Phi/c^2)",
       {"v_over_c", "gh_over_c2", "delta_E", "mode", "duration", "samples", "height",
        "wavepacket_sigma", "wavepacket_half_width"}},
      {"exp_interferometer", "two-path visibility from the proper-time difference of the clock",
       "V = |cos(dE dtau / 2 hbar)|",
       {"heights", "g", "ramp_speed", "duration", "segments", "delta_E"}},
      {"exp_newtonian_sweep", "first-order split Hamiltonian converging to the Newtonian one",
       "H_split -> m c^2 + H0 + p^2/2m + m Phi", {"epsilons", "p0", "g", "duration", "stride"}},
      {"exp_wep", "free-fall acceleration and clock rates per internal state and Hamiltonian",
       "d<v>/dt = -g for every branch", {"kinds", "g", "height", "duration", "stride"}},
      {"exp_frame_phase", "phase picked up in a frame moving along a closed path",
       "phase = (M / hbar) int xi_dot^2 / 2 dt", {"speed", "duration", "segments"}},
  };
  return catalog;
}

}  // namespace dynmass
