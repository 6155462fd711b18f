#pragma once

// Reproducible experiments. Each one returns rows of (inputs, measured, predicted):
// measured values come only from simulation outputs, predicted values only from the
// closed forms in predictions.hpp; the two meet for the first time in the row.

#include <string>
#include <utility>
#include <vector>

#include "dynmass/dynamics.hpp"
#include "dynmass/hilbert.hpp"

namespace dynmass {

enum class ToleranceKind { absolute, relative };

struct ResultRow {
  std::string label;
  std::vector<double> inputs;
  double measured = 0.0;
  double predicted = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  ToleranceKind tolerance_kind = ToleranceKind::absolute;
  std::vector<double> extras;

  /// Error measured in units of the tolerance (> 1 fails).
  double score() const;
  bool passed() const { return score() <= 1.0; }
};

ResultRow make_row(std::string label, std::vector<double> inputs, double measured,
                   double predicted, double tolerance, ToleranceKind kind,
                   std::vector<double> extras = {});

struct ExperimentResult {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::string label_column = "label";
  std::vector<std::string> input_columns;
  std::string quantity;
  std::vector<std::string> extra_columns;
  std::vector<ResultRow> rows;
  double runtime_seconds = 0.0;

  bool passed() const;
  /// Row with the largest error-to-tolerance ratio, or nullptr when there are no rows.
  const ResultRow* worst_row() const;
  /// Replace every row's tolerance value (the kind stays).
  void override_tolerance(double tolerance);
};

/// Grid, internal levels, physics and the initial packet shared by the experiments.
struct Setup {
  GridSpec grid{-40.0, 40.0, 2048};
  InternalSpace internal{100.0, Eigen::Vector2d(0.0, 10.0)};
  PhysicalParams params{1.0, 10.0, 100.0};
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma = 1.0;
  double dt = 1e-3;
  unsigned jobs = 1;
  friend bool operator==(const Setup&, const Setup&) = default;
};

struct BargmannConfig {
  std::vector<std::pair<double, double>> loops{
      {0.5, 0.8}, {1.0, 0.5}, {-1.3, 0.7}, {2.0, -0.6}, {0.25, 2.0}};  // (a, w)
  double tolerance = 1e-8;
  friend bool operator==(const BargmannConfig&, const BargmannConfig&) = default;
};

enum class ClockMode { semiclassical, wavepacket };

struct ClockDilationConfig {
  std::vector<double> v_over_c{0.05, 0.1, 0.2};
  std::vector<double> gh_over_c2{1e-3, 1e-2};
  double delta_E = 1.0;
  ClockMode mode = ClockMode::semiclassical;
  double duration = 2.0;
  std::size_t samples = 200;
  double height = 100.0;           ///< packet / clock height for the potential rows
  double wavepacket_sigma = 5.0;
  double wavepacket_half_width = 50.0;
  double semiclassical_tolerance = 1e-6;
  double wavepacket_tolerance = 0.02;
  friend bool operator==(const ClockDilationConfig&, const ClockDilationConfig&) = default;
};

struct InterferometerConfig {
  std::vector<double> heights{0.5, 1.0, 2.0};
  double g = 1.0;
  double ramp_speed = 5.0;
  double duration = 2.0;
  Index segments = 20000;
  double delta_E = 50.0;
  double tolerance = 1e-6;
  friend bool operator==(const InterferometerConfig&, const InterferometerConfig&) = default;
};

struct NewtonianSweepConfig {
  std::vector<double> epsilons{1e-3, 3.1622776601683795e-3, 1e-2, 3.1622776601683795e-2, 1e-1};
  double p0 = 1.0;
  double g = 0.1;
  double duration = 1.0;
  std::size_t stride = 50;
  double slope_tolerance = 0.1;
  double row_tolerance = 0.01;
  friend bool operator==(const NewtonianSweepConfig&, const NewtonianSweepConfig&) = default;
};

struct WepConfig {
  std::vector<Hamiltonian> kinds{{HamiltonianKind::dynamical_mass, true},
                                 {HamiltonianKind::low_energy, false},
                                 {HamiltonianKind::split, false},
                                 {HamiltonianKind::newtonian, false}};
  double g = 1.0;
  double height = 10.0;
  double duration = 1.0;
  std::size_t stride = 10;
  double acceleration_tolerance = 1e-6;  ///< relative
  double universal_rate_tolerance = 1e-8;
  double rate_tolerance = 1e-6;          ///< relative, lowest-order clock shift
  friend bool operator==(const WepConfig&, const WepConfig&) = default;
};

struct FramePhaseConfig {
  double speed = 1.0;
  double duration = 1.0;
  Index segments = 1000;
  double tolerance = 1e-6;
  friend bool operator==(const FramePhaseConfig&, const FramePhaseConfig&) = default;
};

ExperimentResult exp_bargmann(const Setup& setup, const BargmannConfig& config);
ExperimentResult exp_clock_dilation(const Setup& setup, const ClockDilationConfig& config);
ExperimentResult exp_interferometer(const Setup& setup, const InterferometerConfig& config);
ExperimentResult exp_newtonian_sweep(const Setup& setup, const NewtonianSweepConfig& config);
ExperimentResult exp_wep(const Setup& setup, const WepConfig& config);
ExperimentResult exp_frame_phase(const Setup& setup, const FramePhaseConfig& config);

/// Interferometer over explicit paths: visibility of the internal clock states carried
/// along each path, compared with |cos(dE dtau / 2 hbar)| for the given proper-time
/// difference. Both paths must share endpoints and duration.
ResultRow interferometer_row(const Trajectory& path1, const Trajectory& path2, double delta_E,
                             double predicted_dtau, const PhysicalParams& params,
                             double tolerance);

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string anchor;
  std::vector<std::string> keys;
};

/// The six experiments in a fixed order.
const std::vector<ExperimentInfo>& experiment_catalog();

}  // namespace dynmass
