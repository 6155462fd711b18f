#pragma once

// Run configuration: JSON schema, defaults, validation and experiment dispatch.
//
// {
//   "experiment": "exp_bargmann",
//   "physical":    {"hbar": 1, "c": 10},
//   "internal":    {"E0": 100, "levels": [0, 10]},
//   "grid":        {"x_min": -40, "x_max": 40, "n_points": 2048},
//   "packet":      {"x0": 0, "p0": 0, "sigma": 1},
//   "propagation": {"dt": 0.001},
//   "params":      {...experiment-specific keys...},
//   "tolerance": null, "output": "results", "format": "csv", "jobs": 1, "seed": 0
// }

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dynmass/experiments.hpp"

namespace dynmass {

enum class ConfigErrorKind { missing_file, malformed, unknown_key, invalid_value, invariant };

std::string to_string(ConfigErrorKind kind);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& what)
      : std::runtime_error(to_string(kind) + ": " + what), kind_(kind) {}
  ConfigErrorKind kind() const { return kind_; }

 private:
  ConfigErrorKind kind_;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string experiment;
  Setup setup;
  BargmannConfig bargmann;
  ClockDilationConfig clock;
  InterferometerConfig interferometer;
  NewtonianSweepConfig sweep;
  WepConfig wep;
  FramePhaseConfig frame;
  std::optional<double> tolerance;  ///< replaces every row tolerance when set
  std::string output = "results";
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 0;           ///< reserved; nothing in the core draws random numbers
  std::vector<std::string> defaulted;  ///< dotted paths filled from defaults

  /// Equality of the resolved configuration (ignores the `defaulted` bookkeeping).
  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Names accepted in "experiment".
std::vector<std::string> experiment_names();

/// Validate a JSON document and fill defaults. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);

/// Read a JSON file; `overrides` are "dotted.key=value" strings applied on top, with the
/// value parsed as JSON when possible and taken as a string otherwise.
nlohmann::json load_config_document(const std::string& path,
                                    const std::vector<std::string>& overrides = {});

void apply_override(nlohmann::json& doc, const std::string& assignment);

/// The fully resolved configuration; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

/// Closest key by edit distance, or empty when nothing is reasonably close.
std::string nearest_key(const std::string& key, const std::vector<std::string>& candidates);

std::size_t edit_distance(const std::string& a, const std::string& b);

ExperimentResult run_experiment(const RunConfig& config);

}  // namespace dynmass
