// dynmass: run the experiments from the command line.
//
//   dynmass run <experiment> [--config FILE] [--set k=v]... [--out DIR] [--format csv|json] [--jobs N]
//   dynmass list [--json]
//   dynmass validate --config FILE [--set k=v]...
//
// Exit status: 0 pass, 2 config error, 3 numerical precondition, 4 tolerance failure.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "dynmass/config.hpp"
#include "dynmass/report.hpp"

using namespace dynmass;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitTolerance = 4;

void print_list(bool as_json) {
  if (as_json) {
    json out = json::array();
    for (const ExperimentInfo& e : experiment_catalog())
      out.push_back({{"name", e.name}, {"description", e.description}, {"anchor", e.anchor}, {"keys", e.keys}});
    std::cout << out.dump(2) << "\n";
    return;
  }
  std::printf("%-22s %-44s %s\n", "experiment", "anchor", "description");
  for (const ExperimentInfo& e : experiment_catalog()) {
    std::printf("%-22s %-44s %s\n", e.name.c_str(), e.anchor.c_str(), e.description.c_str());
    std::string keys;
    for (const std::string& k : e.keys) keys += (keys.empty() ? "" : ", ") + k;
    std::printf("%-22s keys: %s\n", "", keys.c_str());
  }
}

int run(const std::string& experiment, const std::string& config_path,
        std::vector<std::string> overrides, const std::string& out, const std::string& format,
        int jobs) {
  json doc = load_config_document(config_path);
  if (doc.contains("experiment") && doc["experiment"] != experiment)
    throw ConfigError(ConfigErrorKind::invalid_value,
                      "config names experiment " + doc["experiment"].dump() + " but the command runs " + experiment);
  doc["experiment"] = experiment;
  if (!out.empty()) overrides.push_back("output=\"" + out + "\"");
  if (!format.empty()) overrides.push_back("format=\"" + format + "\"");
  if (jobs > 0) overrides.push_back("jobs=" + std::to_string(jobs));
  for (const std::string& o : overrides) apply_override(doc, o);
  const RunConfig config = parse_config(doc);

  const ExperimentResult result = run_experiment(config);
  const auto dir = write_artifacts(config, result);
  std::printf("%s: %s (%zu rows, %.3f s) -> %s\n", result.name.c_str(),
              result.passed() ? "PASS" : "FAIL", result.rows.size(), result.runtime_seconds,
              dir.string().c_str());
  if (result.passed()) return 0;
  if (const ResultRow* worst = result.worst_row()) {
    std::fprintf(stderr, "tolerance failure; worst row: %s measured=%s predicted=%s abs_error=%s tolerance=%s\n",
                 worst->label.c_str(), format_double(worst->measured).c_str(),
                 format_double(worst->predicted).c_str(), format_double(worst->abs_error).c_str(),
                 format_double(worst->tolerance).c_str());
  }
  return kExitTolerance;
}

int validate(const std::string& config_path, const std::vector<std::string>& overrides) {
  const RunConfig config = parse_config(load_config_document(config_path, overrides));
  json out = {{"resolved_config", to_json(config)}, {"defaulted", config.defaulted}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical mass-energy experiments"};
  app.require_subcommand(1);

  std::string experiment, config_path, out, format;
  std::vector<std::string> overrides;
  int jobs = 0;
  auto* run_cmd = app.add_subcommand("run", "run one experiment");
  run_cmd->add_option("experiment", experiment, "experiment name")->required();
  run_cmd->add_option("--config", config_path, "JSON config file");
  run_cmd->add_option("--set", overrides, "dotted.key=value override (repeatable)");
  run_cmd->add_option("--out", out, "output directory");
  run_cmd->add_option("--format", format, "rows format")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  bool list_json = false;
  auto* list_cmd = app.add_subcommand("list", "list experiments");
  list_cmd->add_flag("--json", list_json, "machine-readable output");

  std::string validate_path;
  std::vector<std::string> validate_overrides;
  auto* validate_cmd = app.add_subcommand("validate", "check a config and print it resolved");
  validate_cmd->add_option("--config", validate_path, "JSON config file")->required();
  validate_cmd->add_option("--set", validate_overrides, "dotted.key=value override (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    if (*list_cmd) {
      print_list(list_json);
      return 0;
    }
    if (*validate_cmd) return validate(validate_path, validate_overrides);
    return run(experiment, config_path, overrides, out, format, jobs);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "config error: invariant-violation: %s\n", e.what());
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "numerical precondition: %s\n", e.what());
    return kExitPrecondition;
  }
}
