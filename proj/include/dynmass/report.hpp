#pragma once

// Result persistence: RFC-4180 CSV with 17 significant digits, JSON rows, and run metadata.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dynmass/config.hpp"
#include "dynmass/experiments.hpp"

namespace dynmass {

inline constexpr const char* kVersion = "1.0.0";

/// "%.17g"; non-finite values become "nan", "inf" or "-inf".
std::string format_double(double value);

/// Quote a field when it holds a comma, quote, CR or LF; inner quotes are doubled.
std::string csv_field(const std::string& text);

/// label, inputs..., <q>_measured, <q>_predicted, abs_error, rel_error, tolerance,
/// tolerance_kind, passed, extras...
std::vector<std::string> csv_columns(const ExperimentResult& result);

/// Header plus one record per row, CRLF line endings. Non-finite numbers are empty fields.
void write_csv(std::ostream& out, const ExperimentResult& result);

nlohmann::json rows_json(const ExperimentResult& result);
nlohmann::json row_json(const ExperimentResult& result, const ResultRow& row);

nlohmann::json meta_json(const RunConfig& config, const ExperimentResult& result);

/// Creates <config.output>/<experiment>-<timestamp>[-k]/ with rows.{csv|json} and
/// meta.json; returns the directory.
std::filesystem::path write_artifacts(const RunConfig& config, const ExperimentResult& result);

}  // namespace dynmass
