#include "dynmass/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace dynmass {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> csv_columns(const ExperimentResult& result) {
  std::vector<std::string> cols{result.label_column};
  cols.insert(cols.end(), result.input_columns.begin(), result.input_columns.end());
  for (const char* c : {"_measured", "_predicted"}) cols.push_back(result.quantity + c);
  for (const char* c : {"abs_error", "rel_error", "tolerance", "tolerance_kind", "passed"}) cols.push_back(c);
  cols.insert(cols.end(), result.extra_columns.begin(), result.extra_columns.end());
  return cols;
}

namespace {

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

const char* kind_name(ToleranceKind k) { return k == ToleranceKind::relative ? "relative" : "absolute"; }

json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &utc);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const ExperimentResult& result) {
  const std::vector<std::string> cols = csv_columns(result);
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << csv_field(cols[k]);
  out << "\r\n";
  for (const ResultRow& row : result.rows) {
    std::vector<std::string> fields{row.label};
    for (double v : row.inputs) fields.push_back(csv_number(v));
    for (double v : {row.measured, row.predicted, row.abs_error, row.rel_error, row.tolerance})
      fields.push_back(csv_number(v));
    fields.emplace_back(kind_name(row.tolerance_kind));
    fields.emplace_back(row.passed() ? "true" : "false");
    for (double v : row.extras) fields.push_back(csv_number(v));
    for (std::size_t k = 0; k < fields.size(); ++k) out << (k ? "," : "") << csv_field(fields[k]);
    out << "\r\n";
  }
}

json row_json(const ExperimentResult& result, const ResultRow& row) {
  json j;
  j[result.label_column] = row.label;
  for (std::size_t k = 0; k < row.inputs.size() && k < result.input_columns.size(); ++k)
    j[result.input_columns[k]] = number_json(row.inputs[k]);
  j[result.quantity + "_measured"] = number_json(row.measured);
  j[result.quantity + "_predicted"] = number_json(row.predicted);
  j["abs_error"] = number_json(row.abs_error);
  j["rel_error"] = number_json(row.rel_error);
  j["tolerance"] = number_json(row.tolerance);
  j["tolerance_kind"] = kind_name(row.tolerance_kind);
  j["passed"] = row.passed();
  for (std::size_t k = 0; k < row.extras.size() && k < result.extra_columns.size(); ++k)
    j[result.extra_columns[k]] = number_json(row.extras[k]);
  return j;
}

json rows_json(const ExperimentResult& result) {
  json rows = json::array();
  for (const ResultRow& row : result.rows) rows.push_back(row_json(result, row));
  return {{"experiment", result.name}, {"columns", csv_columns(result)}, {"rows", rows}};
}

json meta_json(const RunConfig& config, const ExperimentResult& result) {
  json params = json::object();
  for (const auto& [k, v] : result.parameters) params[k] = v;
  json tolerances = json::array();
  for (const ResultRow& row : result.rows)
    tolerances.push_back({{"label", row.label},
                          {"tolerance", number_json(row.tolerance)},
                          {"kind", kind_name(row.tolerance_kind)}});
  json meta = {{"experiment", result.name},
               {"version", kVersion},
               {"resolved_config", to_json(config)},
               {"defaulted", config.defaulted},
               {"parameters", params},
               {"tolerances", tolerances},
               {"passed", result.passed()},
               {"runtime_seconds", result.runtime_seconds},
               {"row_count", result.rows.size()}};
  if (const ResultRow* worst = result.worst_row()) {
    json w = row_json(result, *worst);
    w["score"] = number_json(worst->score());
    meta["worst_row"] = w;
  } else {
    meta["worst_row"] = nullptr;
  }
  return meta;
}

std::filesystem::path write_artifacts(const RunConfig& config, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(config.output) / (result.name + "-" + timestamp());
  fs::path dir = base;
  for (int k = 1; fs::exists(dir); ++k) dir = base.string() + "-" + std::to_string(k);
  fs::create_directories(dir);

  if (config.format == OutputFormat::csv) {
    std::ofstream out(dir / "rows.csv", std::ios::binary);
    write_csv(out, result);
  } else {
    std::ofstream out(dir / "rows.json");
    out << rows_json(result).dump(2) << "\n";
  }
  std::ofstream meta(dir / "meta.json");
  meta << meta_json(config, result).dump(2) << "\n";
  return dir;
}

}  // namespace dynmass
