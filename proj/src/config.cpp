#include "dynmass/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace dynmass {

using nlohmann::json;

std::string to_string(ConfigErrorKind kind) {
  switch (kind) {
    case ConfigErrorKind::missing_file: return "missing-file";
    case ConfigErrorKind::malformed: return "malformed-config";
    case ConfigErrorKind::unknown_key: return "unknown-key";
    case ConfigErrorKind::invalid_value: return "invalid-value";
    case ConfigErrorKind::invariant: return "invariant-violation";
  }
  return "config-error";
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const ExperimentInfo& info : experiment_catalog()) names.push_back(info.name);
  return names;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string nearest_key(const std::string& key, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_distance = std::max<std::size_t>(2, key.size() / 3) + 1;
  for (const std::string& c : candidates) {
    // compare against the last path component, suggest the full path
    const auto dot = c.rfind('.');
    const std::string leaf = dot == std::string::npos ? c : c.substr(dot + 1);
    const std::size_t d = edit_distance(key, leaf);
    if (d < best_distance) {
      best_distance = d;
      best = c;
    }
  }
  return best;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.experiment == b.experiment && a.setup == b.setup && a.bargmann == b.bargmann &&
         a.clock == b.clock && a.interferometer == b.interferometer && a.sweep == b.sweep &&
         a.wep == b.wep && a.frame == b.frame && a.tolerance == b.tolerance &&
         a.output == b.output && a.format == b.format && a.seed == b.seed;
}

// --- serialization ---------------------------------------------------------------

namespace {

json params_json(const RunConfig& c) {
  const std::string& e = c.experiment;
  if (e == "exp_bargmann") {
    json loops = json::array();
    for (const auto& [a, w] : c.bargmann.loops) loops.push_back({a, w});
    return {{"loops", loops}};
  }
  if (e == "exp_clock_dilation") {
    const auto& k = c.clock;
    return {{"v_over_c", k.v_over_c},
            {"gh_over_c2", k.gh_over_c2},
            {"delta_E", k.delta_E},
            {"mode", k.mode == ClockMode::wavepacket ? "wavepacket" : "semiclassical"},
            {"duration", k.duration},
            {"samples", k.samples},
            {"height", k.height},
            {"wavepacket_sigma", k.wavepacket_sigma},
            {"wavepacket_half_width", k.wavepacket_half_width}};
  }
  if (e == "exp_interferometer") {
    const auto& k = c.interferometer;
    return {{"heights", k.heights},   {"g", k.g},
            {"ramp_speed", k.ramp_speed}, {"duration", k.duration},
            {"segments", k.segments}, {"delta_E", k.delta_E}};
  }
  if (e == "exp_newtonian_sweep") {
    const auto& k = c.sweep;
    return {{"epsilons", k.epsilons}, {"p0", k.p0},          {"g", k.g},
            {"duration", k.duration}, {"stride", k.stride}};
  }
  if (e == "exp_wep") {
    const auto& k = c.wep;
    json kinds = json::array();
    for (const Hamiltonian& h : k.kinds) kinds.push_back(to_string(h));
    return {{"kinds", kinds},         {"g", k.g},          {"height", k.height},
            {"duration", k.duration}, {"stride", k.stride}};
  }
  if (e == "exp_frame_phase") {
    const auto& k = c.frame;
    return {{"speed", k.speed}, {"duration", k.duration}, {"segments", k.segments}};
  }
  return json::object();
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

json to_json(const RunConfig& c) {
  const Setup& s = c.setup;
  json doc = {
      {"experiment", c.experiment},
      {"physical", {{"hbar", s.params.hbar()}, {"c", s.params.c()}}},
      {"internal", {{"E0", s.internal.rest_energy()}, {"levels", to_std(s.internal.levels())}}},
      {"grid", {{"x_min", s.grid.x_min()}, {"x_max", s.grid.x_max()}, {"n_points", s.grid.n_points()}}},
      {"packet", {{"x0", s.x0}, {"p0", s.p0}, {"sigma", s.sigma}}},
      {"propagation", {{"dt", s.dt}}},
      {"params", params_json(c)},
      {"tolerance", c.tolerance ? json(*c.tolerance) : json(nullptr)},
      {"output", c.output},
      {"format", c.format == OutputFormat::json ? "json" : "csv"},
      {"jobs", s.jobs},
      {"seed", c.seed},
  };
  return doc;
}

// --- parsing ---------------------------------------------------------------------

namespace {

RunConfig defaults_for(const std::string& experiment) {
  RunConfig c;
  c.experiment = experiment;
  if (experiment == "exp_wep") c.setup.internal = InternalSpace(100.0, Eigen::Vector2d(-0.05, 0.05));
  return c;
}

void collect_leaves(const json& node, const std::string& prefix, std::vector<std::string>& out) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object() && !it->empty())
      collect_leaves(*it, path, out);
    else
      out.push_back(path);
  }
}

// Every key of `doc` must exist in `schema`; objects recurse. Records which schema
// leaves the document does not supply.
void check_keys(const json& doc, const json& schema, const std::string& prefix,
                const std::vector<std::string>& all_paths, std::vector<std::string>& defaulted) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!schema.contains(it.key())) {
      std::vector<std::string> siblings;
      for (auto s = schema.begin(); s != schema.end(); ++s)
        siblings.push_back(prefix.empty() ? s.key() : prefix + "." + s.key());
      std::string hint = nearest_key(it.key(), siblings);
      if (hint.empty()) hint = nearest_key(it.key(), all_paths);
      throw ConfigError(ConfigErrorKind::unknown_key,
                        "unknown key \"" + path + "\"" +
                            (hint.empty() ? "" : " (did you mean \"" + hint + "\"?)"));
    }
    const json& expected = schema.at(it.key());
    if (expected.is_object() && !it->is_object())
      throw ConfigError(ConfigErrorKind::invalid_value, path + " must be an object");
    if (expected.is_object()) check_keys(*it, expected, path, all_paths, defaulted);
  }
  for (auto s = schema.begin(); s != schema.end(); ++s) {
    const std::string path = prefix.empty() ? s.key() : prefix + "." + s.key();
    if (doc.contains(s.key())) continue;
    if (s->is_object() && !s->empty()) {
      check_keys(json::object(), *s, path, all_paths, defaulted);
    } else {
      defaulted.push_back(path);
    }
  }
}

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {}

  const json& at(const std::string& path) const {
    const json* node = &doc_;
    std::size_t start = 0;
    while (true) {
      const auto dot = path.find('.', start);
      const std::string part = path.substr(start, dot - start);
      node = node->is_array() ? &node->at(std::stoul(part)) : &node->at(part);
      if (dot == std::string::npos) return *node;
      start = dot + 1;
    }
  }

  double number(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_number()) fail(path, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    return d;
  }
  double positive(const std::string& path) const {
    const double d = number(path);
    if (!(d > 0.0)) fail(path, "must be positive");
    return d;
  }
  std::int64_t integer(const std::string& path, std::int64_t min) const {
    const json& v = at(path);
    if (!v.is_number_integer()) fail(path, "must be an integer");
    const auto i = v.get<std::int64_t>();
    if (i < min) fail(path, "must be at least " + std::to_string(min));
    return i;
  }
  std::string text(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_string()) fail(path, "must be a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_array()) fail(path, "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(path + "." + std::to_string(k)));
    return out;
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& why) {
    throw ConfigError(ConfigErrorKind::invalid_value, path + " " + why);
  }

 private:
  const json& doc_;
};

void require_step_multiple(double duration, double dt, const std::string& path) {
  const double steps = duration / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps || std::round(steps) < 1.0)
    Reader::fail(path, "must be a positive integer multiple of propagation.dt");
}

template <typename Fn>
auto invariant(const std::string& section, Fn make) {
  try {
    return make();
  } catch (const InvariantError& e) {
    throw ConfigError(ConfigErrorKind::invariant, section + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError(ConfigErrorKind::malformed, "config must be a JSON object");
  if (!doc.contains("experiment"))
    throw ConfigError(ConfigErrorKind::invalid_value, "experiment is required");
  if (!doc.at("experiment").is_string())
    throw ConfigError(ConfigErrorKind::invalid_value, "experiment must be a string");
  const std::string experiment = doc.at("experiment").get<std::string>();
  const std::vector<std::string> names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end()) {
    const std::string hint = nearest_key(experiment, names);
    throw ConfigError(ConfigErrorKind::invalid_value,
                      "unknown experiment \"" + experiment + "\"" +
                          (hint.empty() ? "" : " (did you mean \"" + hint + "\"?)"));
  }

  const json schema = to_json(defaults_for(experiment));
  std::vector<std::string> all_paths;
  collect_leaves(schema, "", all_paths);
  RunConfig c;
  c.experiment = experiment;
  check_keys(doc, schema, "", all_paths, c.defaulted);

  json merged = schema;
  merged.merge_patch(doc);
  // merge_patch drops null members; tolerance null means "not set"
  if (!merged.contains("tolerance")) merged["tolerance"] = nullptr;
  const Reader r(merged);

  const double hbar = r.positive("physical.hbar");
  const double c_light = r.positive("physical.c");
  const double E0 = r.positive("internal.E0");
  const std::vector<double> levels = r.numbers("internal.levels");
  if (levels.empty()) Reader::fail("internal.levels", "must not be empty");
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (!(std::abs(levels[k]) < E0))
      throw ConfigError(ConfigErrorKind::invariant,
                        "internal.levels." + std::to_string(k) + " = " + json(levels[k]).dump() +
                            " violates |E_i| < E0 = " + json(E0).dump());
  c.setup.internal = invariant("internal", [&] {
    return InternalSpace(E0, Eigen::Map<const Eigen::VectorXd>(levels.data(), static_cast<Index>(levels.size())));
  });
  c.setup.params = invariant("physical", [&] { return PhysicalParams(hbar, c_light, E0); });
  c.setup.grid = invariant("grid", [&] {
    return GridSpec(r.number("grid.x_min"), r.number("grid.x_max"), r.integer("grid.n_points", 1));
  });
  c.setup.x0 = r.number("packet.x0");
  c.setup.p0 = r.number("packet.p0");
  c.setup.sigma = r.positive("packet.sigma");
  c.setup.dt = r.positive("propagation.dt");
  c.setup.jobs = static_cast<unsigned>(r.integer("jobs", 1));
  c.seed = static_cast<std::uint64_t>(r.integer("seed", 0));
  c.output = r.text("output");
  const std::string format = r.text("format");
  if (format != "csv" && format != "json") Reader::fail("format", "must be \"csv\" or \"json\"");
  c.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  if (!merged.at("tolerance").is_null()) {
    const double tol = r.number("tolerance");
    if (tol < 0.0) Reader::fail("tolerance", "must be non-negative");
    c.tolerance = tol;
  }

  const double dt = c.setup.dt;
  if (experiment == "exp_bargmann") {
    c.bargmann.loops.clear();
    const json& loops = merged.at("params").at("loops");
    if (!loops.is_array() || loops.empty()) Reader::fail("params.loops", "must be a non-empty array of [a, w]");
    for (std::size_t k = 0; k < loops.size(); ++k) {
      const std::vector<double> pair = r.numbers("params.loops." + std::to_string(k));
      if (pair.size() != 2) Reader::fail("params.loops." + std::to_string(k), "must be [a, w]");
      c.bargmann.loops.emplace_back(pair[0], pair[1]);
    }
  } else if (experiment == "exp_clock_dilation") {
    auto& k = c.clock;
    k.v_over_c = r.numbers("params.v_over_c");
    k.gh_over_c2 = r.numbers("params.gh_over_c2");
    for (double v : k.v_over_c)
      if (!(std::abs(v) < 1.0)) Reader::fail("params.v_over_c", "entries must satisfy |v/c| < 1");
    if (k.v_over_c.empty() && k.gh_over_c2.empty()) Reader::fail("params", "needs at least one v_over_c or gh_over_c2 entry");
    k.delta_E = r.positive("params.delta_E");
    const std::string mode = r.text("params.mode");
    if (mode != "semiclassical" && mode != "wavepacket")
      Reader::fail("params.mode", "must be \"semiclassical\" or \"wavepacket\"");
    k.mode = mode == "wavepacket" ? ClockMode::wavepacket : ClockMode::semiclassical;
    k.duration = r.positive("params.duration");
    k.samples = static_cast<std::size_t>(r.integer("params.samples", 4));
    k.height = r.positive("params.height");
    k.wavepacket_sigma = r.positive("params.wavepacket_sigma");
    k.wavepacket_half_width = r.positive("params.wavepacket_half_width");
    if (k.mode == ClockMode::wavepacket) require_step_multiple(k.duration, dt, "params.duration");
  } else if (experiment == "exp_interferometer") {
    auto& k = c.interferometer;
    k.heights = r.numbers("params.heights");
    if (k.heights.empty()) Reader::fail("params.heights", "must not be empty");
    k.g = r.number("params.g");
    k.ramp_speed = r.positive("params.ramp_speed");
    k.duration = r.positive("params.duration");
    k.segments = r.integer("params.segments", 4);
    k.delta_E = r.positive("params.delta_E");
    for (double h : k.heights)
      if (2.0 * std::abs(h) / k.ramp_speed > k.duration)
        Reader::fail("params.heights", "ramps to " + std::to_string(h) + " do not fit in the duration");
  } else if (experiment == "exp_newtonian_sweep") {
    auto& k = c.sweep;
    k.epsilons = r.numbers("params.epsilons");
    if (k.epsilons.size() < 4)
      Reader::fail("params.epsilons", "sweep needs >= 4 points, got " + std::to_string(k.epsilons.size()));
    double lo = INFINITY, hi = 0.0;
    for (double e : k.epsilons) {
      if (!(std::abs(e) < 1.0)) Reader::fail("params.epsilons", "entries must satisfy |epsilon| < 1");
      if (e != 0.0) {
        lo = std::min(lo, std::abs(e));
        hi = std::max(hi, std::abs(e));
      }
    }
    if (!(hi >= 10.0 * lo * (1.0 - 1e-12)))
      Reader::fail("params.epsilons", "nonzero entries must span at least one decade");
    k.p0 = r.number("params.p0");
    k.g = r.number("params.g");
    k.duration = r.positive("params.duration");
    k.stride = static_cast<std::size_t>(r.integer("params.stride", 1));
    require_step_multiple(k.duration, dt, "params.duration");
  } else if (experiment == "exp_wep") {
    auto& k = c.wep;
    k.kinds.clear();
    const json& kinds = merged.at("params").at("kinds");
    if (!kinds.is_array() || kinds.empty()) Reader::fail("params.kinds", "must be a non-empty array of names");
    for (std::size_t j = 0; j < kinds.size(); ++j) {
      const std::string name = r.text("params.kinds." + std::to_string(j));
      const auto h = parse_hamiltonian(name);
      if (!h) Reader::fail("params.kinds." + std::to_string(j), "unknown Hamiltonian \"" + name + "\"");
      k.kinds.push_back(*h);
    }
    k.g = r.number("params.g");
    k.height = r.number("params.height");
    k.duration = r.positive("params.duration");
    k.stride = static_cast<std::size_t>(r.integer("params.stride", 1));
    require_step_multiple(k.duration, dt, "params.duration");
  } else if (experiment == "exp_frame_phase") {
    auto& k = c.frame;
    k.speed = r.number("params.speed");
    k.duration = r.positive("params.duration");
    k.segments = r.integer("params.segments", 4);
    if (k.segments % 2 != 0) Reader::fail("params.segments", "must be even");
    if (!(std::abs(k.speed) < c_light)) Reader::fail("params.speed", "must be below c");
  }
  return c;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(ConfigErrorKind::malformed, "override \"" + assignment + "\" is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError(ConfigErrorKind::malformed, "override key \"" + key + "\" is malformed");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    json& child = (*node)[part];
    if (child.is_null()) child = json::object();
    if (!child.is_object())
      throw ConfigError(ConfigErrorKind::invalid_value, "override \"" + key + "\" descends into a non-object");
    node = &child;
    start = dot + 1;
  }
}

json load_config_document(const std::string& path, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigErrorKind::missing_file, "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
      throw ConfigError(ConfigErrorKind::malformed, path + ": " + e.what());
    }
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return doc;
}

ExperimentResult run_experiment(const RunConfig& config) {
  const std::string& e = config.experiment;
  ExperimentResult result;
  if (e == "exp_bargmann") result = exp_bargmann(config.setup, config.bargmann);
  else if (e == "exp_clock_dilation") result = exp_clock_dilation(config.setup, config.clock);
  else if (e == "exp_interferometer") result = exp_interferometer(config.setup, config.interferometer);
  else if (e == "exp_newtonian_sweep") result = exp_newtonian_sweep(config.setup, config.sweep);
  else if (e == "exp_wep") result = exp_wep(config.setup, config.wep);
  else if (e == "exp_frame_phase") result = exp_frame_phase(config.setup, config.frame);
  else throw ConfigError(ConfigErrorKind::invalid_value, "unknown experiment \"" + e + "\"");
  if (config.tolerance) result.override_tolerance(*config.tolerance);
  return result;
}

}  // namespace dynmass
