#include "skewlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "skewlab/parallel.hpp"
#include "skewlab/skew.hpp"

namespace skewlab::runner {

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

std::string version() { return SKEWLAB_VERSION; }

namespace {

// Integers written in C++ initializers arrive signed, parsed ones unsigned.
bool is_non_negative_integer(const nlohmann::json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

bool is_positive_integer(const nlohmann::json& v) {
  return is_non_negative_integer(v) && v.get<std::uint64_t>() > 0;
}

}  // namespace

namespace detail {

Params::Params(const nlohmann::json& object, std::string prefix) : object_(object), prefix_(std::move(prefix)) {}

bool Params::has(const std::string& key) const { return object_.is_object() && object_.contains(key); }

const nlohmann::json& Params::raw(const std::string& key) const { return object_.at(key); }

double Params::number(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const auto& v = object_.at(key);
  if (!v.is_number()) throw ConfigError(path(key), "expected a number");
  return v.get<double>();
}

std::uint64_t Params::count(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const auto& v = object_.at(key);
  if (!is_positive_integer(v))
    throw ConfigError(path(key), "expected a positive integer");
  return v.get<std::uint64_t>();
}

std::vector<std::uint64_t> Params::horizons(const std::string& key, std::vector<std::uint64_t> fallback) const {
  if (!has(key)) return fallback;
  const auto& v = object_.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(path(key), "expected a non-empty list of horizons");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string here = path(key) + "[" + std::to_string(i) + "]";
    if (!is_positive_integer(v[i]))
      throw ConfigError(here, "expected a positive integer");
    out.push_back(v[i].get<std::uint64_t>());
    if (i > 0 && out[i] <= out[i - 1]) throw ConfigError(here, "horizons must be strictly increasing");
  }
  return out;
}

std::vector<double> Params::numbers(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  const auto& v = object_.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(path(key), "expected a non-empty list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(path(key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

void check_key(const nlohmann::json& object, const std::string& prefix, const Key& key) {
  const Params p(object, prefix);
  switch (key.kind) {
    case Kind::Number: p.number(key.name, 0.0); break;
    case Kind::Count: p.count(key.name, 1); break;
    case Kind::Horizons: p.horizons(key.name, {}); break;
    case Kind::Numbers: p.numbers(key.name, {}); break;
    case Kind::Json: break;
  }
}

void ScenarioContext::gate(const std::string& name, double value, const std::string& comparison,
                           double threshold) {
  bool pass = false;
  if (comparison == "<=") pass = value <= threshold;
  else if (comparison == ">=") pass = value >= threshold;
  else if (comparison == "<") pass = value < threshold;
  else if (comparison == ">") pass = value > threshold;
  else if (comparison == "==") pass = value == threshold;
  else throw std::logic_error("unknown gate comparison " + comparison);
  result.gates.push_back({name, value, comparison, threshold, pass});
}

}  // namespace detail

namespace {

const detail::Scenario& find_scenario(const std::string& name) {
  for (const auto& s : detail::registry())
    if (s.info.name == name) return s;
  throw ConfigError("scenario", "unknown scenario '" + name + "'");
}

void check_section(const nlohmann::json& object, const std::string& prefix, const std::vector<detail::Key>& keys) {
  if (!object.is_object()) throw ConfigError(prefix, "expected an object");
  for (const auto& [name, value] : object.items()) {
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const detail::Key& k) { return k.name == name; });
    if (it == keys.end()) throw ConfigError(prefix + "." + name, "unknown key");
    detail::check_key(object, prefix, *it);
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

}  // namespace

std::string ExperimentConfig::hash() const {
  const nlohmann::json canonical{{"scenario", scenario}, {"system", system}, {"params", params},
                                 {"thresholds", thresholds}, {"master_seed", master_seed}};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"scenario", scenario}, {"params", params}, {"thresholds", thresholds},
                   {"master_seed", master_seed}, {"threads", threads}};
  if (!system.is_null()) j["system"] = system;
  if (!output_dir.empty()) j["output_dir"] = output_dir;
  return j;
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("$", "config must be a JSON object");
  static const std::vector<std::string> known{"scenario", "system", "params", "thresholds",
                                              "master_seed", "output_dir", "threads"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown key");
  ExperimentConfig cfg;
  if (!j.contains("scenario") || !j.at("scenario").is_string()) throw ConfigError("scenario", "required string");
  cfg.scenario = j.at("scenario").get<std::string>();
  if (j.contains("system")) cfg.system = j.at("system");
  if (j.contains("params")) cfg.params = j.at("params");
  if (j.contains("thresholds")) cfg.thresholds = j.at("thresholds");
  if (j.contains("master_seed")) {
    if (!is_non_negative_integer(j.at("master_seed"))) throw ConfigError("master_seed", "expected a non-negative integer");
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ConfigError("output_dir", "expected a string");
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("threads")) {
    if (!is_non_negative_integer(j.at("threads"))) throw ConfigError("threads", "expected a non-negative integer");
    cfg.threads = j.at("threads").get<unsigned>();
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& cfg) {
  const auto& scenario = find_scenario(cfg.scenario);
  check_section(cfg.params, "params", scenario.param_keys);
  check_section(cfg.thresholds, "thresholds", scenario.threshold_keys);
  if (!cfg.system.is_null()) {
    if (!scenario.uses_system) throw ConfigError("system", "scenario '" + cfg.scenario + "' takes no system");
    try {
      (void)skew::system_from_json(cfg.system);
    } catch (const std::exception& e) {
      throw ConfigError("system", e.what());
    }
  }
}

bool ScenarioResult::all_pass() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.pass; });
}

const std::vector<ScenarioInfo>& list_scenarios() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> out;
    for (const auto& s : detail::registry()) out.push_back(s.info);
    return out;
  }();
  return infos;
}

ScenarioResult run(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto& scenario = find_scenario(cfg.scenario);
  ScenarioResult result;
  result.scenario = cfg.scenario;
  result.config_hash = cfg.hash();
  result.master_seed = cfg.master_seed;
  ExperimentConfig effective = cfg;
  if (effective.threads == 0) effective.threads = default_thread_count();
  detail::ScenarioContext ctx{effective, detail::Params(effective.params, "params"),
                              detail::Params(effective.thresholds, "thresholds"), result};
  const auto t0 = std::chrono::steady_clock::now();
  scenario.body(ctx);
  result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::string format_csv(const Table& table, const ScenarioResult& result) {
  std::ostringstream os;
  os << "# skewlab " << version() << " scenario=" << result.scenario << " config_hash=" << result.config_hash
     << " master_seed=" << result.master_seed << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_cell(row[c]);
    os << '\n';
  }
  return os.str();
}

std::vector<std::filesystem::path> write_outputs(const ScenarioResult& result, const ExperimentConfig& cfg,
                                                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& table : result.tables) {
    const auto path = dir / (table.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << format_csv(table, result);
    written.push_back(path);
    files.push_back(path.filename().string());
  }
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : result.gates)
    gates.push_back({{"name", g.name}, {"value", g.value}, {"comparison", g.comparison},
                     {"threshold", g.threshold}, {"pass", g.pass}});
  const nlohmann::json summary{{"skewlab_version", version()}, {"scenario", result.scenario},
                               {"config_hash", result.config_hash}, {"master_seed", result.master_seed},
                               {"config", cfg.to_json()}, {"gates", gates}, {"notes", result.notes},
                               {"tables", files}, {"runtime_seconds", result.runtime_seconds},
                               {"all_pass", result.all_pass()}};
  const auto path = dir / "summary.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << summary.dump(2) << '\n';
  written.push_back(path);
  return written;
}

}  // namespace skewlab::runner
