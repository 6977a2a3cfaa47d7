#pragma once

// Config-driven scenarios: JSON in, CSV tables and a JSON summary out.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace skewlab::runner {

/// Invalid configuration; `path()` names the offending field, e.g. "params.horizons".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ExperimentConfig {
  std::string scenario;
  nlohmann::json system;  // null: the scenario's default system
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json thresholds = nlohmann::json::object();
  std::uint64_t master_seed = 1;
  std::string output_dir;
  unsigned threads = 1;

  /// FNV-1a (hex) of the canonical dump of everything that affects results
  /// (scenario, system, params, thresholds, master_seed).
  std::string hash() const;
  nlohmann::json to_json() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Throws ConfigError for unknown scenarios, unknown or ill-typed params and
/// thresholds, and systems that do not parse.
void validate(const ExperimentConfig& cfg);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Gate {
  std::string name;
  double value = 0.0;
  std::string comparison;  // "<=", ">=", "<", ">", "=="
  double threshold = 0.0;
  bool pass = false;
};

struct ScenarioResult {
  std::string scenario;
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::vector<Table> tables;
  std::vector<Gate> gates;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;

  bool all_pass() const;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

/// Registered scenarios in a fixed order.
const std::vector<ScenarioInfo>& list_scenarios();

ScenarioResult run(const ExperimentConfig& cfg);

/// `# skewlab <version> scenario=<name> config_hash=<hash> master_seed=<seed>`
/// followed by the column header and rows.
std::string format_csv(const Table& table, const ScenarioResult& result);

/// Writes <name>.csv per table and summary.json into `dir` (created if
/// needed); returns the written paths.
std::vector<std::filesystem::path> write_outputs(const ScenarioResult& result, const ExperimentConfig& cfg,
                                                 const std::filesystem::path& dir);

std::string version();

// Used by the scenario registry.
namespace detail {

class Params {
 public:
  Params(const nlohmann::json& object, std::string prefix);

  double number(const std::string& key, double fallback) const;
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const;
  std::vector<std::uint64_t> horizons(const std::string& key, std::vector<std::uint64_t> fallback) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  bool has(const std::string& key) const;
  const nlohmann::json& raw(const std::string& key) const;
  std::string path(const std::string& key) const { return prefix_ + "." + key; }

 private:
  const nlohmann::json& object_;
  std::string prefix_;
};

struct ScenarioContext {
  const ExperimentConfig& cfg;
  Params params;
  Params thresholds;
  ScenarioResult& result;

  void gate(const std::string& name, double value, const std::string& comparison, double threshold);
};

enum class Kind { Number, Count, Horizons, Numbers, Json };

struct Key {
  std::string name;
  Kind kind;
};

/// Type check of one declared key; throws ConfigError.
void check_key(const nlohmann::json& object, const std::string& prefix, const Key& key);

struct Scenario {
  ScenarioInfo info;
  std::vector<Key> param_keys;
  std::vector<Key> threshold_keys;
  bool uses_system = false;
  std::function<void(ScenarioContext&)> body;
};

const std::vector<Scenario>& registry();

}  // namespace detail
}  // namespace skewlab::runner
