#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "skewlab/runner.hpp"

using namespace skewlab::runner;
using nlohmann::json;

namespace {

std::filesystem::path quick_config(const std::string& name) {
  return std::filesystem::path(SKEWLAB_CONFIG_DIR) / "quick" / (name + ".json");
}

const Table& table_named(const ScenarioResult& r, const std::string& name) {
  for (const auto& t : r.tables)
    if (t.name == name) return t;
  throw std::runtime_error("missing table " + name);
}

std::string config_error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

}  // namespace

TEST(Runner, ScenarioListIsStable) {
  const auto& a = list_scenarios();
  const auto& b = list_scenarios();
  ASSERT_GE(a.size(), 9u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].name, b[i].name);
  auto has = [&](const std::string& n) {
    return std::any_of(a.begin(), a.end(), [&](const ScenarioInfo& s) { return s.name == n; });
  };
  EXPECT_TRUE(has("thm4_llt"));
  EXPECT_TRUE(has("aaronson_z3"));
  EXPECT_TRUE(has("lemma51_bracket"));
}

TEST(Runner, RejectsBadConfigsWithFieldPath) {
  EXPECT_EQ(config_error_path({{"scenario", "thm4_llt"}, {"params", {{"horizons", json::array()}}}}),
            "params.horizons");
  EXPECT_EQ(config_error_path({{"scenario", "no_such_thing"}}), "scenario");
  EXPECT_EQ(config_error_path({{"scenario", "thm4_llt"}, {"params", {{"bogus", 1}}}}), "params.bogus");
  EXPECT_EQ(config_error_path({{"scenario", "thm4_llt"}, {"thresholds", {{"k_min", "low"}}}}), "thresholds.k_min");
  EXPECT_EQ(config_error_path({{"scenario", "thm4_llt"}, {"params", {{"horizons", {64, 32}}}}}).rfind("params.horizons", 0),
            0u);
  EXPECT_EQ(config_error_path({{"scenario", "lemma22_ratio"}, {"extra", 1}}), "extra");
  EXPECT_EQ(config_error_path({{"scenario", "thm4_llt"}}), "<accepted>");
}

TEST(Runner, HashCoversResultsOnly) {
  auto a = parse_config({{"scenario", "thm4_llt"}, {"params", {{"samples", 100}}}});
  auto b = a;
  b.threads = 8;
  b.output_dir = "/tmp/elsewhere";
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  auto c = a;
  c.params["samples"] = 101;
  EXPECT_NE(a.hash(), c.hash());
  auto d = a;
  d.master_seed = 2;
  EXPECT_NE(a.hash(), d.hash());
  EXPECT_EQ(parse_config(a.to_json()).hash(), a.hash());
}

TEST(Runner, RatioScenarioPasses) {
  auto r = run(parse_config({{"scenario", "lemma22_ratio"}, {"params", {{"pairs", 30}}}}));
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(table_named(r, "ratio_pairs").rows.size(), 60u);
}

TEST(Runner, AnchorTableMatchesSimpleWalkConstant) {
  auto r = run(load_config(quick_config("thm4_llt")));
  const auto& t = table_named(r, "simple_walk_anchor");
  ASSERT_EQ(t.rows.size(), 1u);
  // sqrt(n) P(S_n = 0) -> sqrt(2/pi) along even n
  const double oracle = std::sqrt(2.0 / std::acos(-1.0));
  EXPECT_NEAR(std::get<double>(t.rows[0][1]), oracle, 0.02 * oracle);
}

TEST(Runner, CsvHeaderAndFiles) {
  auto cfg = load_config(quick_config("lemma24_density"));
  auto r = run(cfg);
  const auto csv = format_csv(r.tables.front(), r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# skewlab " + version() + " scenario=lemma24_density config_hash=" + cfg.hash() +
                      " master_seed=" + std::to_string(cfg.master_seed));
  std::getline(in, line);
  EXPECT_EQ(line, "case,k,ratio");

  const auto dir = std::filesystem::temp_directory_path() / "skewlab_runner_test";
  std::filesystem::remove_all(dir);
  const auto paths = write_outputs(r, cfg, dir);
  EXPECT_EQ(paths.size(), r.tables.size() + 1);
  for (const auto& p : paths) EXPECT_TRUE(std::filesystem::exists(p)) << p;
  std::ifstream summary(dir / "summary.json");
  const auto j = json::parse(summary);
  EXPECT_EQ(j.at("config_hash"), cfg.hash());
  EXPECT_EQ(j.at("all_pass"), r.all_pass());
  std::filesystem::remove_all(dir);
}

TEST(Runner, CsvIndependentOfThreadCount) {
  for (const auto& info : list_scenarios()) {
    auto cfg = load_config(quick_config(info.name));
    cfg.threads = 1;
    const auto one = run(cfg);
    cfg.threads = 3;
    const auto three = run(cfg);
    ASSERT_EQ(one.tables.size(), three.tables.size()) << info.name;
    for (std::size_t i = 0; i < one.tables.size(); ++i)
      EXPECT_EQ(format_csv(one.tables[i], one), format_csv(three.tables[i], three))
          << info.name << "/" << one.tables[i].name;
  }
}
