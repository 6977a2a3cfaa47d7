#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "skewlab/circle.hpp"
#include "skewlab/distribution.hpp"
#include "skewlab/ergodic.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/runner.hpp"
#include "skewlab/sft.hpp"
#include "skewlab/skew.hpp"

namespace skewlab::runner::detail {
namespace {

using circle::SubgroupClass;

Cell num(double v) { return Cell{v}; }
Cell integer(std::uint64_t v) { return Cell{static_cast<std::int64_t>(v)}; }
Cell integer(std::int64_t v) { return Cell{v}; }
Cell text(std::string s) { return Cell{std::move(s)}; }

std::vector<std::uint64_t> powers_of_two(unsigned from, unsigned to) {
  std::vector<std::uint64_t> out;
  for (unsigned e = from; e <= to; ++e) out.push_back(std::uint64_t{1} << e);
  return out;
}

skew::SkewSystem system_of(const ScenarioContext& ctx) {
  if (ctx.cfg.system.is_null())
    return skew::SkewSystem::theorem2(circle::RotationNumber::golden_mean(), circle::RoofFunction::cosine(1.0));
  return skew::system_from_json(ctx.cfg.system);
}

std::vector<double> parse_numbers(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

sft::Cylinder parse_cylinder(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("symbols")) throw ConfigError(path, "expected {\"start\": n, \"symbols\": [...]}");
  sft::Cylinder c;
  c.start = j.value("start", 0L);
  for (const auto& s : j.at("symbols")) c.symbols.push_back(s.get<int>());
  return c;
}

sft::SftSpec spec_param(const ScenarioContext& ctx, const std::string& key, sft::SftSpec fallback) {
  if (!ctx.params.has(key)) return fallback;
  try {
    return sft::spec_from_json(ctx.params.raw(key));
  } catch (const std::exception& e) {
    throw ConfigError(ctx.params.path(key), e.what());
  }
}

std::string join(std::span<const double> values) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out += (i ? " " : "");
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------

void thm1_subgroup(ScenarioContext& ctx) {
  const double tol = ctx.params.number("tolerance", 1e-9);
  const std::uint64_t scalings = ctx.params.count("scalings", 100);
  if (!(tol > 0.0)) throw ConfigError(ctx.params.path("tolerance"), "must be positive");

  struct Case {
    std::string name;
    std::vector<double> values;
    std::optional<SubgroupClass> expected;
  };
  std::vector<Case> cases;
  if (ctx.params.has("cases")) {
    const auto& j = ctx.params.raw("cases");
    if (!j.is_array() || j.empty()) throw ConfigError(ctx.params.path("cases"), "expected a non-empty list");
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto values = parse_numbers(j[i], ctx.params.path("cases") + "[" + std::to_string(i) + "]");
      if (values.empty()) throw ConfigError(ctx.params.path("cases") + "[" + std::to_string(i) + "]", "empty sample");
      cases.push_back({"case" + std::to_string(i), std::move(values), std::nullopt});
    }
  } else {
    cases.push_back({"zeros", {0.0, 0.0, 0.0}, SubgroupClass{SubgroupClass::Kind::Trivial, 0.0}});
    cases.push_back({"integers", {-1.0, 1.0, 3.0}, SubgroupClass{SubgroupClass::Kind::Lattice, 1.0}});
    cases.push_back({"one_sqrt2", {1.0, std::numbers::sqrt2}, SubgroupClass{SubgroupClass::Kind::FullLine, 0.0}});
  }

  Table table{"classification", {"case", "values", "kind", "step", "expected_kind", "match"}, {}};
  std::uint64_t mismatches = 0;
  std::vector<SubgroupClass> base;
  for (const auto& c : cases) {
    const auto cls = circle::classify_subgroup(c.values, tol);
    base.push_back(cls);
    bool match = true;
    if (c.expected) {
      match = cls.kind == c.expected->kind &&
              (cls.kind != SubgroupClass::Kind::Lattice || std::abs(cls.step - c.expected->step) <= tol);
      if (!match) ++mismatches;
    }
    table.rows.push_back({text(c.name), text(join(c.values)), text(circle::to_string(cls.kind)), num(cls.step),
                          text(c.expected ? circle::to_string(c.expected->kind) : "-"), integer(std::uint64_t{match})});
  }
  ctx.result.tables.push_back(std::move(table));
  ctx.gate("classification_mismatches", static_cast<double>(mismatches), "==", 0.0);

  Table scaled{"scale_equivariance", {"trial", "scale", "case", "kind", "step", "ok"}, {}};
  CounterRng rng(derive_seed(ctx.cfg.master_seed, 10));
  std::uint64_t failures = 0;
  for (std::uint64_t trial = 0; trial < scalings; ++trial) {
    const double c = std::exp(std::log(0.01) + rng.uniform() * std::log(1e4));
    for (std::size_t k = 0; k < cases.size(); ++k) {
      std::vector<double> values = cases[k].values;
      for (double& v : values) v *= c;
      const auto cls = circle::classify_subgroup(values, c * tol);
      const bool ok = cls.kind == base[k].kind &&
                      (cls.kind != SubgroupClass::Kind::Lattice ||
                       std::abs(cls.step - c * base[k].step) <= 1e-9 * c * std::max(1.0, base[k].step));
      if (!ok) ++failures;
      scaled.rows.push_back({integer(trial), num(c), text(cases[k].name), text(circle::to_string(cls.kind)),
                             num(cls.step), integer(std::uint64_t{ok})});
    }
  }
  ctx.result.tables.push_back(std::move(scaled));
  ctx.gate("scale_equivariance_failures", static_cast<double>(failures), "==", 0.0);
}

void thm2_rational_ergodicity(ScenarioContext& ctx) {
  const auto sys = system_of(ctx);
  const auto horizons = ctx.params.horizons("horizons", powers_of_two(8, 14));
  const std::uint64_t replicates = ctx.params.count("replicates", 10'000);
  const std::uint64_t min_fit_n = ctx.params.count("min_fit_n", 1024);
  const double renyi_max = ctx.thresholds.number("renyi_max", 4.0);
  const double exponent_tol = ctx.thresholds.number("exponent_tolerance", 0.05);
  const double zero_tol = ctx.thresholds.number("zero_roof_exponent_tolerance", 0.01);
  const unsigned threads = ctx.cfg.threads;
  const std::uint64_t seed = ctx.cfg.master_seed;

  const auto model = ergodic::WalkModel::theorem2(sys);
  const auto rs = ergodic::estimate_return_stats(model, horizons, replicates, derive_seed(seed, 20), threads);
  ergodic::ReturnSequence direct;
  for (const auto& r : rs) direct.rows.push_back({r.n, r.mean_R, r.se_R});
  ergodic::fit_return_sequence(direct, min_fit_n);
  const auto smooth =
      ergodic::hit_probability_sequence(model, horizons, replicates, derive_seed(seed, 21), threads, min_fit_n);

  Table table{"return_stats", {"n", "mean_R", "se_R", "mean_R2", "se_R2", "renyi", "a_n_hits", "se_hits", "z_two_routes"}, {}};
  double max_renyi = 0.0;
  double max_z = 0.0;
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    const auto& r = rs[h];
    const auto& alt = smooth.rows[h];
    const double se = std::hypot(r.se_R, alt.se);
    const double z = se > 0.0 ? std::abs(r.mean_R - alt.a) / se : std::abs(r.mean_R - alt.a);
    max_renyi = std::max(max_renyi, r.renyi);
    max_z = std::max(max_z, z);
    table.rows.push_back({integer(r.n), num(r.mean_R), num(r.se_R), num(r.mean_R2), num(r.se_R2), num(r.renyi),
                          num(alt.a), num(alt.se), num(z)});
  }
  ctx.result.tables.push_back(std::move(table));

  const auto zero_sys = skew::SkewSystem::theorem2(sys.rotation(), circle::RoofFunction::zero());
  const auto zero = ergodic::return_sequence(ergodic::WalkModel::theorem2(zero_sys), horizons,
                                             std::min<std::uint64_t>(replicates, 16), derive_seed(seed, 22), threads,
                                             min_fit_n);
  Table zt{"zero_roof_control", {"n", "a_n"}, {}};
  for (const auto& row : zero.rows) zt.rows.push_back({integer(row.n), num(row.a)});
  ctx.result.tables.push_back(std::move(zt));

  Table fit{"return_sequence_fit", {"system", "fit_from", "fitted", "exponent", "constant"}, {}};
  fit.rows.push_back({text("theorem2_hits"), integer(direct.fit_from), integer(std::uint64_t{direct.fitted}),
                      num(direct.exponent), num(direct.constant)});
  fit.rows.push_back({text("theorem2_smooth"), integer(smooth.fit_from), integer(std::uint64_t{smooth.fitted}),
                      num(smooth.exponent), num(smooth.constant)});
  fit.rows.push_back({text("zero_roof"), integer(zero.fit_from), integer(std::uint64_t{zero.fitted}),
                      num(zero.exponent), num(zero.constant)});
  ctx.result.tables.push_back(std::move(fit));

  ctx.gate("max_renyi", max_renyi, "<=", renyi_max);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ctx.gate("exponent_error", direct.fitted ? std::abs(direct.exponent - 0.5) : nan, "<=", exponent_tol);
  ctx.gate("zero_roof_exponent_error", zero.fitted ? std::abs(zero.exponent - 1.0) : nan, "<=", zero_tol);
  ctx.gate("two_route_max_z", max_z, "<=", 4.0);
}

void thm4_llt(ScenarioContext& ctx) {
  const auto sys = system_of(ctx);
  const auto horizons = ctx.params.horizons("horizons", powers_of_two(10, 16));
  dist::LltScanOptions opts;
  opts.samples = ctx.params.count("samples", 100'000);
  opts.half_width = ctx.params.number("half_width", 1.0);
  opts.stable_from = ctx.params.count("stable_from", 4096);
  opts.sublinearity_tolerance = ctx.params.number("sublinearity_tolerance", 0.05);
  opts.spread_limit = ctx.thresholds.number("spread_max", 2.0);
  opts.seed = derive_seed(ctx.cfg.master_seed, 40);
  opts.threads = ctx.cfg.threads;
  const std::uint64_t x_count = ctx.params.count("x_count", 32);
  const std::uint64_t anchor_n = ctx.params.count("anchor_n", 16384);
  const double k_low = ctx.thresholds.number("k_min", 0.2);
  const double k_high = ctx.thresholds.number("k_max", 5.0);
  const double anchor_tol = ctx.thresholds.number("anchor_relative_error", 0.02);

  const auto grid = dist::uniform_grid(x_count);
  const auto rep = dist::llt_constant_scan(sys, grid, horizons, opts);
  Table table{"llt_scan", {"x", "n", "scaled", "se", "drift"}, {}};
  for (const auto& r : rep.rows) table.rows.push_back({num(r.x), integer(r.n), num(r.scaled), num(r.se), num(r.drift)});
  ctx.result.tables.push_back(std::move(table));

  // Smallest listed n after which every x stays within the spread limit.
  std::uint64_t n0 = 0;
  for (std::size_t h = horizons.size(); h-- > 0;) {
    bool stable = true;
    for (std::size_t j = 0; j < grid.size() && stable; ++j) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t k = h; k < horizons.size(); ++k) {
        const double v = rep.rows[j * horizons.size() + k].scaled;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      stable = lo > 0.0 && hi / lo <= opts.spread_limit;
    }
    if (!stable) break;
    n0 = horizons[h];
  }

  std::vector<double> ones(anchor_n, 1.0);
  const double p = dist::exact_prob(dist::WeightedSignSum(ones), {-opts.half_width, opts.half_width, 0.0});
  const double target = std::sqrt(2.0 / std::numbers::pi);
  const double anchor = std::sqrt(static_cast<double>(anchor_n)) * p;
  const double rel = std::abs(anchor - target) / target;
  Table at{"simple_walk_anchor", {"n", "scaled_exact", "target", "relative_error"}, {}};
  at.rows.push_back({integer(anchor_n), num(anchor), num(target), num(rel)});
  ctx.result.tables.push_back(std::move(at));

  Table summary{"llt_summary", {"k_min", "k_max", "k_hat", "max_spread", "n0_estimate", "sublinearity_ok"}, {}};
  summary.rows.push_back({num(rep.k_min), num(rep.k_max), num(rep.k_hat), num(rep.max_spread), integer(n0),
                          integer(std::uint64_t{!rep.warning.has_value()})});
  ctx.result.tables.push_back(std::move(summary));
  if (rep.warning) ctx.result.notes.push_back(*rep.warning);

  ctx.gate("k_min", rep.k_min, ">=", k_low);
  ctx.gate("k_max", rep.k_max, "<=", k_high);
  ctx.gate("max_spread", rep.max_spread, "<=", opts.spread_limit);
  ctx.gate("anchor_relative_error", rel, "<=", anchor_tol);
}

void lemma51_bracket(ScenarioContext& ctx) {
  const auto sys = system_of(ctx);
  const auto horizons = ctx.params.horizons("horizons", {256, 1024, 4096});
  const std::uint64_t x_count = ctx.params.count("x_count", 64);
  const double delta = ctx.params.number("delta", 2.0);
  const std::uint64_t t_points = ctx.params.count("t_points", 1000);
  const double delta_min = ctx.thresholds.number("delta_min", 0.1);

  const auto rep = dist::verify_gaussian_bracket(sys, dist::uniform_grid(x_count), horizons, delta, t_points,
                                                 ctx.cfg.threads);
  Table table{"bracket", {"x", "n", "violations"}, {}};
  for (const auto& r : rep.rows) table.rows.push_back({num(r.x), integer(r.n), integer(std::uint64_t{r.violations})});
  ctx.result.tables.push_back(std::move(table));
  Table summary{"bracket_summary",
                {"a", "b", "delta_requested", "delta_used", "bisected", "violations_at_requested", "n0"}, {}};
  summary.rows.push_back({num(rep.a), num(rep.b), num(rep.delta_requested), num(rep.delta_used),
                          integer(std::uint64_t{rep.bisected}), integer(std::uint64_t{rep.violations_at_requested}),
                          integer(rep.n0)});
  ctx.result.tables.push_back(std::move(summary));
  ctx.gate("violations", static_cast<double>(rep.total_violations), "==", 0.0);
  ctx.gate("delta_used", rep.delta_used, ">", delta_min);
}

void eq52_band(ScenarioContext& ctx) {
  const auto sys = system_of(ctx);
  const auto horizons = ctx.params.horizons("horizons", {256, 1024, 4096});
  const std::uint64_t x_count = ctx.params.count("x_count", 64);
  const double delta = ctx.params.number("delta", 0.5);
  const double Delta = ctx.params.number("Delta", 3.0);
  const std::uint64_t t_points = ctx.params.count("t_points", 1000);
  const double threshold = ctx.thresholds.number("lambda_max", 0.999);
  if (!(delta > 0.0 && Delta > delta)) throw ConfigError(ctx.params.path("Delta"), "need 0 < delta < Delta");

  const auto rep = dist::verify_decay_band(sys, dist::uniform_grid(x_count), horizons, delta, Delta, threshold,
                                           t_points, ctx.cfg.threads);
  Table table{"band", {"x", "n", "lambda_hat"}, {}};
  for (const auto& r : rep.rows) table.rows.push_back({num(r.x), integer(r.n), num(r.lambda_hat)});
  ctx.result.tables.push_back(std::move(table));
  Table maxima{"band_max", {"n", "max_lambda_hat"}, {}};
  for (std::size_t h = 0; h < horizons.size(); ++h) maxima.rows.push_back({integer(horizons[h]), num(rep.max_by_n[h])});
  ctx.result.tables.push_back(std::move(maxima));
  if (rep.lattice_period_in_band) ctx.result.notes.push_back("commensurable weights with a full period inside the band");
  const double overall = *std::max_element(rep.max_by_n.begin(), rep.max_by_n.end());
  ctx.gate("max_lambda_hat", overall, "<", threshold);
  ctx.gate("decreasing_in_n", rep.decreasing ? 1.0 : 0.0, "==", 1.0);
}

void lemma22_ratio(ScenarioContext& ctx) {
  const std::uint64_t pairs = ctx.params.count("pairs", 100);
  const std::uint64_t k_max = ctx.params.count("k_max", 8);
  const std::uint64_t extra_max = ctx.params.count("extra_max", 6);
  const double tol = ctx.thresholds.number("max_error", 1e-12);

  std::vector<std::pair<std::string, sft::SftSpec>> specs;
  if (ctx.params.has("spec"))
    specs.emplace_back("custom", spec_param(ctx, "spec", sft::SftSpec::golden_mean()));
  else {
    specs.emplace_back("bernoulli_half", sft::SftSpec::bernoulli({0.5, 0.5}));
    specs.emplace_back("golden_mean", sft::SftSpec::golden_mean());
  }

  Table table{"ratio_pairs", {"spec", "trial", "anchor", "k", "length_a", "length_b", "error"}, {}};
  double worst = 0.0;
  for (std::size_t si = 0; si < specs.size(); ++si) {
    CounterRng rng(derive_seed(ctx.cfg.master_seed, 50 + si));
    for (std::uint64_t trial = 0; trial < pairs; ++trial) {
      const auto pair = sft::sample_ratio_pair(specs[si].second, rng, k_max, extra_max);
      const double err = sft::verify_ratio_preservation(specs[si].second, pair.a, pair.b, pair.k);
      worst = std::max(worst, err);
      table.rows.push_back({text(specs[si].first), integer(trial), integer(std::int64_t{pair.a.anchor}),
                            integer(std::uint64_t{pair.k}), integer(std::uint64_t{pair.a.length()}),
                            integer(std::uint64_t{pair.b.length()}), num(err)});
    }
  }
  ctx.result.tables.push_back(std::move(table));
  ctx.gate("max_error", worst, "<=", tol);
}

void lemma24_density(ScenarioContext& ctx) {
  const std::uint64_t k_max = ctx.params.count("k_max", 10);
  struct Case {
    std::string name;
    sft::SftSpec spec;
    std::vector<sft::Cylinder> target;
    sft::Cylinder point;
    long anchor;
  };
  std::vector<Case> cases;
  if (ctx.params.has("target")) {
    if (!ctx.params.has("point")) throw ConfigError(ctx.params.path("point"), "required with a custom target");
    const auto& tj = ctx.params.raw("target");
    if (!tj.is_array() || tj.empty()) throw ConfigError(ctx.params.path("target"), "expected a non-empty list");
    std::vector<sft::Cylinder> target;
    for (std::size_t i = 0; i < tj.size(); ++i)
      target.push_back(parse_cylinder(tj[i], ctx.params.path("target") + "[" + std::to_string(i) + "]"));
    const auto point = parse_cylinder(ctx.params.raw("point"), ctx.params.path("point"));
    const long anchor = static_cast<long>(ctx.params.number("anchor", static_cast<double>(point.end())));
    cases.push_back({"custom", spec_param(ctx, "spec", sft::SftSpec::bernoulli({0.5, 0.5})), target, point, anchor});
  } else {
    const auto spec = spec_param(ctx, "spec", sft::SftSpec::bernoulli({0.5, 0.5}));
    cases.push_back({"single_cylinder", spec, {sft::Cylinder{0, {0}}}, sft::Cylinder{0, {0}}, 0});
    cases.push_back({"two_cylinders", spec, {sft::Cylinder{0, {0}}, sft::Cylinder{1, {1}}}, sft::Cylinder{0, {1, 1, 0}}, 2});
  }

  Table table{"density", {"case", "k", "ratio"}, {}};
  double worst_gap = 0.0;
  for (const auto& c : cases) {
    const auto demo = sft::density_convergence_demo(c.spec, c.target, c.point, c.anchor, k_max);
    for (std::size_t k = 0; k < demo.ratios.size(); ++k)
      table.rows.push_back({text(c.name), integer(std::uint64_t{k}), num(demo.ratios[k])});
    const double final_ratio = demo.ratios.back();
    worst_gap = std::max(worst_gap, demo.point_in_target ? 1.0 - final_ratio : final_ratio);
    if (!demo.point_in_target) ctx.result.notes.push_back(c.name + ": point outside target, ratio tends to 0");
  }
  ctx.result.tables.push_back(std::move(table));
  ctx.gate("final_ratio_gap", worst_gap, "<=", 1e-12);
}

void aaronson_z3(ScenarioContext& ctx) {
  const std::uint64_t steps = ctx.params.count("steps", 20'000);
  const std::uint64_t replicates = ctx.params.count("replicates", 10'000);
  const double z1_min = ctx.thresholds.number("z1_min", 0.9);
  const double z3_max = ctx.thresholds.number("z3_max", 0.5);
  const auto z1 = skew::recurrence_demo(skew::WalkLattice::Z1, steps, replicates, derive_seed(ctx.cfg.master_seed, 60),
                                        ctx.cfg.threads);
  const auto z3 = skew::recurrence_demo(skew::WalkLattice::Z3, steps, replicates, derive_seed(ctx.cfg.master_seed, 61),
                                        ctx.cfg.threads);
  Table table{"recurrence", {"lattice", "steps", "replicates", "returned", "frequency"}, {}};
  table.rows.push_back({text("Z"), integer(steps), integer(replicates), integer(z1.returned), num(z1.frequency)});
  table.rows.push_back({text("Z3"), integer(steps), integer(replicates), integer(z3.returned), num(z3.frequency)});
  ctx.result.tables.push_back(std::move(table));
  ctx.gate("z1_frequency", z1.frequency, ">=", z1_min);
  ctx.gate("z3_frequency", z3.frequency, "<=", z3_max);
}

void clt_fclt(ScenarioContext& ctx) {
  const auto sys = system_of(ctx);
  const std::uint64_t n = ctx.params.count("n", 4096);
  const std::uint64_t samples = ctx.params.count("samples", 100'000);
  const std::uint64_t paths = ctx.params.count("paths", 10'000);
  const auto mesh = ctx.params.numbers("mesh", {0.25, 0.5, 0.75, 1.0});
  const std::uint64_t ind_samples = ctx.params.count("independence_samples", 10'000);
  const std::uint64_t i = ctx.params.count("split_i", 100);
  const std::uint64_t j = ctx.params.count("split_j", 300);
  const double ks_max = ctx.thresholds.number("ks_max", 0.02);
  const double fclt_max = ctx.thresholds.number("fclt_max_error", 0.05);
  if (i >= j) throw ConfigError(ctx.params.path("split_j"), "must exceed split_i");
  for (std::size_t m = 0; m < mesh.size(); ++m)
    if (!(mesh[m] > 0.0 && mesh[m] <= 1.0) || (m > 0 && mesh[m] <= mesh[m - 1]))
      throw ConfigError(ctx.params.path("mesh") + "[" + std::to_string(m) + "]", "mesh must increase inside (0, 1]");

  const std::vector<std::pair<std::string, ergodic::WalkModel>> models{
      {"theorem2", ergodic::WalkModel::theorem2(sys)}, {"simple_walk", ergodic::WalkModel::simple_walk()}};
  Table clt{"clt", {"model", "n", "samples", "sigma_eff", "ks", "mean_drift_ratio"}, {}};
  Table cov{"fclt_covariance", {"model", "s", "u", "covariance", "target"}, {}};
  Table ind{"independence", {"model", "i", "j", "samples", "max_residual", "correlation", "bound"}, {}};
  const std::uint64_t seed = ctx.cfg.master_seed;
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto& [name, model] = models[m];
    const auto c = ergodic::clt_check(model, n, samples, derive_seed(seed, 70 + m), ctx.cfg.threads);
    clt.rows.push_back({text(name), integer(n), integer(samples), num(c.sigma_eff), num(c.ks), num(c.mean_drift_ratio)});
    ctx.gate(name + "_ks", c.ks, "<=", ks_max);

    const auto f = ergodic::fclt_check(model, n, paths, mesh, derive_seed(seed, 80 + m), ctx.cfg.threads);
    for (std::size_t a = 0; a < mesh.size(); ++a)
      for (std::size_t b = a; b < mesh.size(); ++b)
        cov.rows.push_back({text(name), num(mesh[a]), num(mesh[b]), num(f.covariance[a][b]), num(std::min(mesh[a], mesh[b]))});
    ctx.gate(name + "_fclt_max_error", f.max_error, "<=", fclt_max);

    const auto d = ergodic::independence_decomposition_check(model, i, j, ind_samples, derive_seed(seed, 90 + m),
                                                             ctx.cfg.threads);
    ind.rows.push_back({text(name), integer(i), integer(j), integer(ind_samples), num(d.max_residual),
                        num(d.correlation), num(d.bound)});
    ctx.gate(name + "_split_residual", d.max_residual, "<=", 1e-9);
    ctx.gate(name + "_split_abs_correlation", std::abs(d.correlation), "<=", d.bound);
  }
  ctx.result.tables.push_back(std::move(clt));
  ctx.result.tables.push_back(std::move(cov));
  ctx.result.tables.push_back(std::move(ind));
}

}  // namespace

const std::vector<Scenario>& registry() {
  using K = Kind;
  static const std::vector<Scenario> scenarios{
      {{"thm1_subgroup", "classify the closed subgroup generated by sample values; scale equivariance"},
       {{"tolerance", K::Number}, {"scalings", K::Count}, {"cases", K::Json}},
       {},
       false,
       thm1_subgroup},
      {{"thm2_rational_ergodicity", "Renyi ratio and return-sequence growth of the return function"},
       {{"horizons", K::Horizons}, {"replicates", K::Count}, {"min_fit_n", K::Count}},
       {{"renyi_max", K::Number}, {"exponent_tolerance", K::Number}, {"zero_roof_exponent_tolerance", K::Number}},
       true,
       thm2_rational_ergodicity},
      {{"thm4_llt", "sqrt(n) P[S_n in [-t,t] - s_n] over a grid of base points, with an exact simple-walk anchor"},
       {{"horizons", K::Horizons}, {"samples", K::Count}, {"half_width", K::Number}, {"stable_from", K::Count},
        {"sublinearity_tolerance", K::Number}, {"x_count", K::Count}, {"anchor_n", K::Count}},
       {{"spread_max", K::Number}, {"k_min", K::Number}, {"k_max", K::Number}, {"anchor_relative_error", K::Number}},
       true,
       thm4_llt},
      {{"lemma51_bracket", "Gaussian sandwich of the characteristic function near 0, with bisected delta"},
       {{"horizons", K::Horizons}, {"x_count", K::Count}, {"delta", K::Number}, {"t_points", K::Count}},
       {{"delta_min", K::Number}},
       true,
       lemma51_bracket},
      {{"eq52_band", "exponential decay of the characteristic function on a band away from 0"},
       {{"horizons", K::Horizons}, {"x_count", K::Count}, {"delta", K::Number}, {"Delta", K::Number},
        {"t_points", K::Count}},
       {{"lambda_max", K::Number}},
       true,
       eq52_band},
      {{"lemma22_ratio", "ratio preservation of s-measures under the shift on random admissible pairs"},
       {{"pairs", K::Count}, {"k_max", K::Count}, {"extra_max", K::Count}, {"spec", K::Json}},
       {{"max_error", K::Number}},
       false,
       lemma22_ratio},
      {{"lemma24_density", "density ratios of a cylinder union along shrinking s-cylinders"},
       {{"k_max", K::Count}, {"spec", K::Json}, {"target", K::Json}, {"point", K::Json}, {"anchor", K::Number}},
       {},
       false,
       lemma24_density},
      {{"aaronson_z3", "return-to-origin frequency of the walk on Z versus the coordinate walk on Z^3"},
       {{"steps", K::Count}, {"replicates", K::Count}},
       {{"z1_min", K::Number}, {"z3_max", K::Number}},
       false,
       aaronson_z3},
      {{"clt_fclt", "CLT and Brownian covariance of the martingale part; independence of split sums"},
       {{"n", K::Count}, {"samples", K::Count}, {"paths", K::Count}, {"mesh", K::Numbers},
        {"independence_samples", K::Count}, {"split_i", K::Count}, {"split_j", K::Count}},
       {{"ks_max", K::Number}, {"fclt_max_error", K::Number}},
       true,
       clt_fclt},
  };
  return scenarios;
}

}  // namespace skewlab::runner::detail
