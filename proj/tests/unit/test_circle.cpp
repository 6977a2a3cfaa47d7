#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "skewlab/circle.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/stats.hpp"

namespace {

using namespace skewlab::circle;

TrigPoly mixed_poly() { return TrigPoly{{0.7, 0.0, -0.2}, {0.1, 0.4}, 0.0}; }

std::vector<RoofFunction> sample_roofs() {
  return {RoofFunction::cosine(1.0), RoofFunction(mixed_poly()),
          RoofFunction(Coboundary{TrigPoly{{0.5}, {0.0, 0.3}, 0.0}, RotationNumber::golden_mean()}),
          RoofFunction::zero()};
}

TEST(QuadraticSurd, ValuesAndIrrationality) {
  EXPECT_NEAR(static_cast<double>(RotationNumber::golden_mean().surd()->value()), (std::sqrt(5.0) - 1.0) / 2.0, 1e-16);
  EXPECT_TRUE(RotationNumber::golden_mean().certified_irrational());
  EXPECT_TRUE(RotationNumber::sqrt2_minus_1().certified_irrational());
  EXPECT_FALSE((QuadraticSurd{1, 2, 4, 3}.irrational()));  // sqrt 4 is rational
  EXPECT_FALSE((QuadraticSurd{1, 0, 5, 3}.irrational()));
}

TEST(RotationNumber, FloatInputCarriesWarning) {
  const auto a = RotationNumber::from_float(0.3);
  EXPECT_TRUE(a.float_warning());
  EXPECT_FALSE(a.certified_irrational());
  EXPECT_FALSE(RotationNumber::golden_mean().float_warning());
}

TEST(RotationNumber, FracMultipleAgreesWithLongDouble) {
  const auto alpha = RotationNumber::golden_mean();
  const long double exact = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  for (std::uint64_t n : {1ull, 17ull, 1000ull, 123457ull, 1000000ull}) {
    long double v = static_cast<long double>(n) * exact;
    v -= std::floor(v);
    EXPECT_NEAR(alpha.frac_multiple(n), static_cast<double>(v), 1e-12) << n;
  }
}

TEST(RotationMap, IterateMatchesRepeatedSteps) {
  const RotationMap T(RotationNumber::sqrt2_minus_1());
  double x = 0.123;
  for (int i = 0; i < 1000; ++i) x = T(x);
  EXPECT_NEAR(x, T.iterate(0.123, 1000), 1e-12);
}

TEST(TrigPoly, SquareMeanAndSupBound) {
  const auto p = mixed_poly();
  const int nodes = 4096;
  double sq = 0.0, sup = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double v = p(static_cast<double>(i) / nodes);
    sq += v * v / nodes;
    sup = std::max(sup, std::abs(v));
  }
  EXPECT_NEAR(p.square_mean(), sq, 1e-12);
  EXPECT_LE(sup, p.sup_bound() + 1e-15);
  EXPECT_DOUBLE_EQ(RoofFunction::cosine().square_mean(), 0.5);
}

TEST(RoofFunction, QuadratureMeanVanishes) {
  for (const auto& roof : sample_roofs()) {
    const int nodes = 1 << 12;
    double acc = 0.0;
    for (int i = 0; i < nodes; ++i) acc += roof(static_cast<double>(i) / nodes);
    EXPECT_LE(std::abs(acc / nodes), 1e-10);
    EXPECT_EQ(roof.mean(), 0.0);
  }
}

TEST(RoofFunction, CoboundaryExpansionMatchesDefinition) {
  const Coboundary cob{TrigPoly{{0.5, -0.25}, {0.0, 0.3}, 0.0}, RotationNumber::golden_mean()};
  const RoofFunction roof(cob);
  const RotationMap T(cob.alpha);
  for (double x : {0.0, 0.1, 0.37, 0.92}) EXPECT_NEAR(roof(x), cob.psi(T(x)) - cob.psi(x), 1e-14);
}

TEST(RoofFunction, OrbitWeightsMatchDirectEvaluation) {
  const auto alpha = RotationNumber::golden_mean();
  const RotationMap T(alpha);
  for (const auto& roof : sample_roofs()) {
    std::vector<double> w(5000);
    roof.weights_along_orbit(0.3141, alpha, w);
    for (std::size_t i = 0; i < w.size(); i += 97) EXPECT_NEAR(w[i], roof(T.iterate(0.3141, i)), 1e-12) << i;
  }
}

TEST(Birkhoff, CoboundaryTelescopes) {
  const Coboundary cob{TrigPoly{{0.4, 0.1}, {0.2}, 0.0}, RotationNumber::sqrt2_minus_1()};
  const RoofFunction roof(cob);
  const RotationMap T(cob.alpha);
  skewlab::CounterRng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = rng.uniform();
    const std::uint64_t n = 1 + rng() % 2000;
    EXPECT_NEAR(birkhoff_sum(roof, T, x, n).s, telescoped_sum(cob, x, n), 1e-9);
  }
}

TEST(Birkhoff, KeepsWeights) {
  const RotationMap T(RotationNumber::golden_mean());
  const auto rec = birkhoff_sum(RoofFunction::cosine(), T, 0.2, 10, true);
  ASSERT_EQ(rec.weights.size(), 10u);
  double acc = 0.0;
  for (double c : rec.weights) acc += c;
  EXPECT_NEAR(acc, rec.s, 1e-14);
}

TEST(Equidistribution, OrbitIsUniform) {
  const RotationMap T(RotationNumber::golden_mean());
  std::vector<double> z;
  for (std::uint64_t i = 0; i < 100'000; ++i) z.push_back(T.iterate(0.05, i));
  std::sort(z.begin(), z.end());
  double d = 0.0;
  const double n = static_cast<double>(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) d = std::max({d, (i + 1) / n - z[i], z[i] - i / n});
  EXPECT_LE(d, 0.01);
}

TEST(Sublinearity, ZeroRoofAllZero) {
  const RotationMap T(RotationNumber::golden_mean());
  const std::vector<double> grid{0.0, 0.5};
  const std::vector<std::uint64_t> n{16, 256};
  const auto rep = check_sublinearity(RoofFunction::zero(), T, grid, n, 0.05);
  for (const auto& r : rep.rows) EXPECT_EQ(r.max_ratio, 0.0);
  EXPECT_TRUE(rep.pass);
}

TEST(Sublinearity, CoboundaryBound) {
  const Coboundary cob{TrigPoly{{0.5}, {}, 0.0}, RotationNumber::golden_mean()};
  const RotationMap T(cob.alpha);
  std::vector<double> grid;
  for (int i = 0; i < 16; ++i) grid.push_back(i / 16.0);
  const std::vector<std::uint64_t> n{100, 400, 1600};
  const auto rep = check_sublinearity(RoofFunction(cob), T, grid, n, 0.1);
  for (const auto& r : rep.rows) EXPECT_LE(r.max_ratio, 2.0 * 0.5 / std::sqrt(static_cast<double>(r.n)) + 1e-12);
  EXPECT_TRUE(rep.pass);
}

TEST(Sublinearity, CosineGoldenPasses) {
  const RotationMap T(RotationNumber::golden_mean());
  std::vector<double> grid;
  for (int i = 0; i < 64; ++i) grid.push_back(i / 64.0);
  std::vector<std::uint64_t> n;
  for (int e = 6; e <= 16; e += 2) n.push_back(std::uint64_t{1} << e);
  EXPECT_TRUE(check_sublinearity(RoofFunction::cosine(), T, grid, n, 0.05).pass);
}

TEST(Subgroup, SpecExamples) {
  const std::vector<double> zeros{0.0, 0.0, 0.0}, ints{-1.0, 1.0, 3.0}, irr{1.0, std::numbers::sqrt2};
  EXPECT_EQ(classify_subgroup(zeros, 1e-9).kind, SubgroupClass::Kind::Trivial);
  const auto lat = classify_subgroup(ints, 1e-9);
  EXPECT_EQ(lat.kind, SubgroupClass::Kind::Lattice);
  EXPECT_NEAR(lat.step, 1.0, 1e-12);
  EXPECT_EQ(classify_subgroup(irr, 1e-9).kind, SubgroupClass::Kind::FullLine);
}

TEST(Subgroup, FindsLargestStep) {
  const std::vector<double> v{0.6, 1.5, -2.1};
  const auto c = classify_subgroup(v, 1e-9);
  ASSERT_EQ(c.kind, SubgroupClass::Kind::Lattice);
  EXPECT_NEAR(c.step, 0.3, 1e-12);
}

TEST(Subgroup, ScaleEquivariant) {
  skewlab::CounterRng rng(77);
  const std::vector<std::vector<double>> cases{{0.0, 0.0}, {-1.0, 1.0, 3.0}, {1.0, std::numbers::sqrt2}, {0.6, 1.5}};
  for (int trial = 0; trial < 100; ++trial) {
    const double c = std::exp(std::log(1e-3) + rng.uniform() * std::log(1e6));
    for (const auto& values : cases) {
      const auto base = classify_subgroup(values, 1e-9);
      std::vector<double> scaled = values;
      for (double& v : scaled) v *= c;
      const auto cls = classify_subgroup(scaled, 1e-9 * c);
      ASSERT_EQ(cls.kind, base.kind) << c;
      EXPECT_NEAR(cls.step, c * base.step, 1e-9 * c);
    }
  }
}

TEST(Subgroup, RejectsBadInput) {
  EXPECT_THROW(classify_subgroup(std::vector<double>{}, 1e-9), std::invalid_argument);
  EXPECT_THROW(classify_subgroup(std::vector<double>{1.0}, 0.0), std::invalid_argument);
}

TEST(CircleJson, RoundTrip) {
  nlohmann::json j;
  to_json(j, RotationNumber::golden_mean());
  EXPECT_EQ(rotation_from_json(j), RotationNumber::golden_mean());
  const RoofFunction roof(mixed_poly());
  nlohmann::json r;
  to_json(r, roof);
  EXPECT_EQ(roof_from_json(r).expanded(), roof.expanded());
  const RoofFunction cob(Coboundary{TrigPoly{{0.5}, {}, 0.0}, RotationNumber::golden_mean()});
  nlohmann::json c;
  to_json(c, cob);
  const auto back = roof_from_json(c);
  EXPECT_TRUE(back.is_coboundary());
  EXPECT_EQ(back.expanded(), cob.expanded());
}

}  // namespace
