#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "skewlab/distribution.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/skew.hpp"

namespace {

using namespace skewlab;
using namespace skewlab::dist;

double brute_force_prob(const std::vector<double>& w, const IntervalQuery& q) {
  const std::size_t n = w.size();
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double s = q.shift;
    for (std::size_t i = 0; i < n; ++i) s += ((mask >> i) & 1u) ? w[i] : -w[i];
    if (s >= q.lo && s <= q.hi) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(std::uint64_t{1} << n);
}

double central_binomial(std::size_t n) {  // C(n, n/2) / 2^n via lgamma
  const double k = static_cast<double>(n) / 2.0;
  return std::exp(std::lgamma(n + 1.0) - 2.0 * std::lgamma(k + 1.0) - static_cast<double>(n) * std::log(2.0));
}

std::vector<double> random_weights(CounterRng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> w(n);
  for (double& c : w) c = lo + (hi - lo) * rng.uniform();
  return w;
}

skew::SkewSystem cosine_system() {
  return skew::SkewSystem::theorem2(circle::RotationNumber::golden_mean(), circle::RoofFunction::cosine());
}

TEST(MeetInMiddle, MatchesBruteForce) {
  CounterRng rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 14;
    const auto w = random_weights(rng, n, -1.5, 1.5);
    const IntervalQuery q{-1.0 + 0.5 * rng.uniform(), 0.2 + rng.uniform(), 2.0 * rng.uniform() - 1.0};
    EXPECT_DOUBLE_EQ(meet_in_middle_prob(WeightedSignSum(w), q), brute_force_prob(w, q));
  }
}

TEST(MeetInMiddle, ClosedEndpointsCount) {
  const std::vector<double> w{1.0, 1.0};
  EXPECT_DOUBLE_EQ(meet_in_middle_prob(WeightedSignSum(w), {-2.0, 0.0, 0.0}), 0.75);
  EXPECT_DOUBLE_EQ(meet_in_middle_prob(WeightedSignSum(w), {0.5, 0.4, 0.0}), 0.0);
}

TEST(ExactProb, RejectsLargeIncommensurable) {
  CounterRng rng(2);
  const auto w = random_weights(rng, 41, 0.5, 1.5);
  EXPECT_THROW(exact_prob(WeightedSignSum(w), {}), std::domain_error);
}

TEST(Lattice, DetectsCommensurableWeights) {
  const std::vector<double> w{0.5, 1.0, -1.5, 2.5};
  const auto form = lattice_form(WeightedSignSum(w));
  ASSERT_TRUE(form.has_value());
  EXPECT_NEAR(form->step, 0.5, 1e-12);
  EXPECT_EQ(form->span(), 1 + 2 + 3 + 5);
  const std::vector<double> irr{1.0, std::numbers::sqrt2};
  EXPECT_FALSE(lattice_form(WeightedSignSum(irr)).has_value());
}

TEST(Lattice, DynamicProgramMatchesEnumeration) {
  CounterRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 16;
    std::vector<double> w(n);
    for (double& c : w) c = 0.25 * static_cast<double>(1 + rng() % 6);
    const IntervalQuery q{-1.0, 1.0, 0.25 * static_cast<double>(rng() % 5)};
    const auto form = lattice_form(WeightedSignSum(w));
    ASSERT_TRUE(form.has_value());
    EXPECT_NEAR(lattice_prob(*form, q), meet_in_middle_prob(WeightedSignSum(w), q), 1e-14);
    const auto pmf = lattice_pmf(*form);
    double total = 0.0;
    for (double p : pmf) total += p;
    EXPECT_NEAR(total, 1.0, 1e-13);
  }
}

TEST(Lattice, SimpleWalkAnchorIsCentralBinomial) {
  const std::size_t n = 1 << 14;
  const std::vector<double> ones(n, 1.0);
  const double p = exact_prob(WeightedSignSum(ones), {});
  EXPECT_NEAR(p / central_binomial(n), 1.0, 1e-10);
  EXPECT_NEAR(std::sqrt(static_cast<double>(n)) * p / std::sqrt(2.0 / std::numbers::pi), 1.0, 0.02);
}

TEST(Lattice, SimpleWalkZeroProbabilities) {
  const auto z = simple_walk_zero_probabilities(200);
  for (std::size_t i = 1; i <= 200; ++i) {
    if (i % 2) EXPECT_EQ(z[i - 1], 0.0);
    else EXPECT_NEAR(z[i - 1] / central_binomial(i), 1.0, 1e-12);
  }
}

TEST(CharFunction, ProductOfCosines) {
  const std::vector<double> w{0.3, 1.1, -0.7};
  EXPECT_NEAR(char_function(WeightedSignSum(w), 0.9), std::cos(0.27) * std::cos(0.99) * std::cos(0.63), 1e-15);
}

TEST(FourierBracket, ContainsExactProbability) {
  CounterRng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    const auto w = random_weights(rng, n, 0.5, 1.5);
    const IntervalQuery q{-1.0, 1.0, 2.0 * rng.uniform() - 1.0};
    const WeightedSignSum ws(w);
    const auto b = fourier_bracket(ws, q);
    const double exact = exact_prob(ws, q);
    EXPECT_FALSE(b.resolution_failure);
    EXPECT_LE(b.lower, exact + 1e-9);
    EXPECT_GE(b.upper, exact - 1e-9);
  }
}

TEST(FourierBracket, RescalesGeneralIntervals) {
  const std::vector<double> w{0.4, 0.9, 1.3, 0.6, 1.1};
  const IntervalQuery q{-0.5, 2.0, 0.3};
  const auto b = fourier_bracket(WeightedSignSum(w), q);
  const double exact = exact_prob(WeightedSignSum(w), q);
  EXPECT_LE(b.lower, exact + 1e-9);
  EXPECT_GE(b.upper, exact - 1e-9);
  EXPECT_THROW(fourier_bracket(WeightedSignSum(w), {1.0, 1.0, 0.0}), std::invalid_argument);
}

TEST(MonteCarlo, AgreesWithExactWithinFourSe) {
  CounterRng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = random_weights(rng, 12, 0.5, 1.5);
    const IntervalQuery q{-1.0, 1.0, rng.uniform() - 0.5};
    const auto est = monte_carlo_prob(WeightedSignSum(w), q, 200'000, derive_seed(5, trial));
    EXPECT_LE(std::abs(est.value - exact_prob(WeightedSignSum(w), q)), 4.0 * est.se + 1e-12);
  }
}

TEST(Sampler, PartialSumsMatchSignReference) {
  CounterRng rng(6);
  const auto w = random_weights(rng, 300, -1.0, 1.0);
  const SignSumSampler sampler(w);
  const std::vector<std::size_t> horizons{1, 7, 8, 9, 128, 129, 255, 300};
  const auto sums = sampler.partial_sums(horizons, 50, 99);
  for (std::uint64_t s = 0; s < 50; ++s)
    for (std::size_t h = 0; h < horizons.size(); ++h) {
      double ref = 0.0;
      for (std::size_t i = 0; i < horizons[h]; ++i) ref += w[i] * SignSumSampler::sign(99, s, i);
      EXPECT_NEAR(sums[h][s], ref, 1e-11);
    }
}

TEST(Sampler, IndependentOfThreadCount) {
  const std::vector<double> w(1000, 1.0);
  const SignSumSampler sampler(w);
  const std::vector<std::size_t> horizons{100, 1000};
  EXPECT_EQ(sampler.partial_sums(horizons, 5000, 3, 1), sampler.partial_sums(horizons, 5000, 3, 4));
}

TEST(Sampler, SignsAreFair) {
  long long total = 0;
  for (std::uint64_t s = 0; s < 2000; ++s)
    for (std::size_t i = 0; i < 256; ++i) total += SignSumSampler::sign(1, s, i);
  EXPECT_LE(std::abs(static_cast<double>(total)), 4.0 * std::sqrt(2000.0 * 256.0));
}

TEST(Sampler, RejectsBadHorizons) {
  const std::vector<double> w(10, 1.0);
  const SignSumSampler sampler(w);
  const std::vector<std::size_t> bad{5, 11}, unordered{5, 3};
  EXPECT_THROW(sampler.partial_sums(bad, 1, 1), std::invalid_argument);
  EXPECT_THROW(sampler.partial_sums(unordered, 1, 1), std::invalid_argument);
}

TEST(GaussianBracket, CountMatchesDirectGrid) {
  const auto w = orbit_weights(cosine_system(), 0.21, 64);
  const double delta = 2.0, a = 2.0, b = 1.0 / 32.0;
  const std::size_t points = 1000;
  const double half = delta * 8.0;
  std::size_t expected = 0;
  for (std::size_t j = 0; j < points; ++j) {
    const double t = -half + 2.0 * half * static_cast<double>(j) / (points - 1);
    double phi = 1.0;
    for (double c : w) phi *= std::cos(c * t / 8.0);
    if (phi < std::exp(-a * t * t) || phi > std::exp(-b * t * t)) ++expected;
  }
  EXPECT_EQ(gaussian_bracket_violations(w, delta, a, b, points), expected);
  EXPECT_GT(expected, 0u);
  EXPECT_EQ(gaussian_bracket_violations(w, 1.0, a, b, points), 0u);
}

TEST(GaussianBracket, BisectsToAdmissibleDelta) {
  const auto grid = uniform_grid(8);
  const std::vector<std::uint64_t> n{256, 1024};
  const auto rep = verify_gaussian_bracket(cosine_system(), grid, n, 2.0, 1000);
  EXPECT_DOUBLE_EQ(rep.a, 2.0);
  EXPECT_DOUBLE_EQ(rep.b, 1.0 / 32.0);
  EXPECT_TRUE(rep.bisected);
  EXPECT_GT(rep.violations_at_requested, 0u);
  EXPECT_EQ(rep.total_violations, 0u);
  EXPECT_GT(rep.delta_used, 1.0);
  EXPECT_LT(rep.delta_used, std::numbers::pi / 2.0 + 1e-9);
  EXPECT_TRUE(rep.pass);
}

TEST(DecayBand, SimpleWalkRate) {
  const std::vector<double> ones(50, 1.0);
  double expected = 0.0;
  for (int j = 0; j < 1000; ++j) expected = std::max(expected, std::abs(std::cos(0.5 + (j + 0.5) * 2.5 / 1000)));
  EXPECT_NEAR(decay_rate(ones, 0.5, 3.0, 1000), expected, 1e-12);
}

TEST(DecayBand, LatticePeriodDetection) {
  const std::vector<double> ones(10, 1.0), twos(10, 2.0), irr{1.0, std::numbers::sqrt2};
  EXPECT_FALSE(lattice_period_in_band(ones, 0.5, 3.0));  // period pi lies outside
  EXPECT_TRUE(lattice_period_in_band(twos, 0.5, 3.0));   // pi / 2 lies inside
  EXPECT_FALSE(lattice_period_in_band(irr, 0.5, 3.0));
}

TEST(DecayBand, CosineSystemDecays) {
  const std::vector<std::uint64_t> n{256, 1024};
  const auto rep = verify_decay_band(cosine_system(), uniform_grid(8), n);
  EXPECT_LT(rep.lambda_star, 0.999);
  EXPECT_FALSE(rep.lattice_period_in_band);
  EXPECT_TRUE(rep.pass);
}

TEST(LltScan, ScaledProbabilitiesNearLimit) {
  LltScanOptions opts;
  opts.samples = 20'000;
  opts.stable_from = 1024;
  const std::vector<std::uint64_t> n{1024, 4096};
  const auto rep = llt_constant_scan(cosine_system(), uniform_grid(4), n, opts);
  ASSERT_EQ(rep.rows.size(), 8u);
  for (const auto& r : rep.rows) EXPECT_NEAR(r.scaled, 2.0 / std::sqrt(std::numbers::pi), 0.15);
  EXPECT_TRUE(rep.pass);
}

TEST(WeakLlt, ApproachesIntervalLength) {
  const std::vector<std::uint64_t> n{1024, 4096};
  const auto rep = weak_llt_check(cosine_system(), 0.3, n, -1.0, 1.0, 100'000, 7);
  EXPECT_DOUBLE_EQ(rep.target, 2.0);
  EXPECT_FALSE(rep.lattice);
  EXPECT_LE(rep.relative_gap, 0.05);
  EXPECT_NEAR(rep.rows.back().sigma_bar, std::sqrt(0.5), 0.01);
}

}  // namespace
