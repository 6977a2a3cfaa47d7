#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "skewlab/rng.hpp"
#include "skewlab/sft.hpp"

namespace {

using namespace skewlab::sft;

SftSpec three_state() {
  return SftSpec::from_transitions({{0.2, 0.5, 0.3}, {0.6, 0.0, 0.4}, {0.1, 0.9, 0.0}});
}

// Direct product formula, evaluated in long double as an oracle.
long double markov_oracle(const SftSpec& spec, const Word& w, bool with_pi) {
  long double m = with_pi ? spec.pi(w[0]) : 1.0L;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) m *= spec.p(w[i], w[i + 1]);
  return m;
}

// All admissible words of a given length.
std::vector<Word> admissible_words(const SftSpec& spec, std::size_t length) {
  std::vector<Word> words;
  for (Symbol s = 0; s < spec.alphabet_size(); ++s) words.push_back({s});
  for (std::size_t l = 1; l < length; ++l) {
    std::vector<Word> next;
    for (const auto& w : words)
      for (Symbol s = 0; s < spec.alphabet_size(); ++s)
        if (spec.allowed(w.back(), s)) {
          next.push_back(w);
          next.back().push_back(s);
        }
    words.swap(next);
  }
  return words;
}

TEST(Stationary, GoldenMean) {
  const auto spec = SftSpec::golden_mean();
  EXPECT_NEAR(spec.pi(0), 2.0 / 3.0, 1e-13);
  EXPECT_NEAR(spec.pi(1), 1.0 / 3.0, 1e-13);
}

TEST(Stationary, SolvesPiPEqualsPi) {
  const auto spec = three_state();
  for (int j = 0; j < 3; ++j) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += spec.pi(i) * spec.p(i, j);
    EXPECT_NEAR(acc, spec.pi(j), 1e-13);
  }
}

TEST(SftSpec, RejectsInvalidInput) {
  EXPECT_THROW(SftSpec::from_transitions({{0.5, 0.4}, {0.5, 0.5}}), std::invalid_argument);  // row sum
  EXPECT_THROW(SftSpec::from_transitions({{1.0, 0.0}, {0.0, 1.0}}), std::invalid_argument);  // reducible
  EXPECT_THROW(SftSpec({{0.5, 0.5}, {1.0, 0.0}}, {0.5, 0.5}), std::invalid_argument);         // not stationary
  EXPECT_THROW(SftSpec::from_transitions({{1.0}}), std::invalid_argument);                    // alphabet
}

TEST(SftSpec, InadmissibleWordReportsPosition) {
  const auto spec = SftSpec::golden_mean();
  try {
    spec.check_word(Word{0, 1, 0, 1, 1, 0});
    FAIL() << "expected InadmissibleWord";
  } catch (const InadmissibleWord& e) {
    EXPECT_EQ(e.from(), 1);
    EXPECT_EQ(e.to(), 1);
    EXPECT_EQ(e.position(), 3u);
  }
  EXPECT_TRUE(spec.admissible(Word{0, 1, 0, 0, 1}));
}

TEST(CylinderMeasure, MatchesProductOracle) {
  for (const auto& spec : {SftSpec::golden_mean(), three_state(), SftSpec::bernoulli({0.3, 0.7})})
    for (std::size_t len = 1; len <= 6; ++len)
      for (const auto& w : admissible_words(spec, len)) {
        EXPECT_NEAR(cylinder_measure(spec, Cylinder{-3, w}), static_cast<double>(markov_oracle(spec, w, true)), 1e-15);
        EXPECT_NEAR(side_cylinder_measure(spec, UCylinder{4, w}), static_cast<double>(markov_oracle(spec, w, false)),
                    1e-15);
      }
}

TEST(CylinderMeasure, AdditivityAndShiftInvariance) {
  for (const auto& spec : {SftSpec::golden_mean(), three_state()}) {
    double total = 0.0;
    for (const auto& w : admissible_words(spec, 5)) {
      const double m = cylinder_measure(spec, Cylinder{0, w});
      total += m;
      double right = 0.0, left = 0.0;
      for (Symbol s = 0; s < spec.alphabet_size(); ++s) {
        Word r = w, l = w;
        r.push_back(s);
        l.insert(l.begin(), s);
        if (spec.admissible(r)) right += cylinder_measure(spec, Cylinder{0, r});
        if (spec.admissible(l)) left += cylinder_measure(spec, Cylinder{-1, l});
      }
      EXPECT_NEAR(right, m, 1e-12);
      EXPECT_NEAR(left, m, 1e-12);
      EXPECT_EQ(cylinder_measure(spec, Cylinder{7, w}), m);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(CylinderMeasure, LongWordsUseLogSums) {
  const auto spec = SftSpec::bernoulli({0.5, 0.5});
  const Word w(200, 1);
  EXPECT_NEAR(std::log(cylinder_measure(spec, Cylinder{0, w})), 200 * std::log(0.5), 1e-10);
}

TEST(RatioPreservation, IdenticalCylindersGiveZero) {
  const auto spec = SftSpec::golden_mean();
  const SCylinder a{0, {0, 1, 0, 0, 1}};
  EXPECT_EQ(verify_ratio_preservation(spec, a, a, 3), 0.0);
}

TEST(RatioPreservation, RandomPairsAgainstOracle) {
  skewlab::CounterRng rng(2024);
  for (const auto& spec : {SftSpec::bernoulli({0.5, 0.5}), SftSpec::golden_mean(), three_state()})
    for (int trial = 0; trial < 100; ++trial) {
      const auto pair = sample_ratio_pair(spec, rng, 8, 6);
      ASSERT_TRUE(spec.admissible(pair.a.word));
      ASSERT_TRUE(spec.admissible(pair.b.word));
      const double err = verify_ratio_preservation(spec, pair.a, pair.b, pair.k);
      EXPECT_LE(err, 1e-12);
      // Oracle: drop the k newest letters by hand and compare both ratios.
      const Word a_pre(pair.a.word.begin(), pair.a.word.end() - static_cast<long>(pair.k));
      const Word b_pre(pair.b.word.begin(), pair.b.word.end() - static_cast<long>(pair.k));
      const long double lhs = markov_oracle(spec, a_pre, true) / markov_oracle(spec, b_pre, true);
      const long double rhs = markov_oracle(spec, pair.a.word, true) / markov_oracle(spec, pair.b.word, true);
      EXPECT_NEAR(static_cast<double>(lhs / rhs), 1.0, 1e-12);
    }
}

TEST(RatioPreservation, RejectsPairsOutsideCommonCylinder) {
  const auto spec = SftSpec::bernoulli({0.5, 0.5});
  EXPECT_THROW(verify_ratio_preservation(spec, SCylinder{0, {0, 1, 1}}, SCylinder{0, {1, 0, 1}}, 2),
               std::invalid_argument);
  EXPECT_THROW(verify_ratio_preservation(spec, SCylinder{0, {0, 1}}, SCylinder{1, {0, 1}}, 1), std::invalid_argument);
}

TEST(SymbolStream, PrefixIsReproducible) {
  SymbolStream s(SftSpec::golden_mean(), 11);
  const Word drawn = sample_symbols(s, 500);
  EXPECT_EQ(s.prefix(500), drawn);
  SymbolStream t(SftSpec::golden_mean(), 11);
  EXPECT_EQ(sample_symbols(t, 500), drawn);
  EXPECT_TRUE(SftSpec::golden_mean().admissible(drawn));
}

TEST(SymbolStream, TransitionCountsPassChiSquare) {
  for (const auto& spec : {SftSpec::golden_mean(), three_state()}) {
    SymbolStream s(spec, 5);
    const int k = spec.alphabet_size();
    std::vector<std::vector<double>> counts(k, std::vector<double>(k, 0.0));
    Symbol prev = s.next();
    for (int i = 0; i < 1'000'000; ++i) {
      const Symbol cur = s.next();
      counts[prev][cur] += 1.0;
      prev = cur;
    }
    double chi2 = 0.0;
    int dof = 0;
    for (int a = 0; a < k; ++a) {
      double row = 0.0;
      int allowed = 0;
      for (int b = 0; b < k; ++b) row += counts[a][b];
      for (int b = 0; b < k; ++b) {
        if (!spec.allowed(a, b)) {
          EXPECT_EQ(counts[a][b], 0.0);
          continue;
        }
        const double expected = row * spec.p(a, b);
        chi2 += (counts[a][b] - expected) * (counts[a][b] - expected) / expected;
        ++allowed;
      }
      dof += allowed - 1;
    }
    const boost::math::chi_squared law(dof);
    EXPECT_LT(chi2, boost::math::quantile(boost::math::complement(law, 1e-3)));
  }
}

TEST(DensityDemo, SingleCylinderIsConstantOne) {
  const auto spec = SftSpec::bernoulli({0.5, 0.5});
  const std::vector<Cylinder> target{Cylinder{0, {0}}};
  const auto demo = density_convergence_demo(spec, target, Cylinder{0, {0}}, 0, 10);
  ASSERT_EQ(demo.ratios.size(), 11u);
  for (double r : demo.ratios) EXPECT_DOUBLE_EQ(r, 1.0);
  EXPECT_TRUE(demo.point_in_target);
}

TEST(DensityDemo, UnionReachesOneAfterOneStep) {
  const auto spec = SftSpec::bernoulli({0.5, 0.5});
  const std::vector<Cylinder> target{Cylinder{0, {0}}, Cylinder{1, {1}}};
  const auto demo = density_convergence_demo(spec, target, Cylinder{0, {1, 1, 0}}, 2, 4);
  EXPECT_NEAR(demo.ratios[0], 0.75, 1e-15);
  for (std::size_t k = 1; k < demo.ratios.size(); ++k) EXPECT_DOUBLE_EQ(demo.ratios[k], 1.0);
}

TEST(DensityDemo, PointOutsideTargetGoesToZero) {
  const auto spec = SftSpec::golden_mean();
  const std::vector<Cylinder> target{Cylinder{0, {1}}};
  const auto demo = density_convergence_demo(spec, target, Cylinder{0, {0, 0, 1}}, 2, 5);
  EXPECT_FALSE(demo.point_in_target);
  EXPECT_EQ(demo.ratios.back(), 0.0);
  // omega_2 = 1 forces omega_1 = 0, then P[omega_0 = 1] = pi(1) p(1,0) p(0,1) / pi(1) = 1/2.
  EXPECT_NEAR(demo.ratios[0], 0.5, 1e-12);
}

TEST(SftJson, RoundTrip) {
  const auto spec = three_state();
  nlohmann::json j;
  to_json(j, spec);
  EXPECT_EQ(spec_from_json(j), spec);
  j.erase("pi");
  const auto again = spec_from_json(j);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(again.pi(i), spec.pi(i), 1e-13);
}

}  // namespace
