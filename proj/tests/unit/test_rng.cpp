#include <algorithm>
#include <cmath>
#include <atomic>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"

namespace {

using skewlab::Counter4;
using skewlab::Key2;

// Textbook Philox4x32-10, written out independently of the library.
Counter4 reference_philox(Counter4 c, Key2 k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }
  return c;
}

TEST(Philox, KnownAnswerZero) {
  const Counter4 expected{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
  EXPECT_EQ(skewlab::philox4x32({0, 0, 0, 0}, {0, 0}), expected);
}

TEST(Philox, KnownAnswerAllOnes) {
  const Counter4 expected{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu};
  EXPECT_EQ(skewlab::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            expected);
}

TEST(Philox, KnownAnswerPiDigits) {
  const Counter4 expected{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
  EXPECT_EQ(skewlab::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            expected);
}

TEST(Philox, MatchesReferenceOnRandomInputs) {
  std::uint64_t state = 12345;
  for (int trial = 0; trial < 1000; ++trial) {
    auto word = [&] { return static_cast<std::uint32_t>(state = skewlab::splitmix64(state)); };
    const Counter4 c{word(), word(), word(), word()};
    const Key2 k{word(), word()};
    EXPECT_EQ(skewlab::philox4x32(c, k), reference_philox(c, k));
  }
}

TEST(SplitMix, KnownFirstOutput) { EXPECT_EQ(skewlab::splitmix64(0), 0xe220a8397b1dcdafULL); }

TEST(DeriveSeed, DistinctAcrossIndicesAndMasters) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 20; ++m)
    for (std::uint64_t i = 0; i < 500; ++i) seen.insert(skewlab::derive_seed(m, i));
  EXPECT_EQ(seen.size(), 20u * 500u);
}

TEST(CounterRng, ReproducibleAndStreamSeparated) {
  skewlab::CounterRng a(7), b(7), c(7, 1);
  std::vector<std::uint64_t> va, vb, vc;
  for (int i = 0; i < 100; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
  }
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
}

TEST(CounterRng, UniformMoments) {
  skewlab::CounterRng rng(99);
  const int n = 200'000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sq / n, 1.0 / 3.0, 0.005);
}

TEST(ParallelFor, CoversEveryIndexOnceForAnyThreadCount) {
  for (unsigned threads : {1u, 2u, 5u}) {
    std::vector<int> hits(1000, 0);
    skewlab::parallel_for(hits.size(), threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
}

TEST(ParallelFor, ChunkBoundariesIgnoreThreadCount) {
  auto chunks = [](unsigned threads) {
    std::atomic<std::size_t> k{0};
    std::vector<std::pair<std::size_t, std::size_t>> seen(200);
    skewlab::parallel_for(1234, threads, [&](std::size_t b, std::size_t e) { seen[k++] = {b, e}; });
    seen.resize(k);
    std::sort(seen.begin(), seen.end());
    return seen;
  };
  EXPECT_EQ(chunks(1), chunks(4));
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(skewlab::parallel_for(100, 3,
                                     [](std::size_t b, std::size_t) {
                                       if (b == 0) throw std::runtime_error("boom");
                                     }),
               std::runtime_error);
}

}  // namespace
