#include <gtest/gtest.h>

#include "harmtree/scheduler.hpp"

using namespace harmtree;

namespace {

// Independent oracles: repeated halving and the running-sum recurrence.
std::uint32_t ell_by_division(std::uint64_t k) {
  std::uint32_t v = 0;
  while (k % 2 == 0) {
    k /= 2;
    ++v;
  }
  return v + 1;
}

}  // namespace

TEST(Ell, Examples) {
  EXPECT_EQ(ell(1), 1u);
  EXPECT_EQ(ell(6), 2u);
  EXPECT_EQ(ell(8), 4u);
  EXPECT_THROW(ell(0), std::invalid_argument);
}

TEST(Ell, MatchesDivisionOracle) {
  for (std::uint64_t k = 1; k <= 100000; ++k) ASSERT_EQ(ell(k), ell_by_division(k)) << k;
}

TEST(Ell, ShiftIdentity) {
  for (std::uint32_t N = 1; N <= 16; ++N) {
    const std::uint64_t p = std::uint64_t{1} << N;
    for (std::uint64_t k = 1; k < p; ++k) ASSERT_EQ(ell(k + p), ell(k)) << "N=" << N << " k=" << k;
  }
}

TEST(R, Examples) {
  EXPECT_EQ(r(2), 3u);
  EXPECT_EQ(r(8), 15u);
  EXPECT_EQ(r(3), 4u);
  EXPECT_EQ(r(1), 1u);
  EXPECT_EQ(r(0), 0u);
}

TEST(R, MatchesRecurrence) {
  std::uint64_t acc = 0;
  for (std::uint64_t k = 1; k <= 200000; ++k) {
    acc += ell_by_division(k);
    ASSERT_EQ(r(k), acc) << k;
  }
}

TEST(R, PowersOfTwo) {
  for (std::uint32_t N = 0; N <= 20; ++N) EXPECT_EQ(r(std::uint64_t{1} << N), (std::uint64_t{2} << N) - 1);
}

TEST(R, StrictlyIncreasing) {
  for (std::uint64_t k = 1; k <= 10000; ++k) ASSERT_LT(r(k - 1), r(k));
}

TEST(CountEll, Examples) {
  EXPECT_EQ(count_ell(3, 2), 2u);
  for (std::uint32_t N = 1; N <= 12; ++N) EXPECT_EQ(count_ell(N, N), 1u);
  EXPECT_EQ(count_ell(5, 1), 16u);
  EXPECT_THROW(count_ell(3, 4), std::invalid_argument);
  EXPECT_THROW(count_ell(3, 0), std::invalid_argument);
}

TEST(CountEll, PowerLawByEnumeration) {
  for (std::uint32_t N = 1; N <= 16; ++N)
    for (std::uint32_t m = 1; m <= N; ++m) EXPECT_EQ(count_ell(N, m), std::uint64_t{1} << (N - m)) << N << "," << m;
}

TEST(Schedule, UpToAndWithinDepth) {
  const auto s = Schedule::up_to(8);
  EXPECT_EQ(s.ell, (std::vector<std::uint32_t>{1, 2, 1, 3, 1, 2, 1, 4}));
  EXPECT_EQ(s.r, (std::vector<std::uint64_t>{1, 3, 4, 7, 8, 10, 11, 15}));
  EXPECT_EQ(Schedule::within_depth(7).r, (std::vector<std::uint64_t>{1, 3, 4, 7}));
  EXPECT_EQ(steps_within_depth(0), 0u);
  EXPECT_EQ(steps_within_depth(2), 1u);
  EXPECT_EQ(steps_within_depth(31), 16u);
  for (std::uint64_t d = 1; d < 3000; ++d) {
    const auto K = steps_within_depth(d);
    ASSERT_LE(r(K), d);
    ASSERT_GT(r(K + 1), d);
  }
}

TEST(HitLevels, ExampleMOne) {
  const auto h = hit_levels(1, 7);
  EXPECT_EQ(h.levels, (std::vector<std::uint64_t>{1, 4}));
  ASSERT_FALSE(h.checkpoints.empty());
  const auto& last = h.checkpoints.back();
  EXPECT_EQ(last.horizon, 7u);
  EXPECT_EQ(last.count, 2u);
  EXPECT_EQ(last.ratio, Rational(1, 4));
}

TEST(HitLevels, ExampleMTwo) {
  const auto h = hit_levels(2, 7);
  EXPECT_EQ(h.levels, (std::vector<std::uint64_t>{3}));
  ASSERT_EQ(h.checkpoints.size(), 1u);
  EXPECT_EQ(h.checkpoints[0].ratio, Rational(1, 8));
}

TEST(HitLevels, MillionHorizonMinimum) {
  const auto h = hit_levels(1, 1000000);
  EXPECT_GE(h.min_checkpoint_ratio(), Rational(1, 4));
  EXPECT_EQ(h.min_checkpoint_ratio(), Rational(1, 4));
  // Every level listed is r_n with n odd, and nothing is missed.
  std::uint64_t expected = 0;
  for (std::uint64_t n = 1; r(n) <= 1000000; n += 2) ++expected;
  EXPECT_EQ(h.levels.size(), expected);
}

TEST(HitLevels, CheckpointDensityIsExact) {
  for (std::uint32_t m = 1; m <= 6; ++m) {
    const auto h = hit_levels(m, r(std::uint64_t{1} << 20));
    ASSERT_EQ(h.checkpoints.size(), 21u - m);
    for (const auto& c : h.checkpoints) {
      EXPECT_EQ(c.ratio, pow2(-static_cast<long>(m) - 1)) << "m=" << m << " N=" << c.N;
      EXPECT_EQ(c.count, std::uint64_t{1} << (c.N - m));
    }
  }
}
