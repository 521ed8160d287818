#pragma once

#include <cstdint>
#include <vector>

#include "harmtree/rational.hpp"

namespace harmtree {

/// l(k) = v2(k) + 1 for k >= 1.
std::uint32_t ell(std::uint64_t k);

/// r_k = l(1) + ... + l(k), r_0 = 0. Equals 2k - popcount(k).
std::uint64_t r(std::uint64_t k);

/// card{1 <= k <= 2^N : l(k) = m}, by enumeration. Requires 1 <= m <= N <= 40.
std::uint64_t count_ell(std::uint32_t N, std::uint32_t m);

/// The first K terms of the schedule.
struct Schedule {
  std::vector<std::uint32_t> ell;  // ell[k-1] = l(k)
  std::vector<std::uint64_t> r;    // r[k-1] = r_k

  std::uint64_t horizon() const { return ell.size(); }

  static Schedule up_to(std::uint64_t K);
  /// All steps with r_k <= depth.
  static Schedule within_depth(std::uint64_t depth);
};

/// Largest K with r_K <= depth; 0 if depth < r_1.
std::uint64_t steps_within_depth(std::uint64_t depth);

struct LevelCheckpoint {
  std::uint32_t N = 0;         // horizon is r_{2^N}
  std::uint64_t horizon = 0;
  std::uint64_t count = 0;     // hits <= horizon
  Rational ratio;              // count / (horizon + 1)
};

/// {r_n <= bound : l(n) = m} with the density at every checkpoint r_{2^N} <= bound, N >= m.
struct HitLevels {
  std::uint32_t m = 0;
  std::uint64_t bound = 0;
  std::vector<std::uint64_t> levels;
  std::vector<LevelCheckpoint> checkpoints;

  Rational min_checkpoint_ratio() const;
};

HitLevels hit_levels(std::uint32_t m, std::uint64_t bound);

}  // namespace harmtree
