#include "harmtree/scheduler.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace harmtree {

std::uint32_t ell(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("l(k) needs k >= 1");
  return static_cast<std::uint32_t>(std::countr_zero(k)) + 1;
}

std::uint64_t r(std::uint64_t k) {
  if (k > (std::uint64_t{1} << 62)) throw std::overflow_error("r(k) overflows");
  return 2 * k - static_cast<std::uint64_t>(std::popcount(k));
}

std::uint64_t count_ell(std::uint32_t N, std::uint32_t m) {
  if (m < 1 || m > N) {
    throw std::invalid_argument("count_ell needs 1 <= m <= N, got N = " + std::to_string(N) +
                                ", m = " + std::to_string(m));
  }
  if (N > 40) throw std::invalid_argument("count_ell enumerates; N must be at most 40");
  const std::uint64_t top = std::uint64_t{1} << N;
  std::uint64_t count = 0;
  for (std::uint64_t k = 1; k <= top; ++k) count += ell(k) == m;
  return count;
}

Schedule Schedule::up_to(std::uint64_t K) {
  Schedule s;
  s.ell.reserve(K);
  s.r.reserve(K);
  std::uint64_t acc = 0;
  for (std::uint64_t k = 1; k <= K; ++k) {
    s.ell.push_back(harmtree::ell(k));
    acc += s.ell.back();
    s.r.push_back(acc);
  }
  return s;
}

Schedule Schedule::within_depth(std::uint64_t depth) { return up_to(steps_within_depth(depth)); }

std::uint64_t steps_within_depth(std::uint64_t depth) {
  // r is increasing, so bisect.
  std::uint64_t lo = 0, hi = depth + 1;
  while (lo + 1 < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (r(mid) <= depth) lo = mid;
    else hi = mid;
  }
  return lo;
}

Rational HitLevels::min_checkpoint_ratio() const {
  if (checkpoints.empty()) throw std::logic_error("no checkpoint within the bound");
  Rational out = checkpoints.front().ratio;
  for (const auto& c : checkpoints) out = std::min(out, c.ratio);
  return out;
}

HitLevels hit_levels(std::uint32_t m, std::uint64_t bound) {
  if (m < 1) throw std::invalid_argument("hit_levels needs m >= 1");
  HitLevels out;
  out.m = m;
  out.bound = bound;
  for (std::uint64_t n = 1; r(n) <= bound; ++n) {
    if (ell(n) == m) out.levels.push_back(r(n));
  }
  for (std::uint32_t N = m; N < 62; ++N) {
    const std::uint64_t horizon = r(std::uint64_t{1} << N);
    if (horizon > bound) break;
    LevelCheckpoint c;
    c.N = N;
    c.horizon = horizon;
    for (auto level : out.levels) c.count += level <= horizon;
    c.ratio = Rational(static_cast<unsigned long>(c.count), static_cast<unsigned long>(horizon + 1));
    c.ratio.canonicalize();
    out.checkpoints.push_back(c);
  }
  return out;
}

}  // namespace harmtree
