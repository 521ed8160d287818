#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "harmtree/harmonic.hpp"
#include "harmtree/rational.hpp"
#include "harmtree/step_function.hpp"
#include "harmtree/tree.hpp"

namespace harmtree {

/// The set A = {n <= N : omega_n(f) in V} with its running densities
/// card(A n [0, n]) / (n + 1).
struct HitReport {
  std::uint32_t horizon = 0;
  std::vector<std::uint32_t> indices;      // sorted
  std::vector<Rational> profile;           // profile[n] for n = 0..horizon
  std::vector<std::optional<Rational>> distances;  // rho~(omega_n(f), center) when a single ball was tested

  bool contains(std::uint32_t n) const;
  std::uint64_t count_up_to(std::uint32_t n) const;
};

/// Builds a report from a membership predicate evaluated at n = 0..horizon.
HitReport hit_report(std::uint32_t horizon, const std::function<bool(std::uint32_t)>& member);

/// Membership of omega_n(f) in the open ball, for n = 0..N. Requires N <= depth(f), radius > 0.
HitReport hit_set(const Tree& tree, const HarmonicFunction& f, const Ball& ball, std::uint32_t N);

/// The indices restricted to an arbitrary index set theta; the profile is recomputed.
HitReport restrict_to(const HitReport& report, const std::set<std::uint32_t>& theta);

/// [floor(N/2), N].
std::vector<std::uint32_t> default_checkpoints(std::uint32_t horizon);

/// Finite-horizon surrogates for liminf / limsup: the minimum / maximum of the
/// profile over the checkpoints. An empty checkpoint list means the default.
Rational lower_density_estimate(const HitReport& report, std::vector<std::uint32_t> checkpoints = {});
Rational upper_density_estimate(const HitReport& report, std::vector<std::uint32_t> checkpoints = {});

/// rho~(c1, c2) >= r1 + r2 proves the open balls disjoint (triangle inequality).
bool provably_disjoint(const Tree& tree, const Ball& a, const Ball& b);

struct DisjointnessAudit {
  Rational center_distance;
  Rational radius_sum;
  HitReport first;
  HitReport second;
  /// n for which card(A1 n [0,n]) + card(A2 n [0,n]) > n + 1; always empty for disjoint balls.
  std::vector<std::uint32_t> violations;

  bool holds() const { return violations.empty(); }
  /// 1 - (V2 fraction at n): the most the V1 fraction can be at n.
  Rational complement_bound(std::uint32_t n) const;
};

/// Throws std::invalid_argument if the balls are not provably disjoint.
DisjointnessAudit disjointness_audit(const Tree& tree, const HarmonicFunction& f, const Ball& first,
                                     const Ball& second, std::uint32_t N);

}  // namespace harmtree
