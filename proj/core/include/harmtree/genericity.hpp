#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "harmtree/builder.hpp"
#include "harmtree/density.hpp"
#include "harmtree/harmonic.hpp"
#include "harmtree/step_function.hpp"
#include "harmtree/targets.hpp"

namespace harmtree {

/// F = (f_1, ..., f_d) as one function over product(d).
using VectorHarmonic = HarmonicFunction;

std::vector<HarmonicFunction> components(const VectorHarmonic& F);

/// The frequently universal construction over product(d).
BuildResult build_vector_universal(const Tree& tree, std::size_t d, const TargetSource& targets,
                                   std::uint32_t depth);

/// A product of open L0 balls, one per constrained factor; factors at index
/// >= factors.size() are unconstrained.
struct ProductBall {
  std::vector<Ball> factors;  // scalar balls
};

/// Membership of a product(d) step function, factor by factor.
bool contains(const Tree& tree, const ProductBall& ball, const StepFunction& g);

struct VeeSet {
  Rational epsilon;  // 1 / (s 2^M)
  ProductBall ball;
};

/// For coefficients a_1..a_s (a_s != 0) and a scalar target h:
///   B(0, r_1) x ... x B(0, r_{s-1}) x B(h / a_s, r_s),  r_i = epsilon min(1 / |a_i|, 1),
/// with r_i = epsilon when a_i = 0.
VeeSet vee_set(const StepFunction& h, std::span<const Rational> coefficients, std::uint32_t M);

struct SpanEntry {
  std::uint32_t n = 0;
  bool in_vee = false;
  Rational distance;  // rho~(omega_n(g), h)
  bool in_target = false;  // distance <= 2^-M
};

struct SpanReport {
  HarmonicFunction g;  // sum a_i f_i
  VeeSet vee;
  Rational bound;      // 2^-M
  std::vector<SpanEntry> entries;  // n = 0..horizon
  std::vector<std::uint32_t> vee_hits;
  std::vector<std::uint32_t> target_hits;
  std::vector<std::uint32_t> exceptions;  // in vee_hits but not in target_hits
  std::vector<Diagnostic> harmonic_diagnostics;

  bool inclusion_holds() const { return exceptions.empty(); }
};

SpanReport combine_and_verify(const Tree& tree, const VectorHarmonic& F, std::span<const Rational> coefficients,
                              const StepFunction& h, std::uint32_t M, std::uint32_t horizon);

/// Levels r_k <= depth at which a build over `targets` must land in the vee
/// set: for every constrained factor i, rho~(h_{l(k)}^i, c_i) + 2^{1-l(k)} / w_i <= r_i,
/// w_i the coordinate weight. The factor 2 / w_i converts the product-space
/// guarantee into a per-coordinate one.
std::vector<std::uint32_t> guaranteed_vee_hits(const Tree& tree, const VeeSet& vee, const TargetSource& targets,
                                               std::uint32_t depth);

struct DensifiedComponent {
  std::uint32_t index = 0;  // n, from 1
  std::uint64_t j0 = 0;     // smallest j with 2^(j-1) > n
  std::uint32_t level = 0;  // N(n) = level(x_{j0})
  HqDistance distance;      // hq(f_n + g_n, phi_n)
  Rational limit;           // 1/n
  bool verified() const { return distance.value + distance.truncation_bound < limit; }
};

struct Densified {
  VectorHarmonic sum;  // F + G
  VectorHarmonic G;
  std::vector<DensifiedComponent> components;
  std::uint32_t L = 0;  // max N(n)
};

/// g_n = phi_n - f_n on levels <= N(n), continued by its constant tail.
/// `terms` caps the enumeration used for each distance (at least j0 + 1 are used).
Densified densify(const Tree& tree, const VectorHarmonic& F, std::span<const HarmonicFunction> phi,
                  std::uint64_t terms = 4096);

struct ShiftedHitCheck {
  std::uint32_t L = 0;
  std::vector<std::uint32_t> shifted;     // {L <= n <= N : omega_n(F + G) in V}
  std::vector<std::uint32_t> translated;  // {L <= n <= N : omega_n(F) in V - omega_L(G)}
  bool equal() const { return shifted == translated; }
};

ShiftedHitCheck shifted_hit_check(const Tree& tree, const VectorHarmonic& F, const Densified& densified,
                                  const Ball& ball, std::uint32_t horizon);

}  // namespace harmtree
