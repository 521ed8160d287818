#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "harmtree/density.hpp"
#include "harmtree/harmonic.hpp"
#include "harmtree/step_function.hpp"
#include "harmtree/targets.hpp"
#include "harmtree/tree.hpp"

namespace harmtree {

/// The sacrificed descent chosen below every level-s vertex of one shape.
struct PathChoice {
  std::vector<std::uint32_t> path;  // n child positions
  Rational probability;             // product of the chosen weights
};

struct Sacrifice {
  Vertex v;
  Vertex w;
  Rational probability;
};

struct ExtensionReport {
  std::uint32_t s = 0;
  std::uint32_t n = 0;
  /// Keyed by the shape of the level-s vertex; vertices of equal shape share the choice.
  std::map<ShapeId, PathChoice> choices;
  /// sum over v in T_s of p(B_v) P(v -> w(v)) = total measure of the sacrificed sectors.
  Rational bad_mass;
  Rational max_path_probability;
  /// rho~(omega_{s+n}(Psi), h).
  Rational achieved_distance;
  /// |T_s|, saturating.
  std::uint64_t sacrificed_count = 0;
};

/// The first `limit` pairs (v, w(v)) in index order of v.
std::vector<Sacrifice> sacrificed(const Tree& tree, const ExtensionReport& report, std::uint64_t limit);

struct Extension {
  HarmonicFunction psi;
  ExtensionReport report;
};

/// Extends phi (depth s, harmonic to level s - 1) to a function of depth s + n,
/// harmonic to level s + n - 1, whose level-(s+n) trace equals h outside one
/// sector per level-s vertex. Below each v the sacrificed vertex w(v) is found
/// by following a minimum-weight child n times (the last minimal child on
/// ties); every other vertex below v averages its children, and the values on
/// the path to w(v) are solved top-down from the mean-value identity.
Extension extend_step(const Tree& tree, const HarmonicFunction& phi, const StepFunction& h, std::uint32_t n);

struct BuildStep {
  std::uint64_t k = 0;
  std::uint32_t s = 0;    // r_{k-1}
  std::uint32_t ell = 0;  // l(k); also the target index
  std::uint32_t r = 0;    // r_k
  Rational radius;        // 2^-l(k)
  Rational bad_mass;
  Rational achieved_distance;  // at extension time
  Rational final_distance;     // rho~(omega_{r_k}(f), h_{l(k)}) for the finished f
  bool member = false;         // final_distance < radius
  ExtensionReport extension;
};

struct BuildResult {
  HarmonicFunction f;
  std::vector<BuildStep> log;
  std::vector<Diagnostic> harmonic_diagnostics;

  bool verified() const;
};

/// Runs the extension step for k = 1..K, K = max{k : r_k <= depth}, with
/// s = r_{k-1}, n = l(k) and target h_{l(k)}, starting from f(x0) = 0.
/// Every ball membership is re-checked on the finished function.
BuildResult build_frequently_universal(const Tree& tree, const TargetSource& targets, std::uint32_t depth);

struct Translation {
  HarmonicFunction f;
  std::uint32_t n0 = 0;  // constant_tail_level(phi)
};

/// f0 + phi. A shallower phi is first continued by its constant tail.
Translation translate(const Tree& tree, const HarmonicFunction& f0, const HarmonicFunction& phi);

struct XWitness {
  HarmonicFunction f;
  std::uint32_t n1 = 0;
  std::uint32_t sigma = 0;
  std::uint32_t N0 = 0;
  HitReport hits;         // for B(target, epsilon), up to N0
  Rational hit_fraction;  // card(hits <= N0) / (N0 + 1)
  Rational threshold;     // 1 - 1/m
  bool achieved() const { return hit_fraction > threshold; }
};

/// One extension step into B(target, epsilon) at level n1, then a constant run
/// of sigma = (m - 1) n1 + 1 levels so that sigma > (1 - 1/m)(n1 + sigma).
XWitness build_x_class_witness(const Tree& tree, const StepFunction& target, const Rational& epsilon,
                               std::uint32_t m, std::uint32_t depth);

}  // namespace harmtree
