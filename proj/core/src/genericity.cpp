#include "harmtree/genericity.hpp"

#include <stdexcept>
#include <string>

#include "harmtree/scheduler.hpp"

namespace harmtree {

namespace {

HarmonicFunction assemble_as(const ValueSpace& space, std::span<const HarmonicFunction> parts) {
  if (space.kind() == ValueSpace::Kind::scalar) return parts.front();
  auto out = assemble(parts);
  return map_values(out, space, [](const Value& v) { return v; });
}

}  // namespace

std::vector<HarmonicFunction> components(const VectorHarmonic& F) {
  if (F.space().kind() == ValueSpace::Kind::scalar) return {F};
  std::vector<HarmonicFunction> out;
  for (std::size_t i = 0; i < F.space().dim(); ++i) out.push_back(component(F, i));
  return out;
}

BuildResult build_vector_universal(const Tree& tree, std::size_t d, const TargetSource& targets,
                                   std::uint32_t depth) {
  if (targets.space().dim() != d) {
    throw DimensionError("targets live in " + targets.space().name() + ", expected dimension " + std::to_string(d));
  }
  return build_frequently_universal(tree, targets, depth);
}

bool contains(const Tree& tree, const ProductBall& ball, const StepFunction& g) {
  if (ball.factors.size() > g.space().dim()) throw DimensionError("product ball has more factors than the space");
  for (std::size_t i = 0; i < ball.factors.size(); ++i) {
    const StepFunction gi = g.space().kind() == ValueSpace::Kind::scalar ? g : component(g, i);
    if (!contains(tree, ball.factors[i], gi)) return false;
  }
  return true;
}

VeeSet vee_set(const StepFunction& h, std::span<const Rational> coefficients, std::uint32_t M) {
  if (coefficients.empty()) throw std::invalid_argument("vee set needs at least one coefficient");
  if (coefficients.back() == 0) throw std::invalid_argument("the last coefficient a_s must be nonzero");
  if (h.space().kind() != ValueSpace::Kind::scalar) throw DimensionError("vee set target must be scalar");
  const auto s = coefficients.size();
  VeeSet out;
  out.epsilon = pow2(-static_cast<long>(M)) / Rational(static_cast<unsigned long>(s));
  for (std::size_t i = 0; i < s; ++i) {
    const Rational& a = coefficients[i];
    Rational radius = out.epsilon;
    if (a != 0 && abs(a) > 1) radius = out.epsilon / abs(a);
    StepFunction center = i + 1 < s ? StepFunction::constant(ValueSpace::scalar(), Value::scalar(0))
                                    : scale(Rational(1 / a), h);
    out.ball.factors.push_back(Ball{std::move(center), std::move(radius)});
  }
  return out;
}

SpanReport combine_and_verify(const Tree& tree, const VectorHarmonic& F, std::span<const Rational> coefficients,
                              const StepFunction& h, std::uint32_t M, std::uint32_t horizon) {
  const auto parts = components(F);
  if (coefficients.size() > parts.size()) {
    throw DimensionError("more coefficients than components: " + std::to_string(coefficients.size()) + " > " +
                         std::to_string(parts.size()));
  }
  if (horizon > F.depth()) throw std::out_of_range("horizon exceeds the function's depth");
  VeeSet vee = vee_set(h, coefficients, M);
  const std::span<const HarmonicFunction> used(parts.data(), coefficients.size());
  SpanReport out{linear_combination(coefficients, used), std::move(vee), pow2(-static_cast<long>(M)), {}, {}, {}, {}, {}};
  out.harmonic_diagnostics = check_harmonic(tree, out.g);
  for (std::uint32_t n = 0; n <= horizon; ++n) {
    SpanEntry e;
    e.n = n;
    e.in_vee = contains(tree, out.vee.ball, boundary_trace(tree, F, n));
    e.distance = l0_distance(tree, boundary_trace(tree, out.g, n), h);
    e.in_target = e.distance <= out.bound;
    if (e.in_vee) out.vee_hits.push_back(n);
    if (e.in_target) out.target_hits.push_back(n);
    if (e.in_vee && !e.in_target) out.exceptions.push_back(n);
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::vector<std::uint32_t> guaranteed_vee_hits(const Tree& tree, const VeeSet& vee, const TargetSource& targets,
                                               std::uint32_t depth) {
  const auto& space = targets.space();
  if (vee.ball.factors.size() > space.dim()) throw DimensionError("vee set has more factors than the targets");
  std::vector<std::uint32_t> out;
  const auto K = steps_within_depth(depth);
  for (std::uint64_t k = 1; k <= K; ++k) {
    const auto l = ell(k);
    const StepFunction hk = targets.target(l);
    bool sure = true;
    for (std::size_t i = 0; i < vee.ball.factors.size() && sure; ++i) {
      const auto& factor = vee.ball.factors[i];
      const StepFunction hi = space.kind() == ValueSpace::Kind::scalar ? hk : component(hk, i);
      const Rational slack = 2 * pow2(-static_cast<long>(l)) / space.coordinate_weight(i);
      sure = l0_distance(tree, hi, factor.center) + slack <= factor.radius;
    }
    if (sure) out.push_back(static_cast<std::uint32_t>(r(k)));
  }
  return out;
}

Densified densify(const Tree& tree, const VectorHarmonic& F, std::span<const HarmonicFunction> phi,
                  std::uint64_t terms) {
  const auto parts = components(F);
  if (phi.size() != parts.size()) {
    throw DimensionError("expected " + std::to_string(parts.size()) + " prescribed functions, got " +
                         std::to_string(phi.size()));
  }
  std::uint64_t stored = 0;
  for (std::uint32_t n = 0; n <= F.depth(); ++n) stored += tree.level_size(n);

  Densified out{F, F, {}, 0};
  std::vector<HarmonicFunction> g_parts;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::uint32_t n = static_cast<std::uint32_t>(i) + 1;
    const auto& target = phi[i];
    if (target.space().kind() != ValueSpace::Kind::scalar) throw DimensionError("prescribed functions must be scalar");
    if (target.depth() > F.depth()) throw std::invalid_argument("prescribed function is deeper than F");
    if (auto diags = check_harmonic(tree, target); !diags.empty()) {
      throw std::invalid_argument("prescribed function " + std::to_string(n) + " is not harmonic: " +
                                  diags.front().message);
    }
    const HarmonicFunction phi_n = constant_tail_extend(tree, target, F.depth());

    DensifiedComponent c;
    c.index = n;
    while ((std::uint64_t{1} << c.j0) <= 2 * std::uint64_t{n}) ++c.j0;  // 2^(j0-1) > n
    if (c.j0 >= stored) {
      throw std::invalid_argument("depth too small: vertex x_" + std::to_string(c.j0) + " is not stored");
    }
    c.level = tree.from_ordinal(c.j0).level;
    c.limit = Rational(1, n);

    const HarmonicFunction g = constant_tail_extend(tree, truncate(subtract(phi_n, parts[i]), c.level), F.depth());
    c.distance = hq_distance(tree, add(parts[i], g), phi_n, std::max(terms, c.j0 + 1));
    out.L = std::max(out.L, c.level);
    out.components.push_back(std::move(c));
    g_parts.push_back(g);
  }
  out.G = assemble_as(F.space(), g_parts);
  out.sum = add(F, out.G);
  return out;
}

ShiftedHitCheck shifted_hit_check(const Tree& tree, const VectorHarmonic& F, const Densified& densified,
                                  const Ball& ball, std::uint32_t horizon) {
  if (horizon > F.depth()) throw std::out_of_range("horizon exceeds the function's depth");
  ShiftedHitCheck out;
  out.L = densified.L;
  const Ball moved{subtract(tree, ball.center, boundary_trace(tree, densified.G, out.L)), ball.radius};
  for (std::uint32_t n = out.L; n <= horizon; ++n) {
    if (contains(tree, ball, boundary_trace(tree, densified.sum, n))) out.shifted.push_back(n);
    if (contains(tree, moved, boundary_trace(tree, F, n))) out.translated.push_back(n);
  }
  return out;
}

}  // namespace harmtree
