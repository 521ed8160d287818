#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "harmtree/node_store.hpp"
#include "harmtree/step_function.hpp"
#include "harmtree/tree.hpp"
#include "harmtree/value_space.hpp"

namespace harmtree {

/// Vertex values f(x) for every vertex of levels 0..depth, with the mean-value
/// identity f(x) = sum_{y in S(x)} q(x, y) f(y) asserted on levels
/// 0..interior_depth. interior_depth is -1 when nothing is asserted.
///
/// Values are stored as a node DAG that mirrors the tree, so functions built
/// from a few repeated patterns stay small at any depth.
class HarmonicFunction {
 public:
  HarmonicFunction(ValueSpace space, std::uint32_t depth, int interior_depth,
                   std::shared_ptr<const NodeStore> store, NodeId root);

  /// The depth-0 function holding `root_value` at the root.
  static HarmonicFunction seed(const ValueSpace& space, const Value& root_value);
  static HarmonicFunction constant(const Tree& tree, const ValueSpace& space, const Value& value,
                                   std::uint32_t depth);
  /// Reads a value for every vertex of levels 0..depth.
  static HarmonicFunction from_values(const Tree& tree, const ValueSpace& space, std::uint32_t depth,
                                      int interior_depth, const std::function<Value(Vertex)>& value_of);

  const ValueSpace& space() const { return space_; }
  std::uint32_t depth() const { return depth_; }
  int interior_depth() const { return interior_depth_; }
  const NodeStore& store() const { return *store_; }
  NodeId root() const { return root_; }
  std::size_t node_count() const { return store_->size(); }

  Value value_at(const Tree& tree, Vertex x) const;
  /// All stored (vertex, value) pairs in breadth-first order.
  std::vector<std::pair<Vertex, Value>> values(const Tree& tree) const;

  HarmonicFunction with_interior_depth(int interior_depth) const;

 private:
  ValueSpace space_;
  std::uint32_t depth_;
  int interior_depth_;
  std::shared_ptr<const NodeStore> store_;
  NodeId root_;
};

/// Empty iff the mean-value identity holds exactly at every vertex of levels
/// 0..interior_depth. One diagnostic per failing vertex.
std::vector<Diagnostic> check_harmonic(const Tree& tree, const HarmonicFunction& f);

/// omega_n(f): the level-n step function whose value on B_x is f(x).
StepFunction boundary_trace(const Tree& tree, const HarmonicFunction& f, std::uint32_t n);

/// E[omega_m(f) | M_n] == omega_n(f), exactly. Requires harmonicity on levels
/// n..m-1, i.e. m - 1 <= interior_depth.
bool martingale_check(const Tree& tree, const HarmonicFunction& f, std::uint32_t n, std::uint32_t m);

/// Sets f(x) = f(x^-) below the current depth down to `depth`. Harmonic at every
/// new interior vertex because all of its children repeat its value.
HarmonicFunction constant_tail_extend(const Tree& tree, const HarmonicFunction& f, std::uint32_t depth);

/// The harmonic function of depth level(h) whose value at x is E[h | B_x];
/// its boundary trace at level(h) is h.
HarmonicFunction harmonic_from_trace(const Tree& tree, const StepFunction& h);

/// Restriction to levels 0..depth.
HarmonicFunction truncate(const HarmonicFunction& f, std::uint32_t depth);

/// Smallest n0 with f(x) = f(x^-) at every stored level above n0.
std::uint32_t constant_tail_level(const HarmonicFunction& f);

/// The pointwise-convergence metric, truncated to the first `terms` vertices of
/// the breadth-first enumeration:
///   value = sum_{j <= J} 2^-j t_j / (1 + t_j),  t_j = dist(f(x_j), g(x_j)),
/// with J = terms - 1. The omitted tail is at most 2^-J.
struct HqDistance {
  Rational value;
  Rational truncation_bound;
  std::uint64_t terms = 0;
};
HqDistance hq_distance(const Tree& tree, const HarmonicFunction& f, const HarmonicFunction& g,
                       std::uint64_t terms);

HarmonicFunction map_values(const HarmonicFunction& f, const ValueSpace& target,
                            const std::function<Value(const Value&)>& op);
HarmonicFunction zip_values(const HarmonicFunction& f, const HarmonicFunction& g, const ValueSpace& target,
                            const std::function<Value(const Value&, const Value&)>& op);

HarmonicFunction add(const HarmonicFunction& f, const HarmonicFunction& g);
HarmonicFunction subtract(const HarmonicFunction& f, const HarmonicFunction& g);
HarmonicFunction scale(const Rational& lambda, const HarmonicFunction& f);
HarmonicFunction linear_combination(std::span<const Rational> coefficients,
                                    std::span<const HarmonicFunction> functions);

/// Coordinate i of a product-valued function, as a scalar function.
HarmonicFunction component(const HarmonicFunction& f, std::size_t i);
/// Concatenates scalar (or product) components into one product-valued function.
HarmonicFunction assemble(std::span<const HarmonicFunction> components);

}  // namespace harmtree
