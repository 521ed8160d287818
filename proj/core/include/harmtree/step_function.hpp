#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "harmtree/node_store.hpp"
#include "harmtree/tree.hpp"
#include "harmtree/value_space.hpp"

namespace harmtree {

/// An M_n-measurable function on the boundary: one value per level-n sector.
///
/// Stored as a node DAG whose leaves sit exactly at `level`; interior nodes
/// carry no value. Every operation treats a leaf as constant on all finer
/// sectors, so a function of level n is implicitly also of every level >= n.
class StepFunction {
 public:
  StepFunction(ValueSpace space, std::uint32_t level, std::shared_ptr<const NodeStore> store, NodeId root);

  /// Level-0 constant; usable on any tree.
  static StepFunction constant(const ValueSpace& space, const Value& value);
  /// `values` lists the level-n sectors in index order.
  static StepFunction from_sector_values(const Tree& tree, const ValueSpace& space, std::uint32_t level,
                                         std::span<const Value> values);
  static StepFunction from_function(const Tree& tree, const ValueSpace& space, std::uint32_t level,
                                    const std::function<Value(Vertex)>& value_of);

  const ValueSpace& space() const { return space_; }
  std::uint32_t level() const { return level_; }
  const NodeStore& store() const { return *store_; }
  NodeId root() const { return root_; }

  /// Value on the sector B_x; x must be at level >= level().
  Value value_at(const Tree& tree, Vertex x) const;
  /// Values on the sectors of level max(level(), at_level), in index order.
  std::vector<Value> sector_values(const Tree& tree, std::uint32_t at_level = 0) const;
  /// Number of distinct nodes; a size measure for the compressed form.
  std::size_t node_count() const { return store_->size(); }

 private:
  ValueSpace space_;
  std::uint32_t level_;
  std::shared_ptr<const NodeStore> store_;
  NodeId root_;
};

/// The convergence-in-probability distance
///   rho~(h1, h2) = integral of d / (1 + d) dP,  d = dist(h1(e), h2(e)),
/// evaluated exactly on the common refinement. Always in [0, 1].
Rational l0_distance(const Tree& tree, const StepFunction& a, const StepFunction& b);

/// E[h | M_n]: value on B_x is the p-weighted mean of h over the sectors below x.
StepFunction conditional_expectation(const Tree& tree, const StepFunction& h, std::uint32_t n);

/// The same function written at level m >= level(h).
StepFunction refine(const Tree& tree, const StepFunction& h, std::uint32_t m);

/// Pointwise combination at level max(level(a), level(b)).
StepFunction combine(const Tree& tree, const StepFunction& a, const StepFunction& b,
                     const std::function<Value(const Value&, const Value&)>& op);
StepFunction add(const Tree& tree, const StepFunction& a, const StepFunction& b);
StepFunction subtract(const Tree& tree, const StepFunction& a, const StepFunction& b);
StepFunction map_values(const StepFunction& h, const ValueSpace& target,
                        const std::function<Value(const Value&)>& op);
StepFunction scale(const Rational& lambda, const StepFunction& h);
/// Coordinate i of a product-valued function, as a scalar function.
StepFunction component(const StepFunction& h, std::size_t i);

/// Equality as functions on the boundary (every sector has positive measure).
bool same_function(const Tree& tree, const StepFunction& a, const StepFunction& b);

/// Open ball B(center, radius) in L0.
struct Ball {
  StepFunction center;
  Rational radius;
};

bool contains(const Tree& tree, const Ball& ball, const StepFunction& g);

}  // namespace harmtree
