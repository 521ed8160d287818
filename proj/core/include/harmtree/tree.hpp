#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "harmtree/rational.hpp"

namespace harmtree {

/// A vertex addressed by its level and its position inside that level.
/// Positions follow breadth-first order: by parent position, then by child order.
struct Vertex {
  std::uint32_t level = 0;
  std::uint64_t index = 0;

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

using ShapeId = std::uint32_t;

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One violated tree invariant, attributed to a vertex by breadth-first ordinal.
struct Diagnostic {
  std::string kind;
  std::uint64_t vertex = 0;
  std::string message;
};

/// A finitely-branching rooted tree truncated at a fixed depth, with exact
/// transition weights q(x, y) on every parent-to-child edge.
///
/// Isomorphic weighted subtrees are stored once ("shapes"), so a homogeneous
/// tree of depth D costs D + 1 shapes however many vertices it has. Vertices
/// are never materialized; they are addressed by (level, index) and located
/// by descending through shape widths. Copies share storage and the object is
/// immutable after construction.
class Tree {
 public:
  struct Shape {
    std::vector<Rational> weights;     // aligned with children
    std::vector<ShapeId> children;
    std::vector<std::uint64_t> width;  // width[j]: descendants at relative depth j
    std::uint32_t min_leaf_depth = 0;  // shallowest relative depth of a leaf
  };

  /// Unchecked construction. Entry i lists the child weights of the i-th
  /// vertex in breadth-first order; children take the next unused ordinals.
  /// Only structural consistency is enforced here; weight and branching
  /// invariants are reported by validate().
  static Tree from_breadth_first(const std::vector<std::vector<Rational>>& child_weights);

  /// Every vertex above `depth` has children carrying `weights`, in order.
  static Tree homogeneous(std::vector<Rational> weights, std::uint32_t depth);

  std::uint32_t depth() const;
  Vertex root() const { return Vertex{}; }
  ShapeId root_shape() const;
  const Shape& shape(ShapeId id) const;
  std::size_t shape_count() const;

  std::uint64_t level_size(std::uint32_t level) const;
  /// Total number of stored vertices; saturates at UINT64_MAX.
  std::uint64_t vertex_count() const;
  bool contains(Vertex v) const;

  /// Breadth-first ordinal: position of v in the enumeration x0, x1, ...
  std::uint64_t ordinal(Vertex v) const;
  Vertex from_ordinal(std::uint64_t ordinal) const;

  ShapeId shape_of(Vertex v) const;
  /// Child positions leading from the root to v.
  std::vector<std::uint32_t> path(Vertex v) const;
  Vertex at_path(std::span<const std::uint32_t> path) const;

  std::optional<Vertex> parent(Vertex v) const;
  std::vector<Vertex> children(Vertex v) const;
  std::span<const Rational> child_weights(Vertex v) const;
  /// q(x, y) for a child y of x; zero when y is the parent of x.
  Rational weight(Vertex x, Vertex y) const;
  Vertex ancestor(Vertex v, std::uint32_t level) const;

  /// Calls visit(vertex, shape) for every vertex of `level`, in index order.
  template <class Visit>
  void for_each_at_level(std::uint32_t level, Visit&& visit) const {
    std::uint64_t next = 0;
    walk_level(root_shape(), 0, level, next, visit);
  }

  /// Breadth-first child-weight listing; inverse of from_breadth_first.
  std::vector<std::vector<Rational>> to_breadth_first() const;

  friend bool operator==(const Tree& a, const Tree& b);

 private:
  struct Data;
  explicit Tree(std::shared_ptr<const Data> data);

  template <class Visit>
  void walk_level(ShapeId s, std::uint32_t at, std::uint32_t level, std::uint64_t& next,
                  Visit& visit) const {
    if (at == level) {
      visit(Vertex{level, next++}, s);
      return;
    }
    for (ShapeId c : shape(s).children) walk_level(c, at + 1, level, next, visit);
  }

  std::shared_ptr<const Data> data_;
};

/// build_homogeneous with q = 1/branching on every edge.
Tree build_homogeneous(std::uint32_t branching, std::uint32_t depth);
/// Throws TreeError if the weights are not positive, do not sum to 1, or do
/// not match the branching.
Tree build_homogeneous(std::uint32_t branching, std::uint32_t depth,
                       const std::vector<Rational>& weights);

/// Every vertex above `depth` gets a branching drawn from [min_branching,
/// max_branching] and weights a_i / sum(a) with integers a_i in [1, 9].
/// Deterministic for a given seed.
Tree random_tree(std::uint32_t min_branching, std::uint32_t max_branching, std::uint32_t depth,
                 std::uint64_t seed);

/// Unique minimal path z0 = x, ..., zn = y; its length is size() - 1.
std::vector<Vertex> geodesic(const Tree& tree, Vertex x, Vertex y);

/// Empty iff every tree invariant holds. One diagnostic per violation,
/// sorted by vertex ordinal.
std::vector<Diagnostic> validate(const Tree& tree);

/// The first min(limit, vertex_count()) vertices in breadth-first order.
std::vector<Vertex> enumerate_vertices(const Tree& tree, std::uint64_t limit);

}  // namespace harmtree
