#include "harmtree/step_function.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

namespace harmtree {

namespace {

constexpr std::uint64_t kMaxListed = std::uint64_t{1} << 24;

bool is_leaf(const Node& n) { return n.children.empty(); }

/// Child c of a node; a leaf stands for itself on every finer sector.
NodeId descend(const Tree& tree, ShapeId s, const NodeStore& store, NodeId id, std::size_t c) {
  const Node& n = store[id];
  if (is_leaf(n)) return id;
  if (n.children.size() != tree.shape(s).children.size()) {
    throw std::invalid_argument("step function does not fit the tree's branching");
  }
  return n.children[c];
}

void require_same_space(const StepFunction& a, const StepFunction& b) {
  if (!(a.space() == b.space())) {
    throw DimensionError("step functions live in different spaces: " + a.space().name() + " vs " +
                         b.space().name());
  }
}

void require_level(const Tree& tree, std::uint32_t level) {
  if (level > tree.depth()) {
    throw std::out_of_range("level " + std::to_string(level) + " exceeds tree depth " +
                            std::to_string(tree.depth()));
  }
}

template <class Leaf>
NodeId build_level(const Tree& tree, std::uint32_t level, NodeBuilder& nb, Leaf&& leaf_value) {
  std::uint64_t next = 0;
  auto walk = [&](auto&& self, ShapeId s, std::uint32_t at) -> NodeId {
    if (at == level) return nb.leaf(leaf_value(Vertex{level, next++}));
    const auto& sh = tree.shape(s);
    if (sh.children.empty()) throw std::out_of_range("tree ends above the requested level");
    std::vector<NodeId> kids;
    kids.reserve(sh.children.size());
    for (ShapeId c : sh.children) kids.push_back(self(self, c, at + 1));
    return nb.make(Value{}, std::move(kids));
  };
  return walk(walk, tree.root_shape(), 0);
}

}  // namespace

StepFunction::StepFunction(ValueSpace space, std::uint32_t level, std::shared_ptr<const NodeStore> store,
                           NodeId root)
    : space_(space), level_(level), store_(std::move(store)), root_(root) {}

StepFunction StepFunction::constant(const ValueSpace& space, const Value& value) {
  space.require(value);
  NodeBuilder nb;
  const NodeId root = nb.leaf(value);
  return StepFunction(space, 0, nb.finish(), root);
}

StepFunction StepFunction::from_sector_values(const Tree& tree, const ValueSpace& space, std::uint32_t level,
                                              std::span<const Value> values) {
  require_level(tree, level);
  if (values.size() != tree.level_size(level)) {
    throw std::invalid_argument("expected " + std::to_string(tree.level_size(level)) + " sector values, got " +
                                std::to_string(values.size()));
  }
  for (const auto& v : values) space.require(v);
  NodeBuilder nb;
  const NodeId root = build_level(tree, level, nb, [&](Vertex x) { return values[x.index]; });
  return StepFunction(space, level, nb.finish(), root);
}

StepFunction StepFunction::from_function(const Tree& tree, const ValueSpace& space, std::uint32_t level,
                                         const std::function<Value(Vertex)>& value_of) {
  require_level(tree, level);
  if (tree.level_size(level) > kMaxListed) throw std::length_error("level too wide to list explicitly");
  NodeBuilder nb;
  const NodeId root = build_level(tree, level, nb, [&](Vertex x) {
    Value v = value_of(x);
    space.require(v);
    return v;
  });
  return StepFunction(space, level, nb.finish(), root);
}

Value StepFunction::value_at(const Tree& tree, Vertex x) const {
  NodeId id = root_;
  ShapeId s = tree.root_shape();
  for (auto c : tree.path(x)) {
    if (is_leaf((*store_)[id])) break;
    id = descend(tree, s, *store_, id, c);
    s = tree.shape(s).children[c];
  }
  const Node& n = (*store_)[id];
  if (!is_leaf(n)) throw std::invalid_argument("sector is coarser than the step function's level");
  return n.value;
}

std::vector<Value> StepFunction::sector_values(const Tree& tree, std::uint32_t at_level) const {
  const auto level = std::max(level_, at_level);
  require_level(tree, level);
  if (tree.level_size(level) > kMaxListed) throw std::length_error("level too wide to list explicitly");
  std::vector<Value> out;
  out.reserve(tree.level_size(level));
  auto walk = [&](auto&& self, ShapeId s, NodeId id, std::uint32_t at) -> void {
    if (at == level) {
      out.push_back((*store_)[id].value);
      return;
    }
    const auto& sh = tree.shape(s);
    for (std::size_t c = 0; c < sh.children.size(); ++c) {
      self(self, sh.children[c], descend(tree, s, *store_, id, c), at + 1);
    }
  };
  walk(walk, tree.root_shape(), root_, 0);
  return out;
}

Rational l0_distance(const Tree& tree, const StepFunction& a, const StepFunction& b) {
  require_same_space(a, b);
  require_level(tree, std::max(a.level(), b.level()));
  const auto& space = a.space();
  std::unordered_map<std::tuple<ShapeId, NodeId, NodeId>, Rational, IdTupleHash> memo;
  auto expect = [&](auto&& self, ShapeId s, NodeId x, NodeId y) -> Rational {
    const auto key = std::make_tuple(s, x, y);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Node& nx = a.store()[x];
    const Node& ny = b.store()[y];
    Rational out;
    if (is_leaf(nx) && is_leaf(ny)) {
      out = bounded(dist(space, nx.value, ny.value));
    } else {
      const auto& sh = tree.shape(s);
      for (std::size_t c = 0; c < sh.children.size(); ++c) {
        out += sh.weights[c] * self(self, sh.children[c], descend(tree, s, a.store(), x, c),
                                    descend(tree, s, b.store(), y, c));
      }
    }
    memo.emplace(key, out);
    return out;
  };
  return expect(expect, tree.root_shape(), a.root(), b.root());
}

StepFunction conditional_expectation(const Tree& tree, const StepFunction& h, std::uint32_t n) {
  if (n >= h.level()) throw std::out_of_range("conditional expectation needs n < level(h)");
  require_level(tree, h.level());
  const auto& store = h.store();
  std::unordered_map<std::tuple<ShapeId, NodeId>, Value, IdTupleHash> avg_memo;
  auto average = [&](auto&& self, ShapeId s, NodeId id) -> Value {
    const auto key = std::make_tuple(s, id);
    if (auto it = avg_memo.find(key); it != avg_memo.end()) return it->second;
    const Node& node = store[id];
    Value out;
    if (is_leaf(node)) {
      out = node.value;
    } else {
      const auto& sh = tree.shape(s);
      out = zero(h.space());
      for (std::size_t c = 0; c < sh.children.size(); ++c) {
        out += sh.weights[c] * self(self, sh.children[c], descend(tree, s, store, id, c));
      }
    }
    avg_memo.emplace(key, out);
    return out;
  };

  NodeBuilder nb;
  std::unordered_map<std::tuple<ShapeId, NodeId>, NodeId, IdTupleHash> memo;
  auto build = [&](auto&& self, ShapeId s, NodeId id, std::uint32_t at) -> NodeId {
    if (at == n) return nb.leaf(average(average, s, id));
    const auto key = std::make_tuple(s, id);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const auto& sh = tree.shape(s);
    std::vector<NodeId> kids;
    for (std::size_t c = 0; c < sh.children.size(); ++c) {
      kids.push_back(self(self, sh.children[c], descend(tree, s, store, id, c), at + 1));
    }
    const NodeId out = nb.make(Value{}, std::move(kids));
    memo.emplace(key, out);
    return out;
  };
  const NodeId root = build(build, tree.root_shape(), h.root(), 0);
  return StepFunction(h.space(), n, nb.finish(), root);
}

StepFunction refine(const Tree& tree, const StepFunction& h, std::uint32_t m) {
  if (m < h.level()) throw std::out_of_range("refinement level below the function's level");
  require_level(tree, m);
  const auto& store = h.store();
  NodeBuilder nb;
  std::unordered_map<std::tuple<ShapeId, NodeId, std::uint32_t>, NodeId, IdTupleHash> memo;
  auto build = [&](auto&& self, ShapeId s, NodeId id, std::uint32_t at) -> NodeId {
    if (at == m) return nb.leaf(store[id].value);
    const auto key = std::make_tuple(s, id, at);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const auto& sh = tree.shape(s);
    std::vector<NodeId> kids;
    for (std::size_t c = 0; c < sh.children.size(); ++c) {
      kids.push_back(self(self, sh.children[c], descend(tree, s, store, id, c), at + 1));
    }
    const NodeId out = nb.make(Value{}, std::move(kids));
    memo.emplace(key, out);
    return out;
  };
  const NodeId root = build(build, tree.root_shape(), h.root(), 0);
  return StepFunction(h.space(), m, nb.finish(), root);
}

StepFunction combine(const Tree& tree, const StepFunction& a, const StepFunction& b,
                     const std::function<Value(const Value&, const Value&)>& op) {
  require_level(tree, std::max(a.level(), b.level()));
  NodeBuilder nb;
  std::unordered_map<std::tuple<ShapeId, NodeId, NodeId>, NodeId, IdTupleHash> memo;
  auto build = [&](auto&& self, ShapeId s, NodeId x, NodeId y) -> NodeId {
    const auto key = std::make_tuple(s, x, y);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Node& nx = a.store()[x];
    const Node& ny = b.store()[y];
    NodeId out;
    if (is_leaf(nx) && is_leaf(ny)) {
      Value v = op(nx.value, ny.value);
      a.space().require(v);
      out = nb.leaf(std::move(v));
    } else {
      const auto& sh = tree.shape(s);
      std::vector<NodeId> kids;
      for (std::size_t c = 0; c < sh.children.size(); ++c) {
        kids.push_back(self(self, sh.children[c], descend(tree, s, a.store(), x, c),
                            descend(tree, s, b.store(), y, c)));
      }
      out = nb.make(Value{}, std::move(kids));
    }
    memo.emplace(key, out);
    return out;
  };
  const NodeId root = build(build, tree.root_shape(), a.root(), b.root());
  return StepFunction(a.space(), std::max(a.level(), b.level()), nb.finish(), root);
}

StepFunction add(const Tree& tree, const StepFunction& a, const StepFunction& b) {
  require_same_space(a, b);
  return combine(tree, a, b, [](const Value& x, const Value& y) { return x + y; });
}

StepFunction subtract(const Tree& tree, const StepFunction& a, const StepFunction& b) {
  require_same_space(a, b);
  return combine(tree, a, b, [](const Value& x, const Value& y) { return x - y; });
}

StepFunction map_values(const StepFunction& h, const ValueSpace& target,
                        const std::function<Value(const Value&)>& op) {
  const auto& store = h.store();
  NodeBuilder nb;
  std::unordered_map<NodeId, NodeId> memo;
  auto build = [&](auto&& self, NodeId id) -> NodeId {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const Node& n = store[id];
    NodeId out;
    if (is_leaf(n)) {
      Value v = op(n.value);
      target.require(v);
      out = nb.leaf(std::move(v));
    } else {
      std::vector<NodeId> kids;
      kids.reserve(n.children.size());
      for (NodeId c : n.children) kids.push_back(self(self, c));
      out = nb.make(Value{}, std::move(kids));
    }
    memo.emplace(id, out);
    return out;
  };
  const NodeId root = build(build, h.root());
  return StepFunction(target, h.level(), nb.finish(), root);
}

StepFunction scale(const Rational& lambda, const StepFunction& h) {
  return map_values(h, h.space(), [&](const Value& v) { return lambda * v; });
}

StepFunction component(const StepFunction& h, std::size_t i) {
  if (i >= h.space().dim()) throw DimensionError("component index out of range");
  return map_values(h, ValueSpace::scalar(), [i](const Value& v) { return Value::scalar(v[i]); });
}

bool same_function(const Tree& tree, const StepFunction& a, const StepFunction& b) {
  return l0_distance(tree, a, b) == 0;
}

bool contains(const Tree& tree, const Ball& ball, const StepFunction& g) {
  return l0_distance(tree, g, ball.center) < ball.radius;
}

}  // namespace harmtree
