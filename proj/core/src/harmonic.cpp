#include "harmtree/harmonic.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

namespace harmtree {

namespace {

constexpr std::uint64_t kMaxListed = std::uint64_t{1} << 24;

std::string format_value(const Value& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + "]";
}

const std::vector<NodeId>& children_checked(const Tree& tree, ShapeId s, const Node& n) {
  if (n.children.size() != tree.shape(s).children.size()) {
    throw std::invalid_argument("harmonic function does not fit the tree's branching");
  }
  return n.children;
}

void require_compatible(const HarmonicFunction& f, const HarmonicFunction& g) {
  if (f.depth() != g.depth()) {
    throw std::invalid_argument("functions have different depths: " + std::to_string(f.depth()) + " vs " +
                                std::to_string(g.depth()));
  }
}

}  // namespace

HarmonicFunction::HarmonicFunction(ValueSpace space, std::uint32_t depth, int interior_depth,
                                   std::shared_ptr<const NodeStore> store, NodeId root)
    : space_(space), depth_(depth), interior_depth_(interior_depth), store_(std::move(store)), root_(root) {
  if (interior_depth_ < -1 || interior_depth_ >= static_cast<int>(depth_)) {
    throw std::invalid_argument("interior depth must lie in [-1, depth - 1]");
  }
}

HarmonicFunction HarmonicFunction::seed(const ValueSpace& space, const Value& root_value) {
  space.require(root_value);
  NodeBuilder nb;
  const NodeId root = nb.leaf(root_value);
  return HarmonicFunction(space, 0, -1, nb.finish(), root);
}

HarmonicFunction HarmonicFunction::constant(const Tree& tree, const ValueSpace& space, const Value& value,
                                            std::uint32_t depth) {
  space.require(value);
  if (depth > tree.depth()) throw std::out_of_range("depth exceeds tree depth");
  NodeBuilder nb;
  std::unordered_map<std::tuple<ShapeId, std::uint32_t>, NodeId, IdTupleHash> memo;
  auto build = [&](auto&& self, ShapeId s, std::uint32_t at) -> NodeId {
    if (at == depth) return nb.leaf(value);
    const auto key = std::make_tuple(s, at);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<NodeId> kids;
    for (ShapeId c : tree.shape(s).children) kids.push_back(self(self, c, at + 1));
    const NodeId out = nb.make(value, std::move(kids));
    memo.emplace(key, out);
    return out;
  };
  const NodeId root = build(build, tree.root_shape(), 0);
  return HarmonicFunction(space, depth, static_cast<int>(depth) - 1, nb.finish(), root);
}

HarmonicFunction HarmonicFunction::from_values(const Tree& tree, const ValueSpace& space, std::uint32_t depth,
                                               int interior_depth,
                                               const std::function<Value(Vertex)>& value_of) {
  if (depth > tree.depth()) throw std::out_of_range("depth exceeds tree depth");
  std::uint64_t count = 0;
  for (std::uint32_t n = 0; n <= depth; ++n) count += tree.level_size(n);
  if (count > kMaxListed) throw std::length_error("too many vertices to list explicitly");
  NodeBuilder nb;
  std::vector<std::uint64_t> next(depth + 1, 0);
  auto build = [&](auto&& self, ShapeId s, std::uint32_t at) -> NodeId {
    Value v = value_of(Vertex{at, next[at]++});
    space.require(v);
    if (at == depth) return nb.leaf(std::move(v));
    const auto& sh = tree.shape(s);
    if (sh.children.empty()) throw std::out_of_range("tree ends above the function depth");
    std::vector<NodeId> kids;
    kids.reserve(sh.children.size());
    for (ShapeId c : sh.children) kids.push_back(self(self, c, at + 1));
    return nb.make(std::move(v), std::move(kids));
  };
  const NodeId root = build(build, tree.root_shape(), 0);
  return HarmonicFunction(space, depth, interior_depth, nb.finish(), root);
}

Value HarmonicFunction::value_at(const Tree& tree, Vertex x) const {
  if (x.level > depth_) throw std::out_of_range("vertex below the function's depth");
  NodeId id = root_;
  ShapeId s = tree.root_shape();
  for (auto c : tree.path(x)) {
    id = children_checked(tree, s, (*store_)[id])[c];
    s = tree.shape(s).children[c];
  }
  return (*store_)[id].value;
}

std::vector<std::pair<Vertex, Value>> HarmonicFunction::values(const Tree& tree) const {
  std::uint64_t count = 0;
  for (std::uint32_t n = 0; n <= depth_; ++n) count += tree.level_size(n);
  if (count > kMaxListed) throw std::length_error("too many vertices to list explicitly");
  std::vector<std::vector<std::pair<Vertex, Value>>> per_level(depth_ + 1);
  auto walk = [&](auto&& self, ShapeId s, NodeId id, std::uint32_t at) -> void {
    const Node& n = (*store_)[id];
    auto& bucket = per_level[at];
    bucket.emplace_back(Vertex{at, bucket.size()}, n.value);
    if (at == depth_) return;
    const auto& kids = children_checked(tree, s, n);
    for (std::size_t c = 0; c < kids.size(); ++c) self(self, tree.shape(s).children[c], kids[c], at + 1);
  };
  walk(walk, tree.root_shape(), root_, 0);
  std::vector<std::pair<Vertex, Value>> out;
  out.reserve(count);
  for (auto& bucket : per_level) {
    for (auto& entry : bucket) out.push_back(std::move(entry));
  }
  return out;
}

HarmonicFunction HarmonicFunction::with_interior_depth(int interior_depth) const {
  return HarmonicFunction(space_, depth_, interior_depth, store_, root_);
}

std::vector<Diagnostic> check_harmonic(const Tree& tree, const HarmonicFunction& f) {
  const int interior = f.interior_depth();
  std::vector<Diagnostic> out;
  if (interior < 0) return out;
  const auto& store = f.store();

  std::unordered_map<std::tuple<ShapeId, NodeId>, bool, IdTupleHash> local_memo;
  auto child_mean = [&](ShapeId s, NodeId id) {
    const auto& sh = tree.shape(s);
    const auto& kids = children_checked(tree, s, store[id]);
    Value mean = zero(f.space());
    for (std::size_t c = 0; c < kids.size(); ++c) mean += sh.weights[c] * store[kids[c]].value;
    return mean;
  };
  auto local_ok = [&](ShapeId s, NodeId id) {
    const auto key = std::make_tuple(s, id);
    if (auto it = local_memo.find(key); it != local_memo.end()) return it->second;
    const bool ok = store[id].value == child_mean(s, id);
    local_memo.emplace(key, ok);
    return ok;
  };
  std::unordered_map<std::tuple<ShapeId, NodeId, std::uint32_t>, bool, IdTupleHash> bad_memo;
  auto bad_below = [&](auto&& self, ShapeId s, NodeId id, std::uint32_t at) -> bool {
    if (static_cast<int>(at) > interior) return false;
    const auto key = std::make_tuple(s, id, at);
    if (auto it = bad_memo.find(key); it != bad_memo.end()) return it->second;
    bool bad = !local_ok(s, id);
    const auto& kids = store[id].children;
    const auto& sh = tree.shape(s);
    for (std::size_t c = 0; c < kids.size() && !bad; ++c) bad = self(self, sh.children[c], kids[c], at + 1);
    bad_memo.emplace(key, bad);
    return bad;
  };

  std::vector<std::uint32_t> path;
  auto report = [&](auto&& self, ShapeId s, NodeId id) -> void {
    const auto at = static_cast<std::uint32_t>(path.size());
    if (!bad_below(bad_below, s, id, at)) return;
    if (!local_ok(s, id)) {
      const Vertex v = tree.at_path(path);
      const auto ord = tree.ordinal(v);
      out.push_back({"harmonic", ord,
                     "mean-value identity fails at vertex " + std::to_string(ord) + " (level " +
                         std::to_string(at) + "): f = " + format_value(store[id].value) +
                         ", weighted child mean = " + format_value(child_mean(s, id))});
    }
    const auto& kids = store[id].children;
    for (std::uint32_t c = 0; c < kids.size(); ++c) {
      path.push_back(c);
      self(self, tree.shape(s).children[c], kids[c]);
      path.pop_back();
    }
  };
  report(report, tree.root_shape(), f.root());
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) { return a.vertex < b.vertex; });
  return out;
}

StepFunction boundary_trace(const Tree& tree, const HarmonicFunction& f, std::uint32_t n) {
  if (n > f.depth()) {
    throw std::out_of_range("trace level " + std::to_string(n) + " below the function's depth " +
                            std::to_string(f.depth()));
  }
  const auto& store = f.store();
  NodeBuilder nb;
  std::unordered_map<NodeId, NodeId> memo;
  auto build = [&](auto&& self, ShapeId s, NodeId id, std::uint32_t at) -> NodeId {
    if (at == n) return nb.leaf(store[id].value);
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const auto& kids = children_checked(tree, s, store[id]);
    std::vector<NodeId> out_kids;
    out_kids.reserve(kids.size());
    for (std::size_t c = 0; c < kids.size(); ++c) {
      out_kids.push_back(self(self, tree.shape(s).children[c], kids[c], at + 1));
    }
    const NodeId out = nb.make(Value{}, std::move(out_kids));
    memo.emplace(id, out);
    return out;
  };
  const NodeId root = build(build, tree.root_shape(), f.root(), 0);
  return StepFunction(f.space(), n, nb.finish(), root);
}

bool martingale_check(const Tree& tree, const HarmonicFunction& f, std::uint32_t n, std::uint32_t m) {
  if (n >= m || m > f.depth()) throw std::out_of_range("martingale check needs n < m <= depth");
  if (static_cast<int>(m) - 1 > f.interior_depth()) {
    throw std::out_of_range("harmonicity is only asserted up to level " + std::to_string(f.interior_depth()));
  }
  const auto coarse = conditional_expectation(tree, boundary_trace(tree, f, m), n);
  return same_function(tree, coarse, boundary_trace(tree, f, n));
}

HarmonicFunction constant_tail_extend(const Tree& tree, const HarmonicFunction& f, std::uint32_t depth) {
  if (depth < f.depth()) throw std::out_of_range("extension depth below the function's depth");
  if (depth > tree.depth()) throw std::out_of_range("extension depth exceeds tree depth");
  if (depth == f.depth()) return f;
  const auto& store = f.store();
  const std::uint32_t s0 = f.depth();
  NodeBuilder nb;
  std::unordered_map<std::tuple<ShapeId, NodeId, std::uint32_t>, NodeId, IdTupleHash> memo;
  auto tail = [&](auto&& self, ShapeId s, NodeId leaf, std::uint32_t at) -> NodeId {
    if (at == depth) return nb.leaf(store[leaf].value);
    const auto key = std::make_tuple(s, leaf, at);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const auto& sh = tree.shape(s);
    if (sh.children.empty()) throw std::out_of_range("tree ends above the extension depth");
    std::vector<NodeId> kids;
    for (ShapeId c : sh.children) kids.push_back(self(self, c, leaf, at + 1));
    const NodeId out = nb.make(store[leaf].value, std::move(kids));
    memo.emplace(key, out);
    return out;
  };
  std::unordered_map<std::tuple<ShapeId, NodeId>, NodeId, IdTupleHash> copy_memo;
  auto copy = [&](auto&& self, ShapeId s, NodeId id, std::uint32_t at) -> NodeId {
    if (at == s0) return tail(tail, s, id, at);
    const auto key = std::make_tuple(s, id);
    if (auto it = copy_memo.find(key); it != copy_memo.end()) return it->second;
    const auto& kids = children_checked(tree, s, store[id]);
    std::vector<NodeId> out_kids;
    for (std::size_t c = 0; c < kids.size(); ++c) {
      out_kids.push_back(self(self, tree.shape(s).children[c], kids[c], at + 1));
    }
    const NodeId out = nb.make(store[id].value, std::move(out_kids));
    copy_memo.emplace(key, out);
    return out;
  };
  const NodeId root = copy(copy, tree.root_shape(), f.root(), 0);
  const int interior = f.interior_depth() >= static_cast<int>(s0) - 1 ? static_cast<int>(depth) - 1
                                                                       : f.interior_depth();
  return HarmonicFunction(f.space(), depth, interior, nb.finish(), root);
}

HarmonicFunction harmonic_from_trace(const Tree& tree, const StepFunction& h) {
  const std::uint32_t depth = h.level();
  if (depth > tree.depth()) throw std::out_of_range("step function level exceeds tree depth");
  const auto& hs = h.store();
  NodeBuilder nb;
  std::unordered_map<std::tuple<ShapeId, NodeId, std::uint32_t>, NodeId, IdTupleHash> memo;
  auto build = [&](auto&& self, ShapeId s, NodeId id, std::uint32_t at) -> NodeId {
    const Node& hn = hs[id];
    if (at == depth) return nb.leaf(hn.value);
    const auto key = std::make_tuple(s, id, at);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const auto& sh = tree.shape(s);
    if (sh.children.empty()) throw std::out_of_range("tree ends above the step function's level");
    if (!hn.children.empty() && hn.children.size() != sh.children.size()) {
      throw std::invalid_argument("step function does not fit the tree's branching");
    }
    std::vector<NodeId> kids;
    Value mean = zero(h.space());
    for (std::size_t c = 0; c < sh.children.size(); ++c) {
      const NodeId below = hn.children.empty() ? id : hn.children[c];
      kids.push_back(self(self, sh.children[c], below, at + 1));
      mean += sh.weights[c] * nb[kids.back()].value;
    }
    const NodeId out = nb.make(std::move(mean), std::move(kids));
    memo.emplace(key, out);
    return out;
  };
  const NodeId root = build(build, tree.root_shape(), h.root(), 0);
  return HarmonicFunction(h.space(), depth, static_cast<int>(depth) - 1, nb.finish(), root);
}

HarmonicFunction truncate(const HarmonicFunction& f, std::uint32_t depth) {
  if (depth > f.depth()) throw std::out_of_range("truncation depth exceeds the function's depth");
  const auto& store = f.store();
  NodeBuilder nb;
  std::unordered_map<NodeId, NodeId> memo;
  auto build = [&](auto&& self, NodeId id, std::uint32_t at) -> NodeId {
    if (at == depth) return nb.leaf(store[id].value);
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    std::vector<NodeId> kids;
    for (NodeId c : store[id].children) kids.push_back(self(self, c, at + 1));
    const NodeId out = nb.make(store[id].value, std::move(kids));
    memo.emplace(id, out);
    return out;
  };
  const NodeId root = build(build, f.root(), 0);
  return HarmonicFunction(f.space(), depth, std::min(f.interior_depth(), static_cast<int>(depth) - 1), nb.finish(),
                          root);
}

std::uint32_t constant_tail_level(const HarmonicFunction& f) {
  const auto& store = f.store();
  // Deepest level (relative to the node) where a child differs from its parent; 0 if none.
  std::unordered_map<NodeId, std::uint32_t> memo;
  auto deepest = [&](auto&& self, NodeId id) -> std::uint32_t {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    std::uint32_t out = 0;
    for (NodeId c : store[id].children) {
      if (!(store[c].value == store[id].value)) out = std::max(out, 1u);
      const auto below = self(self, c);
      if (below > 0) out = std::max(out, below + 1);
    }
    memo.emplace(id, out);
    return out;
  };
  return deepest(deepest, f.root());
}

HqDistance hq_distance(const Tree& tree, const HarmonicFunction& f, const HarmonicFunction& g,
                       std::uint64_t terms) {
  require_compatible(f, g);
  if (!(f.space() == g.space())) throw DimensionError("functions live in different spaces");
  std::uint64_t stored = 0;
  for (std::uint32_t n = 0; n <= f.depth(); ++n) stored += tree.level_size(n);
  terms = std::min(terms, stored);
  if (terms == 0) throw std::invalid_argument("hq_distance needs at least one term");

  HqDistance out;
  out.terms = terms;
  std::uint64_t j = 0;
  for (std::uint32_t level = 0; level <= f.depth() && j < terms; ++level) {
    auto walk = [&](auto&& self, ShapeId s, NodeId x, NodeId y, std::uint32_t at) -> void {
      if (j >= terms) return;
      const Node& nx = f.store()[x];
      const Node& ny = g.store()[y];
      if (at == level) {
        out.value += pow2(-static_cast<long>(j)) * bounded(dist(f.space(), nx.value, ny.value));
        ++j;
        return;
      }
      const auto& kx = children_checked(tree, s, nx);
      const auto& ky = children_checked(tree, s, ny);
      for (std::size_t c = 0; c < kx.size() && j < terms; ++c) {
        self(self, tree.shape(s).children[c], kx[c], ky[c], at + 1);
      }
    };
    walk(walk, tree.root_shape(), f.root(), g.root(), 0);
  }
  out.truncation_bound = pow2(-static_cast<long>(terms - 1));
  return out;
}

HarmonicFunction map_values(const HarmonicFunction& f, const ValueSpace& target,
                            const std::function<Value(const Value&)>& op) {
  const auto& store = f.store();
  NodeBuilder nb;
  std::unordered_map<NodeId, NodeId> memo;
  auto build = [&](auto&& self, NodeId id) -> NodeId {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    std::vector<NodeId> kids;
    for (NodeId c : store[id].children) kids.push_back(self(self, c));
    Value v = op(store[id].value);
    target.require(v);
    const NodeId out = nb.make(std::move(v), std::move(kids));
    memo.emplace(id, out);
    return out;
  };
  const NodeId root = build(build, f.root());
  return HarmonicFunction(target, f.depth(), f.interior_depth(), nb.finish(), root);
}

HarmonicFunction zip_values(const HarmonicFunction& f, const HarmonicFunction& g, const ValueSpace& target,
                            const std::function<Value(const Value&, const Value&)>& op) {
  require_compatible(f, g);
  NodeBuilder nb;
  std::unordered_map<std::tuple<NodeId, NodeId>, NodeId, IdTupleHash> memo;
  auto build = [&](auto&& self, NodeId x, NodeId y) -> NodeId {
    const auto key = std::make_tuple(x, y);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Node& nx = f.store()[x];
    const Node& ny = g.store()[y];
    if (nx.children.size() != ny.children.size()) throw std::invalid_argument("functions have different shapes");
    std::vector<NodeId> kids;
    for (std::size_t c = 0; c < nx.children.size(); ++c) kids.push_back(self(self, nx.children[c], ny.children[c]));
    Value v = op(nx.value, ny.value);
    target.require(v);
    const NodeId out = nb.make(std::move(v), std::move(kids));
    memo.emplace(key, out);
    return out;
  };
  const NodeId root = build(build, f.root(), g.root());
  return HarmonicFunction(target, f.depth(), std::min(f.interior_depth(), g.interior_depth()), nb.finish(), root);
}

HarmonicFunction add(const HarmonicFunction& f, const HarmonicFunction& g) {
  if (!(f.space() == g.space())) throw DimensionError("functions live in different spaces");
  return zip_values(f, g, f.space(), [](const Value& a, const Value& b) { return a + b; });
}

HarmonicFunction subtract(const HarmonicFunction& f, const HarmonicFunction& g) {
  if (!(f.space() == g.space())) throw DimensionError("functions live in different spaces");
  return zip_values(f, g, f.space(), [](const Value& a, const Value& b) { return a - b; });
}

HarmonicFunction scale(const Rational& lambda, const HarmonicFunction& f) {
  return map_values(f, f.space(), [&](const Value& v) { return lambda * v; });
}

HarmonicFunction linear_combination(std::span<const Rational> coefficients,
                                    std::span<const HarmonicFunction> functions) {
  if (coefficients.size() != functions.size() || functions.empty()) {
    throw std::invalid_argument("linear combination needs one coefficient per function");
  }
  HarmonicFunction out = scale(coefficients[0], functions[0]);
  for (std::size_t i = 1; i < functions.size(); ++i) out = add(out, scale(coefficients[i], functions[i]));
  return out;
}

HarmonicFunction component(const HarmonicFunction& f, std::size_t i) {
  if (i >= f.space().dim()) throw DimensionError("component index out of range");
  return map_values(f, ValueSpace::scalar(), [i](const Value& v) { return Value::scalar(v[i]); });
}

HarmonicFunction assemble(std::span<const HarmonicFunction> components) {
  if (components.empty()) throw std::invalid_argument("nothing to assemble");
  HarmonicFunction out = components[0];
  std::size_t dim = out.space().dim();
  for (std::size_t i = 1; i < components.size(); ++i) {
    dim += components[i].space().dim();
    out = zip_values(out, components[i], ValueSpace::product(dim), [](const Value& a, const Value& b) {
      std::vector<Rational> coords = a.coords();
      coords.insert(coords.end(), b.coords().begin(), b.coords().end());
      return Value(std::move(coords));
    });
  }
  if (components.size() == 1 && out.space().kind() == ValueSpace::Kind::scalar) {
    out = map_values(out, ValueSpace::product(1), [](const Value& v) { return v; });
  }
  return out;
}

}  // namespace harmtree
