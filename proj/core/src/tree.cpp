#include "harmtree/tree.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <utility>

namespace harmtree {

namespace {

constexpr std::uint64_t kMaxWidth = std::uint64_t{1} << 62;

std::uint64_t width_at(const Tree::Shape& s, std::size_t j) {
  return j < s.width.size() ? s.width[j] : 0;
}

}  // namespace

struct Tree::Data {
  std::vector<Shape> shapes;
  ShapeId root = 0;
  std::uint32_t depth = 0;
};

namespace {

class ShapeInterner {
 public:
  ShapeId intern(std::vector<Rational> weights, std::vector<ShapeId> children,
                 std::vector<Tree::Shape>& shapes) {
    auto key = std::make_pair(weights, children);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    Tree::Shape s;
    s.weights = std::move(weights);
    s.children = std::move(children);
    s.width.push_back(1);
    std::uint32_t min_leaf = std::numeric_limits<std::uint32_t>::max();
    for (ShapeId c : s.children) {
      const auto& child = shapes[c];
      if (s.width.size() < child.width.size() + 1) s.width.resize(child.width.size() + 1, 0);
      for (std::size_t j = 0; j < child.width.size(); ++j) {
        s.width[j + 1] += child.width[j];
        if (s.width[j + 1] > kMaxWidth) throw TreeError("tree level too wide to address");
      }
      min_leaf = std::min(min_leaf, child.min_leaf_depth + 1);
    }
    s.min_leaf_depth = s.children.empty() ? 0 : min_leaf;
    const auto id = static_cast<ShapeId>(shapes.size());
    shapes.push_back(std::move(s));
    index_.emplace(std::move(key), id);
    return id;
  }

 private:
  std::map<std::pair<std::vector<Rational>, std::vector<ShapeId>>, ShapeId> index_;
};

}  // namespace

Tree::Tree(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

Tree Tree::from_breadth_first(const std::vector<std::vector<Rational>>& child_weights) {
  const std::size_t n = child_weights.size();
  if (n == 0) throw TreeError("tree listing is empty");
  std::vector<std::uint32_t> level(n, 0);
  std::vector<std::size_t> first_child(n, 0);
  std::size_t next = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= next) throw TreeError("vertex " + std::to_string(i) + " is not reachable from the root");
    first_child[i] = next;
    for (std::size_t c = 0; c < child_weights[i].size(); ++c) {
      if (next >= n) {
        throw TreeError("vertex " + std::to_string(i) + " declares more children than listed vertices");
      }
      level[next++] = level[i] + 1;
    }
  }

  auto data = std::make_shared<Data>();
  ShapeInterner interner;
  std::vector<ShapeId> shape_of(n, 0);
  for (std::size_t k = n; k-- > 0;) {
    std::vector<ShapeId> kids;
    kids.reserve(child_weights[k].size());
    for (std::size_t c = 0; c < child_weights[k].size(); ++c) kids.push_back(shape_of[first_child[k] + c]);
    shape_of[k] = interner.intern(child_weights[k], std::move(kids), data->shapes);
  }
  data->root = shape_of[0];
  data->depth = *std::max_element(level.begin(), level.end());
  return Tree(std::move(data));
}

Tree Tree::homogeneous(std::vector<Rational> weights, std::uint32_t depth) {
  auto data = std::make_shared<Data>();
  ShapeInterner interner;
  ShapeId s = interner.intern({}, {}, data->shapes);
  for (std::uint32_t h = 0; h < depth; ++h) {
    s = interner.intern(weights, std::vector<ShapeId>(weights.size(), s), data->shapes);
  }
  data->root = s;
  data->depth = depth;
  return Tree(std::move(data));
}

std::uint32_t Tree::depth() const { return data_->depth; }
ShapeId Tree::root_shape() const { return data_->root; }
const Tree::Shape& Tree::shape(ShapeId id) const { return data_->shapes.at(id); }
std::size_t Tree::shape_count() const { return data_->shapes.size(); }

std::uint64_t Tree::level_size(std::uint32_t level) const {
  return width_at(shape(root_shape()), level);
}

std::uint64_t Tree::vertex_count() const {
  std::uint64_t total = 0;
  for (std::uint32_t n = 0; n <= depth(); ++n) {
    const auto w = level_size(n);
    if (total > std::numeric_limits<std::uint64_t>::max() - w) return std::numeric_limits<std::uint64_t>::max();
    total += w;
  }
  return total;
}

bool Tree::contains(Vertex v) const { return v.level <= depth() && v.index < level_size(v.level); }

std::uint64_t Tree::ordinal(Vertex v) const {
  if (!contains(v)) throw TreeError("vertex not stored in tree");
  std::uint64_t ord = v.index;
  for (std::uint32_t n = 0; n < v.level; ++n) ord += level_size(n);
  return ord;
}

Vertex Tree::from_ordinal(std::uint64_t ordinal) const {
  for (std::uint32_t n = 0; n <= depth(); ++n) {
    const auto w = level_size(n);
    if (ordinal < w) return Vertex{n, ordinal};
    ordinal -= w;
  }
  throw TreeError("vertex ordinal " + std::to_string(ordinal) + " out of range");
}

std::vector<std::uint32_t> Tree::path(Vertex v) const {
  if (!contains(v)) throw TreeError("vertex not stored in tree");
  std::vector<std::uint32_t> out;
  out.reserve(v.level);
  ShapeId s = root_shape();
  std::uint64_t i = v.index;
  for (std::uint32_t remaining = v.level; remaining > 0; --remaining) {
    const auto& sh = shape(s);
    std::uint32_t c = 0;
    for (; c < sh.children.size(); ++c) {
      const auto w = width_at(shape(sh.children[c]), remaining - 1);
      if (i < w) break;
      i -= w;
    }
    out.push_back(c);
    s = sh.children[c];
  }
  return out;
}

Vertex Tree::at_path(std::span<const std::uint32_t> p) const {
  const auto level = static_cast<std::uint32_t>(p.size());
  ShapeId s = root_shape();
  std::uint64_t index = 0;
  for (std::uint32_t k = 0; k < level; ++k) {
    const auto& sh = shape(s);
    if (p[k] >= sh.children.size()) throw TreeError("path leaves the stored tree");
    for (std::uint32_t c = 0; c < p[k]; ++c) index += width_at(shape(sh.children[c]), level - k - 1);
    s = sh.children[p[k]];
  }
  return Vertex{level, index};
}

ShapeId Tree::shape_of(Vertex v) const {
  ShapeId s = root_shape();
  for (auto c : path(v)) s = shape(s).children[c];
  return s;
}

std::optional<Vertex> Tree::parent(Vertex v) const {
  if (!contains(v)) throw TreeError("vertex not stored in tree");
  if (v.level == 0) return std::nullopt;
  auto p = path(v);
  p.pop_back();
  return at_path(p);
}

std::vector<Vertex> Tree::children(Vertex v) const {
  auto p = path(v);
  ShapeId s = root_shape();
  for (auto c : p) s = shape(s).children[c];
  std::vector<Vertex> out;
  const auto k = shape(s).children.size();
  if (k == 0) return out;
  p.push_back(0);
  const Vertex first = at_path(p);
  out.reserve(k);
  for (std::size_t c = 0; c < k; ++c) out.push_back(Vertex{first.level, first.index + c});
  return out;
}

std::span<const Rational> Tree::child_weights(Vertex v) const { return shape(shape_of(v)).weights; }

Rational Tree::weight(Vertex x, Vertex y) const {
  if (y.level == x.level + 1 && parent(y) == x) {
    const auto p = path(y);
    return child_weights(x)[p.back()];
  }
  if (x.level == y.level + 1 && parent(x) == y) return Rational(0);
  throw TreeError("weight requested between non-adjacent vertices");
}

Vertex Tree::ancestor(Vertex v, std::uint32_t level) const {
  if (level > v.level) throw TreeError("ancestor level below the vertex");
  auto p = path(v);
  p.resize(level);
  return at_path(p);
}

std::vector<std::vector<Rational>> Tree::to_breadth_first() const {
  if (vertex_count() > (std::uint64_t{1} << 26)) throw TreeError("tree too large to list explicitly");
  std::vector<std::vector<Rational>> out;
  for (std::uint32_t n = 0; n <= depth(); ++n) {
    for_each_at_level(n, [&](Vertex, ShapeId s) { out.push_back(shape(s).weights); });
  }
  return out;
}

bool operator==(const Tree& a, const Tree& b) {
  if (a.depth() != b.depth()) return false;
  std::set<std::pair<ShapeId, ShapeId>> seen;
  auto same = [&](auto&& self, ShapeId x, ShapeId y) -> bool {
    if (!seen.insert({x, y}).second) return true;
    const auto& sx = a.shape(x);
    const auto& sy = b.shape(y);
    if (sx.weights != sy.weights) return false;
    for (std::size_t c = 0; c < sx.children.size(); ++c) {
      if (!self(self, sx.children[c], sy.children[c])) return false;
    }
    return true;
  };
  return same(same, a.root_shape(), b.root_shape());
}

Tree build_homogeneous(std::uint32_t branching, std::uint32_t depth) {
  if (branching < 2) throw TreeError("branching < 2");
  return build_homogeneous(branching, depth, std::vector<Rational>(branching, Rational(1, branching)));
}

Tree build_homogeneous(std::uint32_t branching, std::uint32_t depth, const std::vector<Rational>& weights) {
  if (branching < 2) throw TreeError("branching < 2");
  if (depth < 1) throw TreeError("depth must be at least 1");
  if (weights.size() != branching) {
    throw TreeError("expected " + std::to_string(branching) + " weights, got " + std::to_string(weights.size()));
  }
  Rational sum = 0;
  for (const auto& q : weights) {
    if (q <= 0) throw TreeError("non-positive weight " + to_string(q));
    sum += q;
  }
  if (sum != 1) throw TreeError("weights sum " + to_string(sum) + " ≠ 1");
  return Tree::homogeneous(weights, depth);
}

Tree random_tree(std::uint32_t min_branching, std::uint32_t max_branching, std::uint32_t depth,
                 std::uint64_t seed) {
  if (min_branching < 2) throw TreeError("branching < 2");
  if (max_branching < min_branching) throw TreeError("empty branching range");
  if (depth < 1) throw TreeError("depth must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> branch(min_branching, max_branching);
  std::uniform_int_distribution<long> numerator(1, 9);
  std::vector<std::vector<Rational>> listing;
  std::uint64_t level_width = 1;
  for (std::uint32_t level = 0; level <= depth; ++level) {
    std::uint64_t next_width = 0;
    for (std::uint64_t i = 0; i < level_width; ++i) {
      std::vector<Rational> weights;
      if (level < depth) {
        const auto b = branch(rng);
        std::vector<long> a(b);
        long total = 0;
        for (auto& x : a) total += x = numerator(rng);
        for (auto x : a) weights.emplace_back(x, total);
        for (auto& q : weights) q.canonicalize();
        next_width += b;
      }
      listing.push_back(std::move(weights));
      if (listing.size() > (std::size_t{1} << 22)) throw TreeError("random tree too large");
    }
    level_width = next_width;
  }
  return Tree::from_breadth_first(listing);
}

std::vector<Vertex> geodesic(const Tree& tree, Vertex x, Vertex y) {
  const auto px = tree.path(x);
  const auto py = tree.path(y);
  std::size_t common = 0;
  while (common < px.size() && common < py.size() && px[common] == py[common]) ++common;
  std::vector<Vertex> out;
  out.reserve(px.size() + py.size() - 2 * common + 1);
  for (std::size_t len = px.size(); len > common; --len) {
    out.push_back(tree.at_path(std::span(px).first(len)));
  }
  for (std::size_t len = common; len <= py.size(); ++len) {
    out.push_back(tree.at_path(std::span(py).first(len)));
  }
  return out;
}

std::vector<Diagnostic> validate(const Tree& tree) {
  const auto n_shapes = tree.shape_count();
  std::vector<char> local_bad(n_shapes, 0);
  for (ShapeId s = 0; s < n_shapes; ++s) {
    const auto& sh = tree.shape(s);
    if (sh.children.size() == 1) local_bad[s] = 1;
    Rational sum = 0;
    for (const auto& q : sh.weights) {
      if (q <= 0) local_bad[s] = 1;
      sum += q;
    }
    if (!sh.children.empty() && sum != 1) local_bad[s] = 1;
  }
  // Children always precede parents in shape numbering.
  std::vector<char> subtree_bad(local_bad);
  for (ShapeId s = 0; s < n_shapes; ++s) {
    for (ShapeId c : tree.shape(s).children) subtree_bad[s] = subtree_bad[s] || subtree_bad[c];
  }

  std::vector<Diagnostic> out;
  auto report = [&](const std::vector<std::uint32_t>& p, ShapeId s) {
    const Vertex v = tree.at_path(p);
    const auto id = tree.ordinal(v);
    const auto& sh = tree.shape(s);
    const auto vid = std::to_string(id);
    if (sh.children.empty() && v.level < tree.depth()) {
      out.push_back({"branching", id, "branching < 2: vertex " + vid + " at level " + std::to_string(v.level) +
                                          " has no children"});
    }
    if (sh.children.size() == 1) {
      out.push_back({"branching", id, "branching < 2: vertex " + vid + " has a single child"});
    }
    Rational sum = 0;
    for (std::size_t c = 0; c < sh.weights.size(); ++c) {
      sum += sh.weights[c];
      if (sh.weights[c] <= 0) {
        out.push_back({"nonpositive_weight", id,
                       "non-positive weight " + to_string(sh.weights[c]) + " on child " + std::to_string(c) +
                           " of vertex " + vid});
      }
    }
    if (!sh.children.empty() && sum != 1) {
      out.push_back({"weight_sum", id, "weights sum " + to_string(sum) + " ≠ 1 at vertex " + vid});
    }
  };

  std::vector<std::uint32_t> p;
  auto visit = [&](auto&& self, ShapeId s) -> void {
    const auto& sh = tree.shape(s);
    const auto level = static_cast<std::uint32_t>(p.size());
    if (!subtree_bad[s] && level + sh.min_leaf_depth >= tree.depth()) return;
    report(p, s);
    for (std::uint32_t c = 0; c < sh.children.size(); ++c) {
      p.push_back(c);
      self(self, sh.children[c]);
      p.pop_back();
    }
  };
  visit(visit, tree.root_shape());
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) { return a.vertex < b.vertex; });
  return out;
}

std::vector<Vertex> enumerate_vertices(const Tree& tree, std::uint64_t limit) {
  std::vector<Vertex> out;
  for (std::uint32_t n = 0; n <= tree.depth() && out.size() < limit; ++n) {
    const auto w = tree.level_size(n);
    for (std::uint64_t i = 0; i < w && out.size() < limit; ++i) out.push_back(Vertex{n, i});
  }
  return out;
}

}  // namespace harmtree
