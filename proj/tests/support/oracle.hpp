#pragma once

// Brute-force reference computations on a fully listed tree. Nothing here
// goes through the shape/DAG machinery of the library.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "harmtree/rational.hpp"
#include "harmtree/tree.hpp"
#include "harmtree/value_space.hpp"

namespace oracle {

using harmtree::Rational;
using harmtree::Value;
using Listing = std::vector<std::vector<Rational>>;

struct ExplicitTree {
  Listing weights;
  std::vector<std::vector<std::uint64_t>> children;
  std::vector<std::int64_t> parent;
  std::vector<std::uint32_t> level;
  std::vector<std::uint64_t> index_in_level;
  std::vector<std::vector<std::uint64_t>> by_level;
  std::vector<Rational> measure;

  explicit ExplicitTree(Listing listing) : weights(std::move(listing)) {
    const auto n = weights.size();
    children.resize(n);
    parent.assign(n, -1);
    level.assign(n, 0);
    index_in_level.assign(n, 0);
    measure.assign(n, Rational(0));
    measure[0] = 1;
    std::uint64_t next = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (level[i] >= by_level.size()) by_level.resize(level[i] + 1);
      index_in_level[i] = by_level[level[i]].size();
      by_level[level[i]].push_back(i);
      for (const auto& q : weights[i]) {
        children[i].push_back(next);
        parent[next] = static_cast<std::int64_t>(i);
        level[next] = level[i] + 1;
        measure[next] = measure[i] * q;
        ++next;
      }
    }
  }

  std::size_t size() const { return weights.size(); }
  std::uint32_t depth() const { return static_cast<std::uint32_t>(by_level.size() - 1); }
  harmtree::Vertex vertex(std::uint64_t id) const { return {level[id], index_in_level[id]}; }
  std::uint64_t id(harmtree::Vertex v) const { return by_level.at(v.level).at(v.index); }

  std::uint64_t ancestor(std::uint64_t id, std::uint32_t at) const {
    while (level[id] > at) id = static_cast<std::uint64_t>(parent[id]);
    return id;
  }

  /// Breadth-first search over the undirected tree graph.
  std::vector<std::uint64_t> bfs_path(std::uint64_t from, std::uint64_t to) const {
    std::vector<std::int64_t> prev(size(), -2);
    std::deque<std::uint64_t> queue{from};
    prev[from] = -1;
    while (!queue.empty()) {
      const auto x = queue.front();
      queue.pop_front();
      if (x == to) break;
      std::vector<std::uint64_t> nbrs = children[x];
      if (parent[x] >= 0) nbrs.push_back(static_cast<std::uint64_t>(parent[x]));
      for (auto y : nbrs) {
        if (prev[y] == -2) {
          prev[y] = static_cast<std::int64_t>(x);
          queue.push_back(y);
        }
      }
    }
    std::vector<std::uint64_t> path;
    for (std::int64_t x = static_cast<std::int64_t>(to); x != -1; x = prev[x]) path.push_back(static_cast<std::uint64_t>(x));
    return {path.rbegin(), path.rend()};
  }
};

inline Listing homogeneous_listing(std::uint32_t b, std::uint32_t depth, const std::vector<Rational>& w) {
  Listing out;
  std::uint64_t width = 1;
  for (std::uint32_t l = 0; l <= depth; ++l) {
    for (std::uint64_t i = 0; i < width; ++i) out.push_back(l < depth ? w : std::vector<Rational>{});
    width *= b;
  }
  return out;
}

inline Listing uniform_listing(std::uint32_t b, std::uint32_t depth) {
  return homogeneous_listing(b, depth, std::vector<Rational>(b, Rational(1, b)));
}

/// Random branching in [bmin, bmax] and random positive weights summing to 1.
inline Listing random_listing(std::mt19937_64& rng, std::uint32_t bmin, std::uint32_t bmax, std::uint32_t depth) {
  std::uniform_int_distribution<std::uint32_t> branch(bmin, bmax);
  std::uniform_int_distribution<int> num(1, 12);
  Listing out;
  std::uint64_t width = 1;
  for (std::uint32_t l = 0; l <= depth; ++l) {
    std::uint64_t next = 0;
    for (std::uint64_t i = 0; i < width; ++i) {
      std::vector<Rational> w;
      if (l < depth) {
        const auto b = branch(rng);
        std::vector<int> a(b);
        int total = 0;
        for (auto& x : a) total += x = num(rng);
        for (auto x : a) {
          Rational q(x, total);
          q.canonicalize();
          w.push_back(q);
        }
        next += b;
      }
      out.push_back(std::move(w));
    }
    width = next;
  }
  return out;
}

inline Rational bounded(const Rational& t) { return t / (1 + t); }

inline Rational scalar_dist(const Rational& a, const Rational& b) { return a > b ? Rational(a - b) : Rational(b - a); }

/// Product metric, weights 1 (or 2^-j when weighted).
inline Rational product_dist(const Value& a, const Value& b, bool weighted = false) {
  Rational out;
  Rational w = 1;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    out += w * bounded(scalar_dist(a[j], b[j]));
    if (weighted) w /= 2;
  }
  return out;
}

/// rho~ on explicit sector values at one common level (vector of values per sector id at that level).
inline Rational l0(const ExplicitTree& t, std::uint32_t level, const std::vector<Value>& a, const std::vector<Value>& b,
                   const std::function<Rational(const Value&, const Value&)>& dist) {
  Rational out;
  const auto& ids = t.by_level.at(level);
  for (std::size_t i = 0; i < ids.size(); ++i) out += t.measure[ids[i]] * bounded(dist(a[i], b[i]));
  return out;
}

/// Values at level `to` obtained by copying coarse values down.
inline std::vector<Value> refine(const ExplicitTree& t, std::uint32_t from, std::uint32_t to, const std::vector<Value>& v) {
  std::vector<Value> out;
  for (auto id : t.by_level.at(to)) out.push_back(v.at(t.index_in_level[t.ancestor(id, from)]));
  return out;
}

inline std::vector<Value> conditional(const ExplicitTree& t, std::uint32_t from, std::uint32_t to,
                                      const std::vector<Value>& v) {
  std::vector<Value> out(t.by_level.at(to).size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto x = t.by_level[to][i];
    Value acc;
    for (std::size_t j = 0; j < t.by_level[from].size(); ++j) {
      const auto y = t.by_level[from][j];
      if (t.ancestor(y, to) != x) continue;
      Value term = (t.measure[y] / t.measure[x]) * v[j];
      if (acc.empty()) acc = term;
      else acc += term;
    }
    out[i] = acc;
  }
  return out;
}

/// Per-vertex values (indexed by id) that violate the mean-value identity, up to `interior`.
inline std::vector<std::uint64_t> harmonic_failures(const ExplicitTree& t, const std::vector<Value>& f, int interior) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < t.size(); ++x) {
    if (static_cast<int>(t.level[x]) > interior || t.children[x].empty()) continue;
    Value mean;
    for (std::size_t c = 0; c < t.children[x].size(); ++c) {
      Value term = t.weights[x][c] * f[t.children[x][c]];
      if (mean.empty()) mean = term;
      else mean += term;
    }
    if (!(mean == f[x])) out.push_back(x);
  }
  return out;
}

}  // namespace oracle
