#pragma once

#include <cstdint>
#include <memory>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "harmtree/value_space.hpp"

namespace harmtree {

using NodeId = std::uint32_t;

/// A vertex-valued subtree: the value at its top vertex and one child node per
/// tree child. Nodes without children sit at the deepest stored level.
struct Node {
  Value value;
  std::vector<NodeId> children;
};

/// Immutable, hash-consed node arena. Equal subtrees have equal ids, so
/// functions with repetitive structure stay small however deep they go.
class NodeStore {
 public:
  const Node& operator[](NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  friend class NodeBuilder;
  std::vector<Node> nodes_;
};

class NodeBuilder {
 public:
  NodeBuilder();
  NodeBuilder(const NodeBuilder&) = delete;
  NodeBuilder& operator=(const NodeBuilder&) = delete;

  NodeId make(Value value, std::vector<NodeId> children);
  NodeId leaf(Value value) { return make(std::move(value), {}); }
  const Node& operator[](NodeId id) const { return (*store_)[id]; }

  /// Copies the subtree rooted at `id` of another store into this one.
  NodeId import(const NodeStore& src, NodeId id, std::unordered_map<NodeId, NodeId>& memo);

  std::shared_ptr<const NodeStore> finish();

 private:
  struct Hash {
    const std::vector<std::size_t>* hashes;
    std::size_t operator()(NodeId id) const { return (*hashes)[id]; }
  };
  struct Equal {
    const std::vector<Node>* nodes;
    bool operator()(NodeId a, NodeId b) const {
      return (*nodes)[a].children == (*nodes)[b].children && (*nodes)[a].value == (*nodes)[b].value;
    }
  };

  std::shared_ptr<NodeStore> store_;
  std::vector<std::size_t> hashes_;
  std::unordered_set<NodeId, Hash, Equal> index_;
};

/// Hash for memo keys built from small integer tuples.
struct IdTupleHash {
  template <class... Ts>
  std::size_t operator()(const std::tuple<Ts...>& t) const noexcept {
    std::size_t seed = 0;
    std::apply([&seed](const auto&... v) { (hash_combine(seed, static_cast<std::size_t>(v)), ...); }, t);
    return seed;
  }
};

}  // namespace harmtree
