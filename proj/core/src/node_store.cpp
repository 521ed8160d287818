#include "harmtree/node_store.hpp"

#include <limits>
#include <stdexcept>

namespace harmtree {

NodeBuilder::NodeBuilder()
    : store_(std::make_shared<NodeStore>()), index_(64, Hash{&hashes_}, Equal{&store_->nodes_}) {}

NodeId NodeBuilder::make(Value value, std::vector<NodeId> children) {
  if (!store_) throw std::logic_error("NodeBuilder used after finish()");
  auto& nodes = store_->nodes_;
  if (nodes.size() >= std::numeric_limits<NodeId>::max()) throw std::length_error("node store exhausted");
  std::size_t h = hash_value(value);
  for (NodeId c : children) hash_combine(h, c);
  const auto candidate = static_cast<NodeId>(nodes.size());
  nodes.push_back(Node{std::move(value), std::move(children)});
  hashes_.push_back(h);
  if (auto it = index_.find(candidate); it != index_.end()) {
    nodes.pop_back();
    hashes_.pop_back();
    return *it;
  }
  index_.insert(candidate);
  return candidate;
}

NodeId NodeBuilder::import(const NodeStore& src, NodeId id, std::unordered_map<NodeId, NodeId>& memo) {
  if (auto it = memo.find(id); it != memo.end()) return it->second;
  const Node& n = src[id];
  std::vector<NodeId> kids;
  kids.reserve(n.children.size());
  for (NodeId c : n.children) kids.push_back(import(src, c, memo));
  const NodeId out = make(n.value, std::move(kids));
  memo.emplace(id, out);
  return out;
}

std::shared_ptr<const NodeStore> NodeBuilder::finish() {
  index_.clear();
  hashes_.clear();
  return std::move(store_);
}

}  // namespace harmtree
