#include "colt/tree.hpp"

#include <algorithm>

namespace colt {

SearchTree::SearchTree(ProgramState root_state, ModelId root_model, double root_cost,
                       double root_speedup) {
  SearchNode root;
  root.state = std::move(root_state);
  root.acting_model = std::move(root_model);
  root.stats.raw_cost = root_cost;
  root.speedup = root_speedup;
  nodes_.push_back(std::move(root));
}

NodeId SearchTree::add_child(NodeId parent, SearchNode child) {
  const NodeId id = nodes_.size();
  child.parent = parent;
  nodes_.push_back(std::move(child));
  nodes_.at(parent).children.push_back(id);
  return id;
}

std::size_t SearchTree::live_children(NodeId id) const {
  const auto& children = nodes_.at(id).children;
  return static_cast<std::size_t>(std::count_if(
      children.begin(), children.end(), [&](NodeId c) { return !nodes_[c].pruned; }));
}

std::size_t SearchTree::pruned_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.pruned; }));
}

std::vector<NodeId> SearchTree::path_to(NodeId id) const {
  std::vector<NodeId> path;
  for (NodeId cur = id; cur != kNoNode; cur = nodes_.at(cur).parent) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace colt
