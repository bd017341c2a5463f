#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "colt/model.hpp"
#include "colt/policy.hpp"
#include "colt/program.hpp"

namespace colt {

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// A joint state: a program paired with the model that proposes from it.
struct SearchNode {
  ProgramState state;
  ModelId acting_model;
  std::optional<ModelId> expanded_by;  // empty for the root
  NodeStats stats;
  double speedup = 1.0;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  bool is_regression = false;  // cost above the parent's cost
  bool pruned = false;         // tombstone left by a course alteration
};

/// Arena-backed search tree. Node 0 is the root; ids are stable.
class SearchTree {
 public:
  SearchTree(ProgramState root_state, ModelId root_model, double root_cost, double root_speedup);

  [[nodiscard]] NodeId root() const noexcept { return 0; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] const SearchNode& node(NodeId id) const { return nodes_.at(id); }
  [[nodiscard]] SearchNode& node(NodeId id) { return nodes_.at(id); }
  [[nodiscard]] const SearchNode& operator[](NodeId id) const { return nodes_.at(id); }

  /// Links `child` under `parent` and returns its id.
  NodeId add_child(NodeId parent, SearchNode child);

  [[nodiscard]] std::size_t live_children(NodeId id) const;
  [[nodiscard]] std::size_t pruned_count() const;

  /// Root-to-node ids.
  [[nodiscard]] std::vector<NodeId> path_to(NodeId id) const;

 private:
  std::vector<SearchNode> nodes_;
};

}  // namespace colt
