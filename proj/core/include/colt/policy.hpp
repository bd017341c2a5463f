#pragma once

#include <cstdint>
#include <numbers>
#include <span>

#include "colt/model.hpp"
#include "colt/rng.hpp"

namespace colt {

struct PolicyParams {
  double lambda = 0.5;
  double c = std::numbers::sqrt2;
  double epsilon = 1e-9;
  int branching = 2;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

struct NodeStats {
  std::uint64_t visits = 0;
  double cumulative_reward = 0.0;  // sum of backpropagated rewards
  double raw_cost = 0.0;
};

/// Normalized log-scale preference for small models: 0 for the largest model,
/// 1 - O(epsilon) for the smallest. A single-size set yields 0 for every model.
double phi_small(const ModelDescriptor& model, const ModelSet& models, double epsilon);

/// Model-aware UCT. Unvisited children score +infinity.
double ma_uct_score(const NodeStats& child, double phi, std::uint64_t parent_visits,
                    const PolicyParams& params);

struct ChildCandidate {
  NodeStats stats;
  double phi = 0.0;
};

/// Index of the highest-scoring candidate; exact ties are broken uniformly with `rng`.
/// Throws EmptyChildren.
std::size_t select_child(std::span<const ChildCandidate> children, std::uint64_t parent_visits,
                         const PolicyParams& params, Rng& rng);

}  // namespace colt
