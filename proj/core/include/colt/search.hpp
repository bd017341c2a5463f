#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colt/environment.hpp"
#include "colt/model.hpp"
#include "colt/model_stats.hpp"
#include "colt/policy.hpp"
#include "colt/proposer.hpp"
#include "colt/rng.hpp"
#include "colt/tree.hpp"

namespace colt {

struct SearchConfig {
  std::uint64_t trials = 300;
  int rollout_depth = 4;
  PolicyParams policy;
  ModelSet models;
  std::optional<ModelId> root_model;  // defaults to the largest model
  std::uint64_t seed = 0;
  bool course_alteration_enabled = true;

  /// Throws ConfigError.
  void validate() const;
  [[nodiscard]] ModelId resolved_root_model() const;
};

enum class SampleKind {
  Regular,     // a proposer expanded the selected leaf
  Alteration,  // the largest model re-expanded a parent after a pruned regression
  Terminal,    // the selected leaf sits at the horizon and was re-evaluated
};

std::string_view to_string(SampleKind kind);
std::optional<SampleKind> parse_sample_kind(std::string_view text);

/// One evaluated sample, as written to samples.log.
struct SampleRecord {
  std::uint64_t index = 0;  // 0-based position in the log
  std::uint64_t trial = 0;
  SampleKind kind = SampleKind::Regular;
  int depth = 0;  // depth of the expanded leaf
  NodeId node = kNoNode;
  NodeId parent = kNoNode;
  ModelId acting_model;
  std::vector<std::string> mutators;
  ModelId next_model;
  double child_cost = 0.0;
  double child_speedup = 1.0;
  std::vector<std::string> terminal_trace;
  double terminal_speedup = 1.0;
  double rollout_reward = 0.0;
  bool regression = false;
  bool improved = false;
  int errors = 0;
  bool backpropagated = true;  // false for pruned expansions
  double best_so_far = 1.0;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct TreeSummary {
  std::size_t nodes = 0;
  std::size_t pruned = 0;
  std::uint64_t root_visits = 0;
};

struct SearchResult {
  SearchResult(SearchTree tree_, ProgramState best) : best_state(std::move(best)), tree(std::move(tree_)) {}

  ProgramState best_state;
  double best_speedup = 1.0;
  std::vector<SampleRecord> samples;
  StatsTable final_stats;
  TreeSummary tree_summary;
  SearchTree tree;
  std::uint64_t alterations = 0;
  bool complete = true;
  std::string failure;  // set when !complete
};

struct RolloutResult {
  ProgramState terminal;
  double reward = 0.0;
};

/// Descends from the root by select_child over live children until a node has
/// fewer than `branching` live children or sits at the horizon.
std::vector<NodeId> select_leaf(const SearchTree& tree, const ModelSet& models,
                                const PolicyParams& params, Rng& rng);

struct ExpandOptions {
  bool bypass_branching = false;
  std::optional<ModelId> expanded_by;  // defaults to the leaf's acting model
};

/// Applies the proposal at `leaf` and links the resulting child. Throws
/// HorizonExceeded, BranchingFull (unless bypassed) or InvalidMutator.
NodeId expand(SearchTree& tree, NodeId leaf, const JointProposal& proposal, const Environment& env,
              int branching, const ExpandOptions& options = {});

/// Applies up to `depth` uniformly random valid mutators.
RolloutResult rollout(const ProgramState& state, int depth, const Environment& env, Rng& rng);

/// Adds one visit and `reward` to every node on `path`.
void backpropagate(SearchTree& tree, std::span<const NodeId> path, double reward);

/// True iff `child` is a small-model regression and the path below the root already
/// holds another small-model regression.
bool check_course_alteration(const SearchTree& tree, std::span<const NodeId> path, NodeId child,
                             const ModelSet& models);

struct AlterationOutcome {
  NodeId replacement = kNoNode;
  JointProposal proposal;
  RolloutResult rollout;
};

/// Prunes `regressive_child`, re-expands the last node of `path` with the largest
/// model using `ctx`, rolls the replacement out and backpropagates only its reward.
/// The largest model's course_alterations counter is incremented in `stats`.
AlterationOutcome course_alter(SearchTree& tree, std::span<const NodeId> path,
                               NodeId regressive_child, const ProposerContext& ctx,
                               ProposerRegistry& proposers, const Environment& env,
                               const SearchConfig& config, StatsTable& stats, Rng& rng);

/// Context for querying the acting model at the end of `path`.
ProposerContext build_context(const SearchTree& tree, std::span<const NodeId> path,
                              const StatsTable& stats, const ModelSet& models,
                              std::uint64_t trials_done, std::uint64_t trials_total);

using SampleObserver = std::function<void(const SampleRecord&)>;

/// Runs `config.trials` trials of the collaborative tree search. Deterministic for a
/// fixed seed and deterministic proposers. A ProposerUnavailable ends the run early
/// with `complete == false`.
SearchResult run_search(const Environment& env, ProposerRegistry& proposers,
                        const SearchConfig& config, const SampleObserver& observer = {});

}  // namespace colt
