#include "colt/search.hpp"

#include <algorithm>
#include <array>

#include "colt/error.hpp"
#include "colt/prompt.hpp"

namespace colt {

void SearchConfig::validate() const {
  policy.validate();
  if (models.empty()) throw ConfigError("at least one model is required");
  if (rollout_depth < 0) throw ConfigError("search.rollout_depth must be nonnegative");
  if (root_model && !models.contains(*root_model)) {
    throw ConfigError("search.root_model '" + *root_model + "' is not a configured model");
  }
}

ModelId SearchConfig::resolved_root_model() const {
  return root_model.value_or(models.largest().id);
}

std::string_view to_string(SampleKind kind) {
  switch (kind) {
    case SampleKind::Regular:
      return "regular";
    case SampleKind::Alteration:
      return "alteration";
    case SampleKind::Terminal:
      return "terminal";
  }
  return "?";
}

std::optional<SampleKind> parse_sample_kind(std::string_view text) {
  if (text == "regular") return SampleKind::Regular;
  if (text == "alteration") return SampleKind::Alteration;
  if (text == "terminal") return SampleKind::Terminal;
  return std::nullopt;
}

std::vector<NodeId> select_leaf(const SearchTree& tree, const ModelSet& models,
                                const PolicyParams& params, Rng& rng) {
  std::vector<NodeId> path{tree.root()};
  std::vector<NodeId> live;
  std::vector<ChildCandidate> candidates;
  for (;;) {
    const NodeId cur = path.back();
    const SearchNode& node = tree[cur];
    if (node.state.at_horizon()) break;
    if (tree.live_children(cur) < static_cast<std::size_t>(params.branching)) break;

    live.clear();
    candidates.clear();
    for (NodeId c : node.children) {
      if (tree[c].pruned) continue;
      live.push_back(c);
      candidates.push_back(
          {tree[c].stats, phi_small(models.get(tree[c].acting_model), models, params.epsilon)});
    }
    const std::uint64_t parent_visits = std::max<std::uint64_t>(node.stats.visits, 1);
    path.push_back(live[select_child(candidates, parent_visits, params, rng)]);
  }
  return path;
}

NodeId expand(SearchTree& tree, NodeId leaf, const JointProposal& proposal, const Environment& env,
              int branching, const ExpandOptions& options) {
  const SearchNode& parent = tree[leaf];
  if (parent.state.at_horizon()) throw HorizonExceeded("cannot expand a node at the horizon");
  if (!options.bypass_branching &&
      tree.live_children(leaf) >= static_cast<std::size_t>(branching)) {
    throw BranchingFull("node already has " + std::to_string(branching) + " live children");
  }
  if (proposal.mutators.empty()) throw InvalidMutator("proposal carries no transformations");

  ProgramState state = parent.state;
  for (const auto& m : proposal.mutators) state = apply_mutator(state, m);

  SearchNode child;
  child.state = std::move(state);
  child.acting_model = proposal.next_model;
  child.expanded_by = options.expanded_by.value_or(parent.acting_model);
  child.stats.raw_cost = env.cost(child.state);
  child.speedup = env.speedup(child.state);
  child.is_regression = child.stats.raw_cost > parent.stats.raw_cost;
  return tree.add_child(leaf, std::move(child));
}

RolloutResult rollout(const ProgramState& state, int depth, const Environment& env, Rng& rng) {
  ProgramState cur = state;
  for (int i = 0; i < depth; ++i) {
    const auto valid = valid_mutators(cur);
    if (valid.empty()) break;
    cur = apply_mutator(cur, valid[rng.index(valid.size())]);
  }
  const double reward = env.reward(cur);
  return {std::move(cur), reward};
}

void backpropagate(SearchTree& tree, std::span<const NodeId> path, double reward) {
  for (NodeId id : path) {
    auto& stats = tree.node(id).stats;
    stats.visits += 1;
    stats.cumulative_reward += reward;
  }
}

bool check_course_alteration(const SearchTree& tree, std::span<const NodeId> path, NodeId child,
                             const ModelSet& models) {
  const auto small_regression = [&](const SearchNode& n) {
    return n.is_regression && n.expanded_by && !models.is_largest(*n.expanded_by);
  };
  if (!small_regression(tree[child])) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (small_regression(tree[path[i]])) return true;
  }
  return false;
}

AlterationOutcome course_alter(SearchTree& tree, std::span<const NodeId> path,
                               NodeId regressive_child, const ProposerContext& ctx,
                               ProposerRegistry& proposers, const Environment& env,
                               const SearchConfig& config, StatsTable& stats, Rng& rng) {
  const NodeId parent = path.back();
  tree.node(regressive_child).pruned = true;

  const ModelDescriptor& largest = config.models.largest();
  AlterationOutcome out;
  out.proposal = propose(proposers.at(largest.id), largest, ctx, tree[parent].state, env,
                         config.models, rng);
  out.replacement = expand(tree, parent, out.proposal, env, config.policy.branching,
                           {.bypass_branching = true, .expanded_by = largest.id});
  out.rollout = rollout(tree[out.replacement].state, config.rollout_depth, env, rng);

  std::vector<NodeId> full{path.begin(), path.end()};
  full.push_back(out.replacement);
  backpropagate(tree, full, out.rollout.reward);
  record_alteration(stats[largest.id], out.proposal.errors());
  return out;
}

ProposerContext build_context(const SearchTree& tree, std::span<const NodeId> path,
                              const StatsTable& stats, const ModelSet& models,
                              std::uint64_t trials_done, std::uint64_t trials_total) {
  const auto summary = [&](NodeId id, bool with_code) {
    const SearchNode& n = tree[id];
    ProgramSummary s{n.state.trace_strings(), n.speedup, std::nullopt};
    if (with_code) s.rendering = render_kernel(n.state);
    return s;
  };
  const auto ancestor = [&](std::size_t up) -> std::optional<NodeId> {
    if (path.size() <= up) return std::nullopt;
    return path[path.size() - 1 - up];
  };

  ProposerContext ctx;
  const SearchNode& leaf = tree[path.back()];
  ctx.current = summary(path.back(), true);
  if (auto p = ancestor(1)) ctx.parent = summary(*p, false);
  if (auto g = ancestor(2)) ctx.grandparent = summary(*g, false);
  for (const auto& m : valid_mutators(leaf.state)) ctx.available_mutators.push_back(m.to_string());
  ctx.leaf_depth = static_cast<int>(path.size()) - 1;
  ctx.trials_done = trials_done;
  ctx.trials_total = trials_total;

  for (const auto& m : models.models()) {
    const auto it = stats.find(m.id);
    ctx.global_stats.push_back({m.id, m.parameter_count, it == stats.end() ? ModelStats{} : it->second});
  }

  constexpr std::array<const char*, 3> kRoles{"current", "parent", "grandparent"};
  for (std::size_t up = 0; up < kRoles.size(); ++up) {
    LocalModelEntry entry{kRoles[up], std::nullopt, std::nullopt};
    if (auto id = ancestor(up)) {
      const SearchNode& n = tree[*id];
      entry.expanded_by = n.expanded_by;
      if (n.parent != kNoNode) entry.score_delta = n.speedup - tree[n.parent].speedup;
    }
    ctx.local_models.push_back(std::move(entry));
  }
  return ctx;
}

namespace {

class Driver {
 public:
  Driver(const Environment& env, ProposerRegistry& proposers, const SearchConfig& config,
         const SampleObserver& observer)
      : env_(env),
        proposers_(proposers),
        config_(config),
        observer_(observer),
        rng_(config.seed),
        result_{SearchTree{env.initial_state(), config.resolved_root_model(),
                           env.cost(env.initial_state()), env.speedup(env.initial_state())},
                env.initial_state()} {
    result_.best_speedup = env.speedup(result_.best_state);
    for (const auto& m : config.models.models()) result_.final_stats[m.id] = ModelStats{};
  }

  SearchResult run() {
    try {
      for (std::uint64_t trial = 0; trial < config_.trials; ++trial) run_trial(trial);
    } catch (const ProposerUnavailable& e) {
      result_.complete = false;
      result_.failure = e.what();
    }
    const SearchTree& tree = result_.tree;
    result_.tree_summary = {tree.size(), tree.pruned_count(), tree[tree.root()].stats.visits};
    return std::move(result_);
  }

 private:
  void run_trial(std::uint64_t trial) {
    SearchTree& tree = result_.tree;
    const std::vector<NodeId> path = select_leaf(tree, config_.models, config_.policy, rng_);
    const NodeId leaf = path.back();

    if (tree[leaf].state.at_horizon()) {
      const double reward = env_.reward(tree[leaf].state);
      backpropagate(tree, path, reward);
      SampleRecord rec = base_record(trial, SampleKind::Terminal, path, leaf);
      rec.node = leaf;
      rec.parent = tree[leaf].parent;
      rec.child_cost = tree[leaf].stats.raw_cost;
      rec.child_speedup = tree[leaf].speedup;
      rec.terminal_trace = tree[leaf].state.trace_strings();
      rec.terminal_speedup = tree[leaf].speedup;
      rec.rollout_reward = reward;
      rec.regression = tree[leaf].is_regression;
      emit(std::move(rec));
      return;
    }

    const ProposerContext ctx =
        build_context(tree, path, result_.final_stats, config_.models, trial, config_.trials);
    const ModelDescriptor& acting = config_.models.get(tree[leaf].acting_model);
    const JointProposal proposal = propose(proposers_.at(acting.id), acting, ctx, tree[leaf].state,
                                           env_, config_.models, rng_);
    const NodeId child = expand(tree, leaf, proposal, env_, config_.policy.branching);
    const RolloutResult ro = rollout(tree[child].state, config_.rollout_depth, env_, rng_);

    const bool improved = tree[child].speedup > tree[leaf].speedup;
    record_outcome(result_.final_stats[acting.id], improved, proposal.errors());
    consider(tree[child].state);
    consider(ro.terminal);

    const bool alter = config_.course_alteration_enabled &&
                       check_course_alteration(tree, path, child, config_.models);

    SampleRecord rec = expansion_record(trial, SampleKind::Regular, path, leaf, child, proposal, ro);
    rec.acting_model = acting.id;
    rec.backpropagated = !alter;
    emit(std::move(rec));

    if (!alter) {
      std::vector<NodeId> full = path;
      full.push_back(child);
      backpropagate(tree, full, ro.reward);
      return;
    }

    const AlterationOutcome outcome = course_alter(tree, path, child, ctx, proposers_, env_,
                                                   config_, result_.final_stats, rng_);
    ++result_.alterations;
    consider(tree[outcome.replacement].state);
    consider(outcome.rollout.terminal);
    SampleRecord alt = expansion_record(trial, SampleKind::Alteration, path, leaf,
                                        outcome.replacement, outcome.proposal, outcome.rollout);
    alt.acting_model = config_.models.largest().id;
    emit(std::move(alt));
  }

  SampleRecord base_record(std::uint64_t trial, SampleKind kind, const std::vector<NodeId>& path,
                           NodeId leaf) const {
    SampleRecord rec;
    rec.trial = trial;
    rec.kind = kind;
    rec.depth = static_cast<int>(path.size()) - 1;
    rec.acting_model = result_.tree[leaf].acting_model;
    return rec;
  }

  SampleRecord expansion_record(std::uint64_t trial, SampleKind kind,
                                const std::vector<NodeId>& path, NodeId leaf, NodeId child,
                                const JointProposal& proposal, const RolloutResult& ro) const {
    const SearchTree& tree = result_.tree;
    SampleRecord rec = base_record(trial, kind, path, leaf);
    rec.node = child;
    rec.parent = leaf;
    for (const auto& m : proposal.mutators) rec.mutators.push_back(m.to_string());
    rec.next_model = proposal.next_model;
    rec.child_cost = tree[child].stats.raw_cost;
    rec.child_speedup = tree[child].speedup;
    rec.terminal_trace = ro.terminal.trace_strings();
    rec.terminal_speedup = env_.speedup(ro.terminal);
    rec.rollout_reward = ro.reward;
    rec.regression = tree[child].is_regression;
    rec.improved = tree[child].speedup > tree[leaf].speedup;
    rec.errors = proposal.errors();
    return rec;
  }

  void consider(const ProgramState& state) {
    const double s = env_.speedup(state);
    if (s > result_.best_speedup) {
      result_.best_speedup = s;
      result_.best_state = state;
    }
  }

  void emit(SampleRecord rec) {
    rec.index = result_.samples.size();
    rec.best_so_far = result_.best_speedup;
    if (observer_) observer_(rec);
    result_.samples.push_back(std::move(rec));
  }

  const Environment& env_;
  ProposerRegistry& proposers_;
  const SearchConfig& config_;
  const SampleObserver& observer_;
  Rng rng_;
  SearchResult result_;
};

}  // namespace

SearchResult run_search(const Environment& env, ProposerRegistry& proposers,
                        const SearchConfig& config, const SampleObserver& observer) {
  config.validate();
  if (!proposers.covers(config.models)) {
    throw ConfigError("every configured model needs a proposer");
  }
  return Driver{env, proposers, config, observer}.run();
}

}  // namespace colt
