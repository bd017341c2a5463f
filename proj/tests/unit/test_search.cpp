#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "colt/error.hpp"
#include "colt/sample_log.hpp"
#include "colt/scripted.hpp"
#include "colt/search.hpp"
#include "test_support.hpp"

using namespace colt;
using colt::testing::check_invariants;
using colt::testing::two_models;

namespace {

JointProposal proposal(std::vector<Mutator> ms, ModelId next) {
  JointProposal p;
  p.mutators = std::move(ms);
  p.next_model = std::move(next);
  return p;
}

SearchTree fresh_tree(const SynthKernel& env, ModelId root_model) {
  const auto s0 = env.initial_state();
  return SearchTree{s0, std::move(root_model), env.cost(s0), env.speedup(s0)};
}

std::vector<Mutator> regressive_first() {
  return {Mutator::unroll(), Mutator::cache_write(), Mutator::tile(4), Mutator::tile(16),
          Mutator::tile(8), Mutator::vectorize(), Mutator::parallel()};
}

ProposerRegistry regression_registry() {
  ProposerRegistry reg;
  reg.add("small", std::make_unique<PriorityProposer>(regressive_first(), "small"));
  reg.add("large", std::make_unique<ScriptedProposer>(ScriptedProfile{1.0, 0.0, 1.0}));
  return reg;
}

SearchConfig regression_config(bool alteration) {
  SearchConfig cfg;
  cfg.models = two_models();
  cfg.root_model = "small";
  cfg.trials = 60;
  cfg.seed = 3;
  cfg.course_alteration_enabled = alteration;
  return cfg;
}

std::string log_text(const SearchResult& r) {
  std::ostringstream os;
  write_sample_log(os, {{"seed", "42"}}, r.samples);
  return os.str();
}

}  // namespace

TEST_CASE("select_leaf examples") {
  const SynthKernel env;
  const ModelSet models = two_models();
  const PolicyParams params;
  Rng rng{1};

  SearchTree tree = fresh_tree(env, "large");
  CHECK(select_leaf(tree, models, params, rng) == std::vector<NodeId>{0});

  const NodeId a = expand(tree, 0, proposal({Mutator::tile(8)}, "small"), env, 2);
  const NodeId b = expand(tree, 0, proposal({Mutator::parallel()}, "large"), env, 2);
  backpropagate(tree, std::vector<NodeId>{0, a}, 0.5);
  backpropagate(tree, std::vector<NodeId>{0, b}, 0.7);
  CHECK(select_leaf(tree, models, params, rng).size() >= 2);

  SearchTree lone = fresh_tree(env, "large");
  const NodeId c = expand(lone, 0, proposal({Mutator::unroll()}, "small"), env, 1);
  lone.node(c).pruned = true;
  CHECK(select_leaf(lone, models, PolicyParams{0.5, 1.0, 1e-9, 1}, rng) == std::vector<NodeId>{0});
}

TEST_CASE("select_leaf stops at the horizon") {
  const SynthKernel env{1000.0, 1};
  SearchTree tree = fresh_tree(env, "large");
  const PolicyParams params{0.5, 1.0, 1e-9, 1};
  const NodeId a = expand(tree, 0, proposal({Mutator::parallel()}, "large"), env, 1);
  backpropagate(tree, std::vector<NodeId>{0, a}, 0.5);
  Rng rng{0};
  CHECK(select_leaf(tree, two_models(), params, rng) == std::vector<NodeId>{0, a});
}

TEST_CASE("expand examples") {
  const SynthKernel env;
  SearchTree tree = fresh_tree(env, "large");

  const NodeId t8 = expand(tree, 0, proposal({Mutator::tile(8)}, "small"), env, 3);
  CHECK(tree[t8].state.trace_strings() == std::vector<std::string>{"Tile(8)"});
  CHECK_FALSE(tree[t8].is_regression);
  CHECK(tree[t8].speedup == doctest::Approx(2.0));
  CHECK(tree[t8].acting_model == "small");
  CHECK(tree[t8].expanded_by == std::optional<ModelId>{"large"});

  const NodeId un = expand(tree, 0, proposal({Mutator::unroll()}, "small"), env, 3);
  CHECK(tree[un].is_regression);
  CHECK(tree[un].stats.raw_cost == doctest::Approx(1111.111111));

  const NodeId macro = expand(
      tree, 0, proposal({Mutator::tile(8), Mutator::vectorize(), Mutator::parallel()}, "large"), env, 3);
  CHECK(tree[macro].state.depth() == 3);
  CHECK(tree[0].children == std::vector<NodeId>{t8, un, macro});
  CHECK(tree.size() == 4);

  CHECK_THROWS_AS(expand(tree, 0, proposal({Mutator::parallel()}, "small"), env, 3), BranchingFull);
  CHECK_NOTHROW(expand(tree, 0, proposal({Mutator::parallel()}, "small"), env, 3,
                       {.bypass_branching = true, .expanded_by = std::nullopt}));
}

TEST_CASE("expand rejects horizon overruns") {
  const SynthKernel env{1000.0, 2};
  SearchTree tree = fresh_tree(env, "large");
  CHECK_THROWS_AS(expand(tree, 0,
                         proposal({Mutator::tile(8), Mutator::vectorize(), Mutator::parallel()}, "large"),
                         env, 2),
                  HorizonExceeded);
  const NodeId full = expand(tree, 0, proposal({Mutator::tile(8), Mutator::vectorize()}, "large"), env, 2);
  CHECK_THROWS_AS(expand(tree, full, proposal({Mutator::parallel()}, "large"), env, 2), HorizonExceeded);
}

TEST_CASE("rollout examples") {
  const SynthKernel env;
  const auto s0 = env.initial_state();
  Rng rng{1};
  const auto zero = rollout(s0, 0, env, rng);
  CHECK(zero.terminal == s0);
  CHECK(zero.reward == 0.0);

  Rng a{42}, b{42};
  const auto ra = rollout(s0, 4, env, a);
  const auto rb = rollout(s0, 4, env, b);
  CHECK(ra.terminal == rb.terminal);
  CHECK(ra.reward == rb.reward);
  CHECK(ra.terminal.depth() == 4);

  const SynthKernel short_env{1000.0, 2};
  Rng c{7};
  CHECK(rollout(short_env.initial_state(), 5, short_env, c).terminal.depth() == 2);
}

TEST_CASE("depth-1 rollout mean matches the analytic single-step average") {
  // 1 - 1/g over the seven single-step gains, negative values clamped.
  double expected = 0.0;
  for (double g : {1.6, 2.0, 1.8, 1.5, 3.5, 0.9, 0.95}) expected += std::max(0.0, 1.0 - 1.0 / g);
  expected /= 7.0;
  CHECK(expected == doctest::Approx(0.3381519274));

  const SynthKernel env;
  Rng rng{2024};
  double sum = 0.0;
  constexpr int kN = 10000;
  for (int i = 0; i < kN; ++i) sum += rollout(env.initial_state(), 1, env, rng).reward;
  // per-sample variance 0.058435, sigma of the mean 0.0024173
  CHECK(std::abs(sum / kN - expected) <= 3 * 0.0024173);
}

TEST_CASE("backpropagate examples") {
  const SynthKernel env;
  SearchTree tree = fresh_tree(env, "large");
  const NodeId a = expand(tree, 0, proposal({Mutator::tile(8)}, "large"), env, 2);
  const NodeId sib = expand(tree, 0, proposal({Mutator::unroll()}, "large"), env, 2);
  const NodeId b = expand(tree, a, proposal({Mutator::vectorize()}, "large"), env, 2);
  tree.node(sib).pruned = true;

  backpropagate(tree, std::vector<NodeId>{0, a, b}, 0.5);
  for (NodeId id : {NodeId{0}, a, b}) {
    CHECK(tree[id].stats.visits == 1);
    CHECK(tree[id].stats.cumulative_reward == 0.5);
  }
  CHECK(tree[sib].stats.visits == 0);
  CHECK(tree[sib].stats.cumulative_reward == 0.0);

  SearchTree two = fresh_tree(env, "large");
  backpropagate(two, std::vector<NodeId>{0}, 0.2);
  backpropagate(two, std::vector<NodeId>{0}, 0.8);
  CHECK(two[0].stats.visits == 2);
  CHECK(two[0].stats.cumulative_reward == doctest::Approx(1.0));
}

TEST_CASE("check_course_alteration examples") {
  const SynthKernel env;
  const ModelSet models = two_models();
  SearchTree tree = fresh_tree(env, "small");
  // root -Unroll-> a -CacheWrite-> b, both proposed by the small model
  const NodeId a = expand(tree, 0, proposal({Mutator::unroll()}, "small"), env, 2);
  const NodeId b = expand(tree, a, proposal({Mutator::cache_write()}, "small"), env, 2);
  REQUIRE(tree[a].is_regression);
  REQUIRE(tree[b].is_regression);
  CHECK(check_course_alteration(tree, std::vector<NodeId>{0, a}, b, models));

  // first regression on the path: nothing to compare against
  CHECK_FALSE(check_course_alteration(tree, std::vector<NodeId>{0}, a, models));

  const NodeId good = expand(tree, a, proposal({Mutator::tile(8)}, "small"), env, 3);
  CHECK_FALSE(check_course_alteration(tree, std::vector<NodeId>{0, a}, good, models));

  // the same regression proposed by the largest model
  SearchTree big = fresh_tree(env, "small");
  const NodeId ba = expand(big, 0, proposal({Mutator::unroll()}, "large"), env, 2);
  const NodeId bb = expand(big, ba, proposal({Mutator::cache_write()}, "large"), env, 2);
  CHECK_FALSE(check_course_alteration(big, std::vector<NodeId>{0, ba}, bb, models));
}

TEST_CASE("regressions need not be adjacent") {
  const SynthKernel env;
  const ModelSet models = two_models();
  SearchTree tree = fresh_tree(env, "small");
  const NodeId a = expand(tree, 0, proposal({Mutator::unroll()}, "small"), env, 2);
  const NodeId b = expand(tree, a, proposal({Mutator::parallel()}, "small"), env, 2);
  const NodeId c = expand(tree, b, proposal({Mutator::cache_write()}, "small"), env, 2);
  REQUIRE_FALSE(tree[b].is_regression);
  REQUIRE(tree[c].is_regression);
  CHECK(check_course_alteration(tree, std::vector<NodeId>{0, a, b}, c, models));
}

TEST_CASE("course_alter prunes and re-expands with the largest model") {
  const SynthKernel env;
  SearchConfig cfg = regression_config(true);
  ProposerRegistry reg = regression_registry();
  StatsTable stats;
  SearchTree tree = fresh_tree(env, "small");
  const NodeId a = expand(tree, 0, proposal({Mutator::unroll()}, "small"), env, 2);
  backpropagate(tree, std::vector<NodeId>{0, a}, 0.0);
  const NodeId bad = expand(tree, a, proposal({Mutator::cache_write()}, "small"), env, 2);

  const std::vector<NodeId> path{0, a};
  const auto ctx = build_context(tree, path, stats, cfg.models, 1, 10);
  Rng rng{5};
  const auto out = course_alter(tree, path, bad, ctx, reg, env, cfg, stats, rng);

  CHECK(tree[bad].pruned);
  CHECK(tree[bad].stats.visits == 0);
  CHECK(tree[a].children == std::vector<NodeId>{bad, out.replacement});
  CHECK(tree[out.replacement].expanded_by == std::optional<ModelId>{"large"});
  // greedy from [Unroll] is Parallel
  CHECK(tree[out.replacement].state.trace_strings() == std::vector<std::string>{"Unroll", "Parallel"});
  CHECK_FALSE(tree[out.replacement].is_regression);
  CHECK(tree[a].stats.visits == 2);
  CHECK(tree[a].stats.cumulative_reward == doctest::Approx(out.rollout.reward));
  CHECK(stats["large"].course_alterations == 1);
  CHECK(stats["large"].calls == 0);
}

TEST_CASE("greedy largest replacement from the root is the best single step") {
  const SynthKernel env;
  SearchConfig cfg = regression_config(true);
  ProposerRegistry reg = regression_registry();
  StatsTable stats;
  SearchTree tree = fresh_tree(env, "small");
  const NodeId bad = expand(tree, 0, proposal({Mutator::unroll()}, "small"), env, 2);
  const std::vector<NodeId> path{0};
  const auto ctx = build_context(tree, path, stats, cfg.models, 0, 10);
  Rng rng{5};
  const auto out = course_alter(tree, path, bad, ctx, reg, env, cfg, stats, rng);
  const auto& trace = tree[out.replacement].state.trace_strings();
  REQUIRE(trace.size() == 1);
  CHECK(trace[0] == greedy_mutator(env.initial_state(), env).to_string());
  CHECK_FALSE(tree[out.replacement].is_regression);
}

TEST_CASE("run_search with zero trials") {
  const SynthKernel env;
  SearchConfig cfg;
  cfg.models = two_models();
  cfg.trials = 0;
  ProposerRegistry reg = regression_registry();
  const auto r = run_search(env, reg, cfg);
  CHECK(r.best_state == env.initial_state());
  CHECK(r.best_speedup == 1.0);
  CHECK(r.samples.empty());
}

TEST_CASE("a perfect greedy single model reaches the horizon-4 optimum") {
  const SynthKernel env{1000.0, 4};
  SearchConfig cfg;
  cfg.models = ModelSet{{{"solo", 70e9}}};
  cfg.trials = 50;
  cfg.seed = 1;
  ProposerRegistry reg;
  reg.add("solo", std::make_unique<ScriptedProposer>(ScriptedProfile{}));
  const auto r = run_search(env, reg, cfg);
  CHECK(r.best_speedup == doctest::Approx(36.4).epsilon(1e-12));
  CHECK(r.best_state.trace_strings() ==
        std::vector<std::string>{"Parallel", "Tile(8)", "Vectorize", "CacheWrite"});
  CHECK(r.alterations == 0);
  CHECK(check_invariants(r, cfg).all());
}

TEST_CASE("run_search is deterministic for a fixed seed") {
  const SynthKernel env;
  SearchConfig cfg;
  cfg.models = two_models();
  cfg.trials = 120;
  cfg.seed = 42;
  const auto run = [&] {
    ProposerRegistry reg;
    reg.add("small", std::make_unique<ScriptedProposer>(ScriptedProfile{0.4, 0.1, 0.3}));
    reg.add("large", std::make_unique<ScriptedProposer>(ScriptedProfile{0.9, 0.02, 0.5}));
    return run_search(env, reg, cfg);
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.samples == b.samples);
  CHECK(log_text(a) == log_text(b));

  cfg.seed = 43;
  CHECK(log_text(run()) != log_text(a));
}

TEST_CASE("regression scenario triggers alterations only when enabled") {
  const SynthKernel env;
  for (bool enabled : {true, false}) {
    CAPTURE(enabled);
    const SearchConfig cfg = regression_config(enabled);
    ProposerRegistry reg = regression_registry();
    const auto r = run_search(env, reg, cfg);
    const auto inv = check_invariants(r, cfg);
    CHECK_MESSAGE(inv.all(), inv.detail);
    if (enabled) {
      CHECK(r.alterations > 0);
      CHECK(r.final_stats.at("large").course_alterations == r.alterations);
      CHECK(r.tree_summary.pruned == r.alterations);
    } else {
      CHECK(r.alterations == 0);
      CHECK(r.tree_summary.pruned == 0);
    }
    CHECK(r.samples.size() == cfg.trials + r.alterations);
  }
}

TEST_CASE("alteration fires exactly at a repeated small-model regression") {
  const SynthKernel env;
  const SearchConfig cfg = regression_config(true);
  ProposerRegistry reg = regression_registry();
  const auto r = run_search(env, reg, cfg);
  const auto& tree = r.tree;
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    if (s.kind != SampleKind::Regular) continue;
    bool prior = false;
    for (NodeId cur = s.parent; cur != kNoNode && cur != tree.root(); cur = tree[cur].parent) {
      const auto& n = tree[cur];
      prior = prior || (n.is_regression && n.expanded_by && *n.expanded_by != "large");
    }
    const bool expected = s.regression && s.acting_model != "large" && prior;
    CHECK(expected == !s.backpropagated);
    if (!s.backpropagated) {
      REQUIRE(i + 1 < r.samples.size());
      CHECK(r.samples[i + 1].kind == SampleKind::Alteration);
      CHECK(r.samples[i + 1].parent == s.parent);
      CHECK(tree[s.node].pruned);
    }
  }
}

TEST_CASE("only-largest runs never alter") {
  const SynthKernel env;
  SearchConfig cfg;
  cfg.models = two_models();
  cfg.root_model = "large";
  cfg.trials = 80;
  ProposerRegistry reg;
  reg.add("large", std::make_unique<PriorityProposer>(regressive_first(), "large"));
  reg.add("small", std::make_unique<PriorityProposer>(regressive_first(), "small"));
  const auto r = run_search(env, reg, cfg);
  bool regressions = false;
  for (const auto& s : r.samples) regressions = regressions || s.regression;
  CHECK(regressions);
  CHECK(r.alterations == 0);
  CHECK(r.final_stats.at("small").calls == 0);
}

TEST_CASE("terminal leaves are re-evaluated without a proposer call") {
  const SynthKernel env{1000.0, 1};
  SearchConfig cfg;
  cfg.models = ModelSet{{{"solo", 1e9}}};
  cfg.policy.branching = 1;
  cfg.trials = 5;
  ProposerRegistry reg;
  reg.add("solo", std::make_unique<ScriptedProposer>(ScriptedProfile{}));
  const auto r = run_search(env, reg, cfg);
  REQUIRE(r.samples.size() == 5);
  CHECK(r.samples[0].kind == SampleKind::Regular);
  for (std::size_t i = 1; i < 5; ++i) CHECK(r.samples[i].kind == SampleKind::Terminal);
  CHECK(r.final_stats.at("solo").calls == 1);
  CHECK(r.best_speedup == doctest::Approx(3.5));
  CHECK(check_invariants(r, cfg).all());
}

TEST_CASE("property: invariants hold across random configurations") {
  std::mt19937_64 gen{77};
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  for (int i = 0; i < 25; ++i) {
    const int horizon = 1 + static_cast<int>(gen() % 6);
    const SynthKernel env{1000.0, horizon};
    SearchConfig cfg;
    cfg.models = two_models(1e9 + 1e9 * unit(gen), 100e9);
    cfg.trials = 150;
    cfg.seed = gen();
    cfg.policy.lambda = unit(gen);
    cfg.policy.c = 0.1 + 2.0 * unit(gen);
    cfg.policy.branching = 1 + static_cast<int>(gen() % 3);
    cfg.root_model = unit(gen) < 0.5 ? "small" : "large";
    ProposerRegistry reg;
    reg.add("small", std::make_unique<ScriptedProposer>(ScriptedProfile{unit(gen), unit(gen), unit(gen)}));
    reg.add("large", std::make_unique<ScriptedProposer>(ScriptedProfile{unit(gen), unit(gen), unit(gen)}));
    const auto r = run_search(env, reg, cfg);
    const auto inv = check_invariants(r, cfg);
    CHECK_MESSAGE(inv.all(), inv.detail);
    CHECK(r.best_speedup == doctest::Approx(env.speedup(r.best_state)));
  }
}

TEST_CASE("build_context describes the local path") {
  const SynthKernel env;
  const ModelSet models = two_models();
  SearchTree tree = fresh_tree(env, "large");
  const NodeId a = expand(tree, 0, proposal({Mutator::tile(8)}, "small"), env, 2);
  StatsTable stats;
  stats["small"].calls = 3;
  const auto ctx = build_context(tree, std::vector<NodeId>{0, a}, stats, models, 4, 10);
  CHECK(ctx.current.trace == std::vector<std::string>{"Tile(8)"});
  CHECK(ctx.current.rendering.has_value());
  REQUIRE(ctx.parent.has_value());
  CHECK(ctx.parent->trace.empty());
  CHECK_FALSE(ctx.grandparent.has_value());
  CHECK(ctx.leaf_depth == 1);
  CHECK(ctx.trials_done == 4);
  CHECK(ctx.available_mutators.size() == 7);
  REQUIRE(ctx.global_stats.size() == 2);
  CHECK(ctx.global_stats[0].stats.calls == 3);
  REQUIRE(ctx.local_models.size() == 3);
  CHECK(ctx.local_models[0].expanded_by == std::optional<ModelId>{"large"});
  CHECK(ctx.local_models[0].score_delta == std::optional<double>{1.0});
  CHECK_FALSE(ctx.local_models[1].expanded_by.has_value());
  CHECK_FALSE(ctx.local_models[2].expanded_by.has_value());
}

TEST_CASE("SearchConfig validation") {
  SearchConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.models = two_models();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.resolved_root_model() == "large");
  cfg.root_model = "medium";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
