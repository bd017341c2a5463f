#include <benchmark/benchmark.h>

#include "colt/oracle.hpp"
#include "colt/policy.hpp"
#include "colt/scripted.hpp"
#include "colt/search.hpp"

namespace {

using namespace colt;

ModelSet pair() { return ModelSet{{{"small", 20e9}, {"large", 300e9}}}; }

void BM_RunSearch(benchmark::State& state) {
  const SynthKernel env;
  SearchConfig cfg;
  cfg.models = pair();
  cfg.trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    ProposerRegistry reg;
    reg.add("small", std::make_unique<ScriptedProposer>(ScriptedProfile{0.4, 0.1, 0.5}));
    reg.add("large", std::make_unique<ScriptedProposer>(ScriptedProfile{0.9, 0.02, 0.5}));
    benchmark::DoNotOptimize(run_search(env, reg, cfg).best_speedup);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunSearch)->Arg(300)->Arg(3000);

void BM_Oracle(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimum(horizon).states_enumerated);
}
BENCHMARK(BM_Oracle)->DenseRange(4, 8, 2);

void BM_SelectChild(benchmark::State& state) {
  const PolicyParams params;
  std::vector<ChildCandidate> cands;
  for (int i = 0; i < 3; ++i) cands.push_back({{static_cast<std::uint64_t>(5 + i), 1.5 + i, 1.0}, 0.3 * i});
  Rng rng{1};
  for (auto _ : state) benchmark::DoNotOptimize(select_child(cands, 20, params, rng));
}
BENCHMARK(BM_SelectChild);

void BM_Rollout(benchmark::State& state) {
  const SynthKernel env;
  const auto s0 = env.initial_state();
  Rng rng{2};
  for (auto _ : state) benchmark::DoNotOptimize(rollout(s0, 4, env, rng).reward);
}
BENCHMARK(BM_Rollout);

}  // namespace

BENCHMARK_MAIN();
