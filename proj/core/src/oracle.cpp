#include "colt/oracle.hpp"

#include <map>
#include <tuple>

#include "colt/error.hpp"
#include "colt/program.hpp"

namespace colt {

namespace {

struct Best {
  Rational speedup;
  std::vector<Mutator> suffix;
};

using Key = std::tuple<int, bool, bool, bool, bool, bool, bool, int>;

Key key_of(const ProgramFeatures& f, int remaining) {
  return {f.tile_factor,     f.vectorized,   f.parallelized,          f.unrolled,
          f.unroll_after_tile, f.cached_write, f.cache_after_vectorize, remaining};
}

class Search {
 public:
  Best solve(const ProgramState& state) {
    const int remaining = state.horizon() - state.depth();
    const Key key = key_of(state.features(), remaining);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // Stopping here yields the empty suffix, which precedes every other suffix.
    Best best{SynthKernel::exact_speedup(state.features()), {}};
    for (const auto& m : valid_mutators(state)) {  // canonical order
      Best child = solve(apply_mutator(state, m));
      child.suffix.insert(child.suffix.begin(), m);
      if (child.speedup > best.speedup ||
          (child.speedup == best.speedup && child.suffix.size() < best.suffix.size())) {
        best = std::move(child);
      }
    }
    memo_.emplace(key, best);
    return best;
  }

  [[nodiscard]] std::uint64_t states() const { return memo_.size(); }

 private:
  std::map<Key, Best> memo_;
};

}  // namespace

BruteForceResult brute_force_optimum(int horizon) {
  if (horizon > kOracleMaxHorizon) {
    throw OracleBudgetExceeded("oracle horizon " + std::to_string(horizon) + " exceeds budget of " +
                               std::to_string(kOracleMaxHorizon));
  }
  if (horizon < 0) throw OracleBudgetExceeded("oracle horizon must be nonnegative");
  Search search;
  Best best = search.solve(ProgramState{horizon});
  return {std::move(best.suffix), best.speedup, search.states()};
}

}  // namespace colt
