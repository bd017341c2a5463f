#pragma once

#include <cstdint>
#include <vector>

#include "colt/environment.hpp"
#include "colt/mutator.hpp"

namespace colt {

inline constexpr int kOracleMaxHorizon = 8;

struct BruteForceResult {
  std::vector<Mutator> best_trace;
  Rational best_speedup{1};
  std::uint64_t states_enumerated = 0;
};

/// Exhaustive optimum of SynthKernel-v1 over all valid traces of length <= horizon.
/// Among equally fast traces the shortest wins, then the lexicographically smallest
/// by canonical spelling. Throws OracleBudgetExceeded above 8.
BruteForceResult brute_force_optimum(int horizon);

}  // namespace colt
