#pragma once

#include <span>
#include <string>
#include <vector>

#include "colt/mutator.hpp"

namespace colt {

inline constexpr int kDefaultHorizon = 8;

/// Schedule facts derived from a trace. Two flags record conditions at the time
/// a transformation was applied, which is what makes the cost order-sensitive.
struct ProgramFeatures {
  int tile_factor = 1;
  bool vectorized = false;
  bool parallelized = false;
  bool unrolled = false;
  bool unroll_after_tile = false;
  bool cached_write = false;
  bool cache_after_vectorize = false;

  friend bool operator==(const ProgramFeatures&, const ProgramFeatures&) = default;
};

/// The base kernel plus an ordered transformation trace. Immutable once built;
/// transformations produce new values.
class ProgramState {
 public:
  explicit ProgramState(int horizon = kDefaultHorizon);

  /// Rebuilds a state by applying `trace` from the baseline. Throws like apply_mutator.
  static ProgramState from_trace(std::span<const Mutator> trace, int horizon = kDefaultHorizon);

  [[nodiscard]] const std::vector<Mutator>& trace() const noexcept { return trace_; }
  [[nodiscard]] const ProgramFeatures& features() const noexcept { return features_; }
  [[nodiscard]] int horizon() const noexcept { return horizon_; }
  [[nodiscard]] int depth() const noexcept { return static_cast<int>(trace_.size()); }
  [[nodiscard]] bool at_horizon() const noexcept { return depth() >= horizon_; }

  /// Canonical spellings of the trace.
  [[nodiscard]] std::vector<std::string> trace_strings() const;

  friend bool operator==(const ProgramState&, const ProgramState&) = default;

 private:
  friend ProgramState apply_mutator(const ProgramState& state, const Mutator& m);

  std::vector<Mutator> trace_;
  ProgramFeatures features_;
  int horizon_;
};

/// Recomputes features from scratch by folding the trace.
ProgramFeatures replay_features(std::span<const Mutator> trace);

/// True iff `m` is applicable at `state` (ignoring the horizon).
bool is_applicable(const ProgramFeatures& features, const Mutator& m);

/// All mutators applicable at `state`, in canonical order. Empty at the horizon.
std::vector<Mutator> valid_mutators(const ProgramState& state);

/// Returns `state` with `m` appended. Throws HorizonExceeded or InvalidMutator.
ProgramState apply_mutator(const ProgramState& state, const Mutator& m);

/// Joins canonical spellings with ", " inside brackets: "[Tile(8), Vectorize]".
std::string format_trace(std::span<const Mutator> trace);

}  // namespace colt
