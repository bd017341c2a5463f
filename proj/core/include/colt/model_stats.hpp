#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "colt/model.hpp"

namespace colt {

/// Per-model invocation counters.
struct ModelStats {
  std::uint64_t calls = 0;  // regular invocations; course alterations are counted separately
  std::uint64_t hits = 0;
  std::uint64_t errors = 0;
  std::uint64_t course_alterations = 0;

  /// hits / calls, or nullopt before the first call.
  [[nodiscard]] std::optional<double> hit_rate() const {
    if (calls == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(calls);
  }

  friend bool operator==(const ModelStats&, const ModelStats&) = default;
};

using StatsTable = std::map<ModelId, ModelStats>;

/// Accounts one regular invocation.
inline void record_outcome(ModelStats& stats, bool improved, int errors_incurred) {
  stats.calls += 1;
  stats.hits += improved ? 1 : 0;
  stats.errors += static_cast<std::uint64_t>(errors_incurred);
}

/// Accounts one course-alteration invocation; regular calls and hits are untouched.
inline void record_alteration(ModelStats& stats, int errors_incurred) {
  stats.course_alterations += 1;
  stats.errors += static_cast<std::uint64_t>(errors_incurred);
}

}  // namespace colt
