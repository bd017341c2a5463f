#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "colt/environment.hpp"
#include "colt/model.hpp"
#include "colt/model_stats.hpp"
#include "colt/search.hpp"

namespace colt {

/// Best speedup per evaluated sample. Throws ZeroSamples.
double compute_sample_efficiency(double best_speedup, std::uint64_t samples);

/// Invocation shares in percent, kept exact.
struct InvocationRates {
  std::vector<std::pair<ModelId, Rational>> regular_percent;  // model-set order
  ModelId largest;
  Rational largest_total_percent;  // regular calls plus course alterations
  std::optional<Rational> course_alteration_percent;  // nullopt without small-model calls
};

/// Throws ZeroCalls when no regular call was made.
InvocationRates compute_invocation_rates(const StatsTable& stats, const ModelSet& models);

struct RunReport {
  double best_speedup = 1.0;
  std::uint64_t samples = 0;
  std::optional<double> sample_efficiency;  // nullopt for an empty run
  std::optional<InvocationRates> rates;     // nullopt when no model was called
  std::uint64_t alterations = 0;
  StatsTable stats;
  std::vector<double> curve;  // best-so-far speedup after each sample
};

/// Per-model counters recovered from a sample log.
StatsTable stats_from_samples(std::span<const SampleRecord> samples, const ModelSet& models);

/// The report is a fold over the sample log; nothing else feeds it.
RunReport report_from_samples(std::span<const SampleRecord> samples, const ModelSet& models);

/// One decimal place, as in the invocation-rate tables.
std::string format_percent(const Rational& percent);

}  // namespace colt
