#include "colt/report.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "colt/error.hpp"

namespace colt {

double compute_sample_efficiency(double best_speedup, std::uint64_t samples) {
  if (samples == 0) throw ZeroSamples("sample efficiency needs at least one sample");
  return best_speedup / static_cast<double>(samples);
}

InvocationRates compute_invocation_rates(const StatsTable& stats, const ModelSet& models) {
  const auto get = [&](const ModelId& id) {
    const auto it = stats.find(id);
    return it == stats.end() ? ModelStats{} : it->second;
  };
  std::int64_t total = 0;
  std::int64_t small_calls = 0;
  for (const auto& m : models.models()) {
    const auto calls = static_cast<std::int64_t>(get(m.id).calls);
    total += calls;
    if (!models.is_largest(m.id)) small_calls += calls;
  }
  if (total == 0) throw ZeroCalls("invocation rates need at least one regular call");

  InvocationRates out;
  for (const auto& m : models.models()) {
    out.regular_percent.emplace_back(
        m.id, Rational{static_cast<std::int64_t>(get(m.id).calls) * 100, total});
  }
  out.largest = models.largest().id;
  const ModelStats big = get(out.largest);
  const auto alterations = static_cast<std::int64_t>(big.course_alterations);
  out.largest_total_percent =
      Rational{(static_cast<std::int64_t>(big.calls) + alterations) * 100, total + alterations};
  if (small_calls > 0) out.course_alteration_percent = Rational{alterations * 100, small_calls};
  return out;
}

StatsTable stats_from_samples(std::span<const SampleRecord> samples, const ModelSet& models) {
  StatsTable table;
  for (const auto& m : models.models()) table[m.id] = ModelStats{};
  for (const auto& s : samples) {
    switch (s.kind) {
      case SampleKind::Regular:
        record_outcome(table[s.acting_model], s.improved, s.errors);
        break;
      case SampleKind::Alteration:
        record_alteration(table[s.acting_model], s.errors);
        break;
      case SampleKind::Terminal:
        break;
    }
  }
  return table;
}

RunReport report_from_samples(std::span<const SampleRecord> samples, const ModelSet& models) {
  RunReport report;
  report.samples = samples.size();
  report.stats = stats_from_samples(samples, models);
  for (const auto& s : samples) {
    report.best_speedup = std::max(report.best_speedup, s.best_so_far);
    report.curve.push_back(s.best_so_far);
    if (s.kind == SampleKind::Alteration) ++report.alterations;
  }
  if (report.samples > 0) {
    report.sample_efficiency = compute_sample_efficiency(report.best_speedup, report.samples);
  }
  try {
    report.rates = compute_invocation_rates(report.stats, models);
  } catch (const ZeroCalls&) {
    report.rates.reset();
  }
  return report;
}

std::string format_percent(const Rational& percent) {
  return fmt::format("{:.1f}", to_double(percent));
}

}  // namespace colt
