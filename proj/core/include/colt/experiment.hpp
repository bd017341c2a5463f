#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "colt/config.hpp"
#include "colt/error.hpp"
#include "colt/oracle.hpp"
#include "colt/report.hpp"
#include "colt/search.hpp"

namespace colt {

/// Process exit codes of the colt tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitProposerUnavailable = 3,
  kExitIo = 4,
  kExitOracleBudget = 5,
};

/// Thrown for filesystem failures while writing outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

struct ExperimentOutcome {
  SearchResult result;
  RunReport report;
};

/// Runs one search and writes samples.log, report.json and table.txt into `out_dir`.
/// Outputs are written even when the run ends early; check result.complete.
ExperimentOutcome run_experiment(const RunConfig& config, const std::filesystem::path& out_dir,
                                 SleepFn sleep = {});

/// Structured report with exact rationals alongside rounded percentages.
std::string render_report_json(const RunReport& report, const Metadata& metadata,
                               const ModelSet& models, bool complete, const std::string& failure);

/// Plain-text invocation table.
std::string render_table(const RunReport& report, const Metadata& metadata, const ModelSet& models);

struct SeedRow {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string failure;
  RunReport report;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for fewer than two values
};

Summary summarize(const std::vector<double>& values);

struct SweepAggregate {
  std::vector<SeedRow> rows;
  Summary best_speedup;
  Summary sample_efficiency;
  std::vector<std::pair<ModelId, Summary>> invocation_percent;
  std::vector<std::uint64_t> curve_index;  // 10, 20, ...
  std::vector<double> curve_mean;
};

/// Best-so-far value after `count` samples; a shorter curve holds its last value.
double curve_at(const std::vector<double>& curve, std::uint64_t count);

inline constexpr std::uint64_t kCurveStride = 10;

/// Aggregates finished per-seed rows (failed rows are excluded from statistics).
SweepAggregate aggregate_rows(std::vector<SeedRow> rows, const ModelSet& models);

/// Runs the experiment once per seed into out_dir/seed_<n>/ and writes
/// sweep_aggregate.json and sweep_curve.tsv. Throws the last failure if every seed failed.
SweepAggregate run_sweep(const RunConfig& config, const std::vector<std::uint64_t>& seeds,
                         const std::filesystem::path& out_dir, SleepFn sleep = {});

std::string render_sweep_json(const SweepAggregate& aggregate, const Metadata& metadata);

/// Human-readable oracle summary for the CLI.
std::string render_oracle(const BruteForceResult& result, int horizon);

}  // namespace colt
