#include "colt/experiment.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "colt/prompt.hpp"
#include "colt/sample_log.hpp"

namespace colt {

namespace {

using nlohmann::ordered_json;

namespace fs = std::filesystem;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out{path, std::ios::binary};
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

ordered_json rational_json(const Rational& r) {
  return ordered_json{{"numerator", r.numerator()},
                      {"denominator", r.denominator()},
                      {"percent", to_double(r)},
                      {"rounded", format_percent(r)}};
}

ordered_json metadata_json(const Metadata& metadata) {
  ordered_json md = ordered_json::object();
  for (const auto& [k, v] : metadata) md[k] = v;
  return md;
}

ordered_json summary_json(const Summary& s) { return {{"mean", s.mean}, {"stddev", s.stddev}}; }

}  // namespace

std::string render_report_json(const RunReport& report, const Metadata& metadata,
                               const ModelSet& models, bool complete, const std::string& failure) {
  ordered_json doc;
  doc["metadata"] = metadata_json(metadata);
  doc["complete"] = complete;
  if (!complete) doc["failure"] = failure;
  doc["best_speedup"] = report.best_speedup;
  doc["samples"] = report.samples;
  doc["sample_efficiency"] =
      report.sample_efficiency ? ordered_json(*report.sample_efficiency) : ordered_json(nullptr);
  doc["course_alterations"] = report.alterations;

  ordered_json per_model = ordered_json::array();
  for (const auto& m : models.models()) {
    const auto it = report.stats.find(m.id);
    const ModelStats s = it == report.stats.end() ? ModelStats{} : it->second;
    ordered_json row{{"id", m.id},
                     {"parameter_count", m.parameter_count},
                     {"largest", models.is_largest(m.id)},
                     {"calls", s.calls},
                     {"hits", s.hits},
                     {"hit_rate", s.hit_rate() ? ordered_json(*s.hit_rate()) : ordered_json(nullptr)},
                     {"errors", s.errors},
                     {"course_alterations", s.course_alterations}};
    if (report.rates) {
      for (const auto& [id, pct] : report.rates->regular_percent) {
        if (id == m.id) row["invocation_rate"] = rational_json(pct);
      }
    }
    per_model.push_back(std::move(row));
  }
  doc["models"] = std::move(per_model);

  if (report.rates) {
    doc["largest_model"] = report.rates->largest;
    doc["largest_total_rate"] = rational_json(report.rates->largest_total_percent);
    doc["course_alteration_rate"] = report.rates->course_alteration_percent
                                        ? rational_json(*report.rates->course_alteration_percent)
                                        : ordered_json(nullptr);
  } else {
    doc["largest_model"] = models.largest().id;
    doc["largest_total_rate"] = nullptr;
    doc["course_alteration_rate"] = nullptr;
  }
  doc["curve"] = report.curve;
  return doc.dump(2) + "\n";
}

std::string render_table(const RunReport& report, const Metadata& metadata, const ModelSet& models) {
  std::string out;
  for (const auto& [k, v] : metadata) out += fmt::format("# {}={}\n", k, v);
  out += "\nInvocation rates (%) excluding course alterations\n";
  out += fmt::format("{:<24} {:>10} {:>8} {:>8} {:>8} {:>8} {:>12}\n", "Model", "Params", "Calls",
                     "Rate", "HitRate", "Errors", "Alterations");
  for (const auto& m : models.models()) {
    const auto it = report.stats.find(m.id);
    const ModelStats s = it == report.stats.end() ? ModelStats{} : it->second;
    std::string rate = "n/a";
    if (report.rates) {
      for (const auto& [id, pct] : report.rates->regular_percent) {
        if (id == m.id) rate = format_percent(pct);
      }
    }
    out += fmt::format("{:<24} {:>10} {:>8} {:>8} {:>8} {:>8} {:>12}\n", m.id,
                       format_params(m.parameter_count), s.calls, rate, format_hit_rate(s),
                       s.errors, s.course_alterations);
  }
  out += "\n";
  if (report.rates) {
    out += fmt::format("Largest model {} incl. course alterations: {}%\n", report.rates->largest,
                       format_percent(report.rates->largest_total_percent));
    out += fmt::format("Course alteration rate (of small-model calls): {}\n",
                       report.rates->course_alteration_percent
                           ? format_percent(*report.rates->course_alteration_percent) + "%"
                           : std::string{"n/a"});
  }
  out += fmt::format("Best speedup: {:.4f}x\n", report.best_speedup);
  out += fmt::format("Samples: {}\n", report.samples);
  out += fmt::format("Sample efficiency: {}\n",
                     report.sample_efficiency ? fmt::format("{:.6f}", *report.sample_efficiency)
                                              : std::string{"n/a"});
  return out;
}

ExperimentOutcome run_experiment(const RunConfig& config, const fs::path& out_dir, SleepFn sleep) {
  config.validate();
  ProposerRegistry proposers = make_proposers(config, std::move(sleep));
  const SynthKernel env = config.environment();
  const SearchConfig search = config.search_config();
  const Metadata metadata = run_metadata(config);

  ensure_dir(out_dir);
  std::ostringstream log;
  write_sample_log_header(log, metadata);
  SearchResult result =
      run_search(env, proposers, search, [&](const SampleRecord& r) { write_sample_row(log, r); });

  RunReport report = report_from_samples(result.samples, search.models);
  write_file(out_dir / "samples.log", log.str());
  write_file(out_dir / "report.json",
             render_report_json(report, metadata, search.models, result.complete, result.failure));
  write_file(out_dir / "table.txt", render_table(report, metadata, search.models));
  return {std::move(result), std::move(report)};
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

double curve_at(const std::vector<double>& curve, std::uint64_t count) {
  if (curve.empty() || count == 0) return 1.0;
  const std::size_t i = static_cast<std::size_t>(std::min<std::uint64_t>(count, curve.size())) - 1;
  return curve[i];
}

SweepAggregate aggregate_rows(std::vector<SeedRow> rows, const ModelSet& models) {
  SweepAggregate agg;
  agg.rows = std::move(rows);
  std::vector<double> best;
  std::vector<double> efficiency;
  std::size_t longest = 0;
  for (const auto& row : agg.rows) {
    if (!row.ok) continue;
    best.push_back(row.report.best_speedup);
    if (row.report.sample_efficiency) efficiency.push_back(*row.report.sample_efficiency);
    longest = std::max(longest, row.report.curve.size());
  }
  agg.best_speedup = summarize(best);
  agg.sample_efficiency = summarize(efficiency);

  for (const auto& m : models.models()) {
    std::vector<double> pct;
    for (const auto& row : agg.rows) {
      if (!row.ok || !row.report.rates) continue;
      for (const auto& [id, r] : row.report.rates->regular_percent) {
        if (id == m.id) pct.push_back(to_double(r));
      }
    }
    agg.invocation_percent.emplace_back(m.id, summarize(pct));
  }

  for (std::uint64_t k = kCurveStride; k <= longest; k += kCurveStride) {
    std::vector<double> at;
    for (const auto& row : agg.rows) {
      if (row.ok) at.push_back(curve_at(row.report.curve, k));
    }
    agg.curve_index.push_back(k);
    agg.curve_mean.push_back(summarize(at).mean);
  }
  return agg;
}

std::string render_sweep_json(const SweepAggregate& agg, const Metadata& metadata) {
  ordered_json doc;
  doc["metadata"] = metadata_json(metadata);
  ordered_json rows = ordered_json::array();
  for (const auto& row : agg.rows) {
    ordered_json r{{"seed", row.seed}, {"ok", row.ok}};
    if (!row.ok) {
      r["failure"] = row.failure;
    } else {
      r["best_speedup"] = row.report.best_speedup;
      r["samples"] = row.report.samples;
      r["sample_efficiency"] = row.report.sample_efficiency
                                   ? ordered_json(*row.report.sample_efficiency)
                                   : ordered_json(nullptr);
      r["course_alterations"] = row.report.alterations;
      ordered_json rates = ordered_json::object();
      if (row.report.rates) {
        for (const auto& [id, pct] : row.report.rates->regular_percent) rates[id] = to_double(pct);
      }
      r["invocation_percent"] = std::move(rates);
    }
    rows.push_back(std::move(r));
  }
  doc["per_seed"] = std::move(rows);
  ordered_json mean;
  mean["best_speedup"] = summary_json(agg.best_speedup);
  mean["sample_efficiency"] = summary_json(agg.sample_efficiency);
  ordered_json inv = ordered_json::object();
  for (const auto& [id, s] : agg.invocation_percent) inv[id] = summary_json(s);
  mean["invocation_percent"] = std::move(inv);
  doc["aggregate"] = std::move(mean);
  doc["curve"] = {{"sample", agg.curve_index}, {"mean_best_speedup", agg.curve_mean}};
  return doc.dump(2) + "\n";
}

SweepAggregate run_sweep(const RunConfig& config, const std::vector<std::uint64_t>& seeds,
                         const fs::path& out_dir, SleepFn sleep) {
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  config.validate();
  std::vector<SeedRow> rows;
  std::optional<std::string> last_failure;
  int last_code = kExitInternal;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    RunConfig per_seed = config;
    per_seed.seed = seeds[i];
    SeedRow row;
    row.seed = seeds[i];
    try {
      ExperimentOutcome outcome =
          run_experiment(per_seed, out_dir / fmt::format("run_{}_seed_{}", i, seeds[i]), sleep);
      row.ok = outcome.result.complete;
      row.failure = outcome.result.failure;
      row.report = std::move(outcome.report);
      if (!row.ok) {
        last_failure = row.failure;
        last_code = kExitProposerUnavailable;
      }
    } catch (const Error& e) {
      row.ok = false;
      row.failure = e.what();
      last_failure = row.failure;
    }
    rows.push_back(std::move(row));
  }
  SweepAggregate agg = aggregate_rows(std::move(rows), config.model_set());
  const bool any_ok = std::any_of(agg.rows.begin(), agg.rows.end(), [](const auto& r) { return r.ok; });

  ensure_dir(out_dir);
  Metadata metadata = run_metadata(config);
  std::string seed_list;
  for (std::size_t i = 0; i < seeds.size(); ++i) seed_list += (i ? "," : "") + std::to_string(seeds[i]);
  metadata.emplace_back("sweep.seeds", seed_list);
  write_file(out_dir / "sweep_aggregate.json", render_sweep_json(agg, metadata));
  std::string curve = "sample\tmean_best_speedup\n";
  for (std::size_t i = 0; i < agg.curve_index.size(); ++i) {
    curve += fmt::format("{}\t{}\n", agg.curve_index[i], agg.curve_mean[i]);
  }
  write_file(out_dir / "sweep_curve.tsv", curve);

  if (!any_ok) {
    if (last_code == kExitProposerUnavailable) throw ProposerUnavailable(*last_failure);
    throw Error("every seed failed; last failure: " + last_failure.value_or("unknown"));
  }
  return agg;
}

std::string render_oracle(const BruteForceResult& result, int horizon) {
  std::string out;
  out += fmt::format("environment: {}\n", SynthKernel::kName);
  out += fmt::format("horizon: {}\n", horizon);
  out += fmt::format("best_trace: {}\n", format_trace(result.best_trace));
  out += fmt::format("best_speedup: {} ({}/{})\n", to_double(result.best_speedup),
                     result.best_speedup.numerator(), result.best_speedup.denominator());
  out += fmt::format("states_enumerated: {}\n", result.states_enumerated);
  return out;
}

}  // namespace colt
