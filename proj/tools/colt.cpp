#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "colt/error.hpp"
#include "colt/experiment.hpp"
#include "colt/oracle.hpp"

namespace {

int report_error(const std::exception& e, int code) {
  std::cerr << "colt: error: " << e.what() << '\n';
  return code;
}

// Maps library exceptions onto the documented exit codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const colt::ConfigError& e) {
    return report_error(e, colt::kExitConfig);
  } catch (const colt::ProposerUnavailable& e) {
    return report_error(e, colt::kExitProposerUnavailable);
  } catch (const colt::IoError& e) {
    return report_error(e, colt::kExitIo);
  } catch (const colt::OracleBudgetExceeded& e) {
    return report_error(e, colt::kExitOracleBudget);
  } catch (const std::exception& e) {
    return report_error(e, colt::kExitInternal);
  }
}

colt::RunConfig load(const std::string& path, std::optional<std::uint64_t> seed,
                     const std::string& out) {
  colt::RunConfig config = colt::load_run_config(path);
  if (seed) config.seed = *seed;
  if (!out.empty()) config.output_dir = out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"colt: collaborative multi-model tree search over a synthetic compiler environment"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int horizon = 4;
  std::vector<std::uint64_t> seeds;

  auto* run = app.add_subcommand("run", "Run one search and write samples.log, report.json, table.txt");
  run->add_option("--config", config_path, "Run configuration (JSON)")->required();
  run->add_option("--seed", seed, "Override search.seed");
  run->add_option("--out", out_dir, "Output directory (overrides output.directory)");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum of the synthetic environment");
  oracle->add_option("horizon,--horizon", horizon, "Maximum trace length (<= 8)");

  auto* sweep = app.add_subcommand("sweep", "Repeat a run over several seeds and aggregate");
  sweep->add_option("--config", config_path, "Run configuration (JSON)")->required();
  sweep->add_option("--seeds", seeds, "Comma-separated seeds")->required()->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory (overrides output.directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return colt::kExitConfig;
  }

  if (*run) {
    return guarded([&] {
      const colt::RunConfig config = load(config_path, seed, out_dir);
      const auto outcome = colt::run_experiment(config, config.output_dir);
      std::cout << colt::render_table(outcome.report, {}, config.model_set());
      std::cout << "outputs: " << config.output_dir.string() << '\n';
      if (!outcome.result.complete) {
        std::cerr << "colt: error: run incomplete: " << outcome.result.failure << '\n';
        return static_cast<int>(colt::kExitProposerUnavailable);
      }
      return static_cast<int>(colt::kExitOk);
    });
  }
  if (*oracle) {
    return guarded([&] {
      std::cout << colt::render_oracle(colt::brute_force_optimum(horizon), horizon);
      return static_cast<int>(colt::kExitOk);
    });
  }
  return guarded([&] {
    const colt::RunConfig config = load(config_path, std::nullopt, out_dir);
    const auto agg = colt::run_sweep(config, seeds, config.output_dir);
    std::size_t failed = 0;
    for (const auto& row : agg.rows) {
      std::cout << "seed " << row.seed << ": ";
      if (row.ok) {
        std::cout << "best_speedup=" << row.report.best_speedup << " samples=" << row.report.samples
                  << '\n';
      } else {
        ++failed;
        std::cout << "failed (" << row.failure << ")\n";
      }
    }
    std::cout << "mean best_speedup=" << agg.best_speedup.mean << " (sd " << agg.best_speedup.stddev
              << "), " << failed << " failed\n";
    std::cout << "outputs: " << config.output_dir.string() << '\n';
    return static_cast<int>(colt::kExitOk);
  });
}
