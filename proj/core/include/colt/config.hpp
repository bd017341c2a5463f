#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "colt/environment.hpp"
#include "colt/policy.hpp"
#include "colt/proposer.hpp"
#include "colt/remote.hpp"
#include "colt/scripted.hpp"
#include "colt/search.hpp"

namespace colt {

struct ModelConfig {
  ModelDescriptor descriptor;
  std::variant<ScriptedProfile, RemoteEndpoint> backend;
};

/// Everything a run needs. Loaded from a JSON document whose key set is closed:
///
///   {
///     "environment": {"base_cost": 1000.0, "horizon": 8},
///     "search": {"trials": 300, "rollout_depth": 4, "seed": 0,
///                "root_model": "<id>", "course_alteration_enabled": true},
///     "policy": {"lambda": 0.5, "c": 1.4142135623730951, "epsilon": 1e-9, "branching": 2},
///     "models": [
///       {"id": "small", "parameter_count": 2e10,
///        "backend": {"type": "scripted", "greedy_prob": 0.4, "error_rate": 0.1, "self_bias": 0.5}},
///       {"id": "large", "parameter_count": 3e11,
///        "backend": {"type": "remote", "endpoint": "http://host:8000/v1/chat/completions",
///                    "model_name": "large", "response_pointer": "/choices/0/message/content",
///                    "timeout_s": 120}}
///     ],
///     "output": {"directory": "colt-out"}
///   }
///
/// Every section and key except "models" is optional and falls back to the defaults
/// shown. Unknown keys are rejected.
struct RunConfig {
  double base_cost = SynthKernel::kDefaultBaseCost;
  int horizon = kDefaultHorizon;

  std::uint64_t trials = 300;
  int rollout_depth = 4;
  std::uint64_t seed = 0;
  std::optional<ModelId> root_model;
  bool course_alteration_enabled = true;

  PolicyParams policy;
  std::vector<ModelConfig> models;
  std::filesystem::path output_dir = "colt-out";

  [[nodiscard]] ModelSet model_set() const;
  [[nodiscard]] SearchConfig search_config() const;
  [[nodiscard]] SynthKernel environment() const;
  [[nodiscard]] bool uses_remote() const;

  /// Throws ConfigError.
  void validate() const;
};

/// Throws ConfigError with the offending key path.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Builds one proposer per model. Remote backends read COLT_API_TOKEN here, so a
/// missing token is a ConfigError raised before any search work.
ProposerRegistry make_proposers(const RunConfig& config, SleepFn sleep = {});

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Flattened, ordered run metadata: environment version, every config value and
/// the default hyperparameters.
Metadata run_metadata(const RunConfig& config);

}  // namespace colt
