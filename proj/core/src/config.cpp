#include "colt/config.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "colt/error.hpp"

namespace colt {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + where + "." + key + "'");
    }
  }
}

template <typename T>
void read(const json& j, const std::string& where, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  const std::string path = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) throw ConfigError(path + " must be a boolean");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!it->is_string()) throw ConfigError(path + " must be a string");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) throw ConfigError(path + " must be a number");
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!it->is_number_unsigned()) throw ConfigError(path + " must be a nonnegative integer");
  } else {
    if (!it->is_number_integer()) throw ConfigError(path + " must be an integer");
  }
  out = it->get<T>();
}

ModelConfig parse_model(const json& j, std::size_t index) {
  const std::string where = "models[" + std::to_string(index) + "]";
  require_object(j, where);
  reject_unknown(j, where, {"id", "parameter_count", "backend"});
  if (!j.contains("id") || !j.contains("parameter_count") || !j.contains("backend")) {
    throw ConfigError(where + " needs id, parameter_count and backend");
  }
  ModelConfig out;
  read(j, where, "id", out.descriptor.id);
  read(j, where, "parameter_count", out.descriptor.parameter_count);

  const json& backend = j.at("backend");
  const std::string bwhere = where + ".backend";
  require_object(backend, bwhere);
  std::string type;
  read(backend, bwhere, "type", type);
  if (type == "scripted") {
    reject_unknown(backend, bwhere, {"type", "greedy_prob", "error_rate", "self_bias"});
    ScriptedProfile profile;
    read(backend, bwhere, "greedy_prob", profile.greedy_prob);
    read(backend, bwhere, "error_rate", profile.error_rate);
    read(backend, bwhere, "self_bias", profile.self_bias);
    out.backend = profile;
  } else if (type == "remote") {
    reject_unknown(backend, bwhere,
                   {"type", "endpoint", "model_name", "response_pointer", "timeout_s"});
    RemoteEndpoint endpoint;
    read(backend, bwhere, "endpoint", endpoint.url);
    read(backend, bwhere, "model_name", endpoint.model_name);
    read(backend, bwhere, "response_pointer", endpoint.response_pointer);
    std::int64_t timeout = endpoint.timeout.count();
    read(backend, bwhere, "timeout_s", timeout);
    if (timeout <= 0) throw ConfigError(bwhere + ".timeout_s must be positive");
    endpoint.timeout = std::chrono::seconds{timeout};
    if (endpoint.url.empty()) throw ConfigError(bwhere + ".endpoint is required");
    if (endpoint.model_name.empty()) endpoint.model_name = out.descriptor.id;
    out.backend = endpoint;
  } else {
    throw ConfigError(bwhere + ".type must be \"scripted\" or \"remote\"");
  }
  return out;
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

}  // namespace

ModelSet RunConfig::model_set() const {
  std::vector<ModelDescriptor> descriptors;
  descriptors.reserve(models.size());
  for (const auto& m : models) descriptors.push_back(m.descriptor);
  return ModelSet{std::move(descriptors)};
}

SearchConfig RunConfig::search_config() const {
  SearchConfig out;
  out.trials = trials;
  out.rollout_depth = rollout_depth;
  out.policy = policy;
  out.models = model_set();
  out.root_model = root_model;
  out.seed = seed;
  out.course_alteration_enabled = course_alteration_enabled;
  return out;
}

SynthKernel RunConfig::environment() const { return SynthKernel{base_cost, horizon}; }

bool RunConfig::uses_remote() const {
  return std::any_of(models.begin(), models.end(), [](const auto& m) {
    return std::holds_alternative<RemoteEndpoint>(m.backend);
  });
}

void RunConfig::validate() const {
  if (!(base_cost > 0.0)) throw ConfigError("environment.base_cost must be positive");
  if (horizon < 0) throw ConfigError("environment.horizon must be nonnegative");
  if (models.empty()) throw ConfigError("models must list at least one model");
  for (const auto& m : models) {
    if (const auto* profile = std::get_if<ScriptedProfile>(&m.backend)) profile->validate();
    if (const auto* endpoint = std::get_if<RemoteEndpoint>(&m.backend)) parse_url(endpoint->url);
  }
  search_config().validate();
}

RunConfig parse_run_config(std::string_view json_text) {
  const json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("configuration is not valid JSON");
  require_object(doc, "config");
  reject_unknown(doc, "config", {"environment", "search", "policy", "models", "output"});

  RunConfig cfg;
  if (const auto it = doc.find("environment"); it != doc.end()) {
    require_object(*it, "environment");
    reject_unknown(*it, "environment", {"base_cost", "horizon"});
    read(*it, "environment", "base_cost", cfg.base_cost);
    read(*it, "environment", "horizon", cfg.horizon);
  }
  if (const auto it = doc.find("search"); it != doc.end()) {
    require_object(*it, "search");
    reject_unknown(*it, "search",
                   {"trials", "rollout_depth", "seed", "root_model", "course_alteration_enabled"});
    read(*it, "search", "trials", cfg.trials);
    read(*it, "search", "rollout_depth", cfg.rollout_depth);
    read(*it, "search", "seed", cfg.seed);
    if (it->contains("root_model")) {
      std::string root;
      read(*it, "search", "root_model", root);
      cfg.root_model = root;
    }
    read(*it, "search", "course_alteration_enabled", cfg.course_alteration_enabled);
  }
  if (const auto it = doc.find("policy"); it != doc.end()) {
    require_object(*it, "policy");
    reject_unknown(*it, "policy", {"lambda", "c", "epsilon", "branching"});
    read(*it, "policy", "lambda", cfg.policy.lambda);
    read(*it, "policy", "c", cfg.policy.c);
    read(*it, "policy", "epsilon", cfg.policy.epsilon);
    read(*it, "policy", "branching", cfg.policy.branching);
  }
  const auto models = doc.find("models");
  if (models == doc.end() || !models->is_array()) throw ConfigError("models must be an array");
  for (std::size_t i = 0; i < models->size(); ++i) cfg.models.push_back(parse_model((*models)[i], i));
  if (const auto it = doc.find("output"); it != doc.end()) {
    require_object(*it, "output");
    reject_unknown(*it, "output", {"directory"});
    std::string dir = cfg.output_dir.string();
    read(*it, "output", "directory", dir);
    cfg.output_dir = dir;
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in{path};
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

ProposerRegistry make_proposers(const RunConfig& config, SleepFn sleep) {
  ProposerRegistry registry;
  std::optional<std::string> token;
  for (const auto& m : config.models) {
    if (const auto* profile = std::get_if<ScriptedProfile>(&m.backend)) {
      registry.add(m.descriptor.id, std::make_unique<ScriptedProposer>(*profile));
    } else {
      if (!token) token = api_token_from_env();
      registry.add(m.descriptor.id,
                   std::make_unique<RemoteProposer>(
                       RemoteClient{std::get<RemoteEndpoint>(m.backend), *token, sleep}));
    }
  }
  return registry;
}

Metadata run_metadata(const RunConfig& config) {
  const PolicyParams defaults;
  Metadata md;
  md.emplace_back("environment", std::string{SynthKernel::kName});
  md.emplace_back("environment.base_cost", fmt_double(config.base_cost));
  md.emplace_back("environment.horizon", std::to_string(config.horizon));
  md.emplace_back("search.trials", std::to_string(config.trials));
  md.emplace_back("search.rollout_depth", std::to_string(config.rollout_depth));
  md.emplace_back("search.seed", std::to_string(config.seed));
  md.emplace_back("search.root_model", config.search_config().resolved_root_model());
  md.emplace_back("search.course_alteration_enabled",
                  config.course_alteration_enabled ? "true" : "false");
  md.emplace_back("policy.lambda", fmt_double(config.policy.lambda));
  md.emplace_back("policy.c", fmt_double(config.policy.c));
  md.emplace_back("policy.epsilon", fmt_double(config.policy.epsilon));
  md.emplace_back("policy.branching", std::to_string(config.policy.branching));
  for (std::size_t i = 0; i < config.models.size(); ++i) {
    const auto& m = config.models[i];
    const std::string prefix = "models[" + std::to_string(i) + "]";
    md.emplace_back(prefix + ".id", m.descriptor.id);
    md.emplace_back(prefix + ".parameter_count", fmt_double(m.descriptor.parameter_count));
    if (const auto* p = std::get_if<ScriptedProfile>(&m.backend)) {
      md.emplace_back(prefix + ".backend", "scripted");
      md.emplace_back(prefix + ".greedy_prob", fmt_double(p->greedy_prob));
      md.emplace_back(prefix + ".error_rate", fmt_double(p->error_rate));
      md.emplace_back(prefix + ".self_bias", fmt_double(p->self_bias));
    } else {
      const auto& e = std::get<RemoteEndpoint>(m.backend);
      md.emplace_back(prefix + ".backend", "remote");
      md.emplace_back(prefix + ".endpoint", e.url);
      md.emplace_back(prefix + ".model_name", e.model_name);
      md.emplace_back(prefix + ".response_pointer", e.response_pointer);
      md.emplace_back(prefix + ".timeout_s", std::to_string(e.timeout.count()));
    }
  }
  md.emplace_back("defaults.lambda", fmt_double(defaults.lambda));
  md.emplace_back("defaults.c", fmt_double(defaults.c));
  md.emplace_back("defaults.epsilon", fmt_double(defaults.epsilon));
  md.emplace_back("defaults.branching", std::to_string(defaults.branching));
  return md;
}

}  // namespace colt
