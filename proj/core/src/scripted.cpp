#include "colt/scripted.hpp"

#include <algorithm>
#include <array>
#include <string_view>

#include "colt/error.hpp"
#include "colt/parse.hpp"

namespace colt {

namespace {

// Names a careless model might produce; none is canonical.
constexpr std::array<std::string_view, 4> kInvalidNames{"TileSize", "ComputeLocation", "Vectorise",
                                                        "Tile(32)"};

}  // namespace

void ScriptedProfile::validate() const {
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(greedy_prob) || !in_unit(error_rate) || !in_unit(self_bias)) {
    throw ConfigError("scripted profile probabilities must lie in [0, 1]");
  }
}

Mutator greedy_mutator(const ProgramState& state, const Environment& env) {
  const auto valid = valid_mutators(state);
  if (valid.empty()) throw HorizonExceeded("no valid mutators at horizon");
  const Mutator* best = &valid.front();
  double best_speedup = env.speedup(apply_mutator(state, valid.front()));
  for (std::size_t i = 1; i < valid.size(); ++i) {
    const double s = env.speedup(apply_mutator(state, valid[i]));
    if (s > best_speedup) {
      best_speedup = s;
      best = &valid[i];
    }
  }
  return *best;
}

std::string scripted_propose(const ScriptedProfile& profile, const ProposalRequest& request,
                             Rng& rng) {
  std::string transformation;
  if (rng.bernoulli(profile.error_rate)) {
    transformation = std::string{kInvalidNames[rng.index(kInvalidNames.size())]};
  } else if (rng.bernoulli(profile.greedy_prob)) {
    transformation = greedy_mutator(request.state, request.env).to_string();
  } else {
    const auto valid = valid_mutators(request.state);
    transformation = valid[rng.index(valid.size())].to_string();
  }

  const auto all = request.models.models();
  const ModelId next = rng.bernoulli(profile.self_bias) ? request.models.smallest().id
                                                        : all[rng.index(all.size())].id;
  return render_answer({transformation}, next);
}

ScriptedProposer::ScriptedProposer(ScriptedProfile profile) : profile_(profile) {
  profile_.validate();
}

std::string ScriptedProposer::respond(const ProposalRequest& request, Rng& rng) {
  return scripted_propose(profile_, request, rng);
}

PriorityProposer::PriorityProposer(std::vector<Mutator> preference, std::optional<ModelId> next_model)
    : preference_(std::move(preference)), next_model_(std::move(next_model)) {}

std::string PriorityProposer::respond(const ProposalRequest& request, Rng& /*rng*/) {
  std::string choice;
  for (const auto& m : preference_) {
    if (is_applicable(request.state.features(), m)) {
      choice = m.to_string();
      break;
    }
  }
  if (choice.empty()) choice = valid_mutators(request.state).front().to_string();
  return render_answer({choice}, next_model_.value_or(request.model.id));
}

CannedProposer::CannedProposer(std::vector<std::string> responses)
    : responses_(std::move(responses)) {
  if (responses_.empty()) throw ConfigError("CannedProposer needs at least one response");
}

std::string CannedProposer::respond(const ProposalRequest& /*request*/, Rng& /*rng*/) {
  const std::size_t i = std::min(next_, responses_.size() - 1);
  ++next_;
  return responses_[i];
}

}  // namespace colt
