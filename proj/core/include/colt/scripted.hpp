#pragma once

#include <optional>
#include <string>
#include <vector>

#include "colt/proposer.hpp"

namespace colt {

/// Behaviour of a simulated model.
struct ScriptedProfile {
  double greedy_prob = 1.0;  // chance of proposing the best one-step mutator
  double error_rate = 0.0;   // chance of naming an invalid transformation
  double self_bias = 0.0;    // chance of recommending the smallest model

  /// Throws ConfigError unless every field lies in [0, 1].
  void validate() const;
};

/// Raw answer of a scripted model at the requested state.
std::string scripted_propose(const ScriptedProfile& profile, const ProposalRequest& request, Rng& rng);

/// The valid mutator with the largest one-step speedup; ties go to the canonical order.
Mutator greedy_mutator(const ProgramState& state, const Environment& env);

class ScriptedProposer final : public Proposer {
 public:
  explicit ScriptedProposer(ScriptedProfile profile);

  std::string respond(const ProposalRequest& request, Rng& rng) override;
  [[nodiscard]] const ScriptedProfile& profile() const noexcept { return profile_; }

 private:
  ScriptedProfile profile_;
};

/// Always proposes the first applicable mutator from a fixed preference list, and a
/// fixed next model (or itself when none is given). Used to stage regressions.
class PriorityProposer final : public Proposer {
 public:
  PriorityProposer(std::vector<Mutator> preference, std::optional<ModelId> next_model = std::nullopt);

  std::string respond(const ProposalRequest& request, Rng& rng) override;

 private:
  std::vector<Mutator> preference_;
  std::optional<ModelId> next_model_;
};

/// Replays canned responses in order, then repeats the last one.
class CannedProposer final : public Proposer {
 public:
  explicit CannedProposer(std::vector<std::string> responses);

  std::string respond(const ProposalRequest& request, Rng& rng) override;
  [[nodiscard]] std::size_t calls() const noexcept { return next_; }

 private:
  std::vector<std::string> responses_;
  std::size_t next_ = 0;
};

}  // namespace colt
