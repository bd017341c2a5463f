#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "colt/environment.hpp"
#include "colt/model.hpp"
#include "colt/model_stats.hpp"
#include "colt/program.hpp"
#include "colt/rng.hpp"

namespace colt {

/// What a proposer sees about one program on the search path.
struct ProgramSummary {
  std::vector<std::string> trace;
  double predicted_score = 0.0;
  std::optional<std::string> rendering;
};

struct ModelStatLine {
  ModelId id;
  double parameter_count = 0.0;
  ModelStats stats;
};

/// Which model created a node on the local path, and how much that edge moved the score.
struct LocalModelEntry {
  std::string role;  // "current", "parent" or "grandparent"
  std::optional<ModelId> expanded_by;
  std::optional<double> score_delta;
};

/// Everything rendered into a proposal prompt.
struct ProposerContext {
  ProgramSummary current;
  std::optional<ProgramSummary> parent;
  std::optional<ProgramSummary> grandparent;
  std::vector<std::string> available_mutators;
  int leaf_depth = 0;
  std::uint64_t trials_done = 0;
  std::uint64_t trials_total = 0;
  std::vector<ModelStatLine> global_stats;
  std::vector<LocalModelEntry> local_models;
};

struct ValidationNote {
  std::string issue;
  std::string correction;
  bool counts_as_error = true;
};

/// A validated joint action together with how it was obtained.
struct JointProposal {
  std::vector<Mutator> mutators;
  ModelId next_model;
  std::string raw_response;
  std::vector<ValidationNote> validation_notes;

  [[nodiscard]] int errors() const;
  [[nodiscard]] JointAction action() const { return {mutators, next_model}; }
};

/// Inputs handed to a proposer for one invocation.
struct ProposalRequest {
  const ModelDescriptor& model;
  const ProposerContext& context;
  const ProgramState& state;
  const Environment& env;
  const ModelSet& models;
  const std::string& prompt;  // empty unless the proposer asked for one
};

/// A source of raw responses for one model. Stochastic implementations must
/// draw only from the supplied stream.
class Proposer {
 public:
  virtual ~Proposer() = default;

  /// Raw response text in the JSON answer format. May throw ProposerUnavailable
  /// or UnparseableResponse.
  virtual std::string respond(const ProposalRequest& request, Rng& rng) = 0;

  /// Whether respond() reads the rendered prompt.
  [[nodiscard]] virtual bool uses_prompt() const { return false; }
};

/// Proposers keyed by model id.
class ProposerRegistry {
 public:
  void add(ModelId id, std::unique_ptr<Proposer> proposer);
  [[nodiscard]] bool covers(const ModelSet& models) const;
  /// Throws UnknownModel.
  Proposer& at(const ModelId& id);

 private:
  std::map<ModelId, std::unique_ptr<Proposer>> proposers_;
};

/// Queries `proposer` as `model` and validates the answer. Never fails on a bad
/// answer; only ProposerUnavailable escapes.
JointProposal propose(Proposer& proposer, const ModelDescriptor& model, const ProposerContext& ctx,
                      const ProgramState& state, const Environment& env, const ModelSet& models,
                      Rng& rng);

}  // namespace colt
