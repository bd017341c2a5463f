#include "colt/proposer.hpp"

#include <algorithm>

#include "colt/error.hpp"
#include "colt/parse.hpp"
#include "colt/prompt.hpp"

namespace colt {

int JointProposal::errors() const {
  return static_cast<int>(std::count_if(validation_notes.begin(), validation_notes.end(),
                                        [](const auto& n) { return n.counts_as_error; }));
}

void ProposerRegistry::add(ModelId id, std::unique_ptr<Proposer> proposer) {
  proposers_[std::move(id)] = std::move(proposer);
}

bool ProposerRegistry::covers(const ModelSet& models) const {
  return std::all_of(models.models().begin(), models.models().end(),
                     [&](const auto& m) { return proposers_.contains(m.id); });
}

Proposer& ProposerRegistry::at(const ModelId& id) {
  auto it = proposers_.find(id);
  if (it == proposers_.end() || !it->second) {
    throw UnknownModel("no proposer registered for model '" + id + "'");
  }
  return *it->second;
}

JointProposal propose(Proposer& proposer, const ModelDescriptor& model, const ProposerContext& ctx,
                      const ProgramState& state, const Environment& env, const ModelSet& models,
                      Rng& rng) {
  std::string prompt;
  if (proposer.uses_prompt()) prompt = build_prompt(ctx, models);
  const ProposalRequest request{model, ctx, state, env, models, prompt};
  std::string raw;
  try {
    raw = proposer.respond(request, rng);
  } catch (const UnparseableResponse&) {
    raw.clear();
  }
  return parse_proposal(raw, state, models, model.id, rng);
}

}  // namespace colt
