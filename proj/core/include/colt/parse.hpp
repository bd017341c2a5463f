#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "colt/model.hpp"
#include "colt/program.hpp"
#include "colt/proposer.hpp"
#include "colt/rng.hpp"

namespace colt {

/// Returns the first balanced {...} block in `text` that parses as a JSON object,
/// tolerating surrounding prose, code fences and trailing commas. The result is
/// normalized JSON text.
std::optional<std::string> extract_json_object(std::string_view text);

/// Validates a raw answer against the program state and model set.
///
/// Transformations are applied in order; the list is cut at the first unknown or
/// inapplicable entry (one error). An empty result is replaced by one random valid
/// mutator. An unknown next_model keeps `current_model` (one error). Text without
/// any JSON object counts as both errors. Requires a nonempty valid set at `state`.
JointProposal parse_proposal(std::string_view text, const ProgramState& state,
                             const ModelSet& models, const ModelId& current_model, Rng& rng);

/// Renders {"transformations": [...], "next_model": "..."}.
std::string render_answer(const std::vector<std::string>& transformations,
                          std::string_view next_model);

}  // namespace colt
