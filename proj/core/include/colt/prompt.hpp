#pragma once

#include <string>

#include "colt/model.hpp"
#include "colt/program.hpp"
#include "colt/proposer.hpp"

namespace colt {

/// Share of total calls the prompt asks to reserve for the largest model.
inline constexpr double kLargestModelMinShare = 0.10;

/// Renders the system prompt for one expansion.
std::string build_prompt(const ProposerContext& ctx, const ModelSet& models);

/// Pseudo-TIR listing of the matmul kernel after the schedule in `state`.
std::string render_kernel(const ProgramState& state);

/// "20.0B" style parameter count.
std::string format_params(double parameter_count);

/// Three significant digits, or "n/a" when there have been no calls.
std::string format_hit_rate(const ModelStats& stats);

}  // namespace colt
