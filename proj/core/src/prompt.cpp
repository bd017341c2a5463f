#include "colt/prompt.hpp"

#include <fmt/format.h>

#include <cmath>

namespace colt {

namespace {

constexpr int kExtent = 1024;

std::string json_string_list(const std::vector<std::string>& items, std::string_view indent) {
  if (items.empty()) return "[]";
  std::string out = "[\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += fmt::format("{}  \"{}\"{}\n", indent, items[i], i + 1 == items.size() ? "" : ",");
  }
  out += fmt::format("{}]", indent);
  return out;
}

std::string format_score(double score) { return fmt::format("{:.6g}", score); }

void append_summary(std::string& out, std::string_view title, const std::optional<ProgramSummary>& s) {
  out += fmt::format("{}\n", title);
  if (!s) {
    out += "N/A\n\n";
    return;
  }
  if (s->rendering) out += fmt::format("Code:\n```python\n{}```\n", *s->rendering);
  out += fmt::format("Transformation history:\n{}\n", json_string_list(s->trace, ""));
  out += fmt::format("Predicted score: {}\n\n", format_score(s->predicted_score));
}

}  // namespace

std::string format_params(double parameter_count) {
  return fmt::format("{:.1f}B", parameter_count / 1e9);
}

std::string format_hit_rate(const ModelStats& stats) {
  const auto rate = stats.hit_rate();
  if (!rate) return "n/a";
  return fmt::format("{:.3g}", *rate);
}

std::string build_prompt(const ProposerContext& ctx, const ModelSet& models) {
  std::string out;
  out +=
      "You are a scheduling assistant guiding a Monte Carlo Tree Search (MCTS) that looks for the "
      "fastest version of a tensor program, starting from an unoptimized kernel.\n\n"
      "The current program is the tree leaf being expanded. Its parent and grandparent are the two "
      "nodes directly above it in the tree.\n\n"
      "Every program comes with:\n"
      "- its code\n"
      "- the sequence of transformations that produced it\n"
      "- a predicted performance score (higher is faster)\n\n"
      "Below you will find:\n"
      "- Code of the current program\n"
      "- History for the current, parent and grandparent programs (transformation sequences, "
      "predicted scores)\n"
      "- The transformations that may be applied next\n"
      "- Search context: leaf depth and trials progress\n"
      "- Global per-model stats: parameter count, number of calls, hit_rate (fraction of calls "
      "where score(child) > score(parent)), and errors (+1 for each invalid transformation, +1 for "
      "each invalid next_model name)\n"
      "- Local model context: which model expanded the current, parent and grandparent nodes\n\n";

  const std::string largest = models.empty() ? std::string{"N/A"} : models.largest().id;
  out += "Task:\n";
  out +=
      "1. Compare code, transformation histories and predicted scores to work out which changes are "
      "likely to make the program faster.\n"
      "2. Propose a sequence of transformations taken from the available list. They are applied in "
      "order; a Tile transformation may be repeated to try another tile factor.\n"
      "3. Choose exactly one model from the global stats list to expand the resulting child.\n\n";
  out += "Model selection guidelines:\n";
  out += "- Prefer the smallest model that is likely to give the best result.\n";
  out += "- Models with limited prior usage are softly encouraged.\n";
  out += fmt::format(
      "- The largest model ({}) must receive at least {:.0f}% of total calls.\n", largest,
      kLargestModelMinShare * 100.0);
  out += "- Avoid models with high error counts.\n\n";
  out +=
      "Output a single valid JSON object in the EXACT format:\n"
      "{\n"
      "  \"transformations\": [\"Fullname1\", \"Fullname2\", \"...\"],\n"
      "  \"next_model\": \"...\"\n"
      "}\n\n";

  out += "## Historical Performance Info (Leaf, Parent, Grandparent)\n\n";
  append_summary(out, "### Current Program:", ctx.current);
  append_summary(out, "### Immediate Parent Program:", ctx.parent);
  append_summary(out, "### Grandparent Program:", ctx.grandparent);

  out += fmt::format("## Available Transformations\n{}\n\n",
                     json_string_list(ctx.available_mutators, ""));

  out += "## Search Context\n";
  out += fmt::format("Leaf depth: {}\n", ctx.leaf_depth);
  out += fmt::format("Trials progress: {} / {}\n\n", ctx.trials_done, ctx.trials_total);

  out += "## Global Per-Model Stats\n";
  for (const auto& line : ctx.global_stats) {
    out += fmt::format("Model {}: params={}, number_of_calls={}, hit_rate={}, errors={}", line.id,
                       format_params(line.parameter_count), line.stats.calls,
                       format_hit_rate(line.stats), line.stats.errors);
    if (line.stats.course_alterations != 0) {
      out += fmt::format(", course_alteration={}", line.stats.course_alterations);
    }
    out += "\n";
  }
  out += "\n## Local Model Context\n";
  for (const auto& entry : ctx.local_models) {
    out += fmt::format("Model used to expand the {} node: {}", entry.role,
                       entry.expanded_by.value_or("N/A"));
    if (entry.score_delta) {
      out += fmt::format(" (predicted score change {:+.6g})", *entry.score_delta);
    }
    out += "\n";
  }
  return out;
}

std::string render_kernel(const ProgramState& state) {
  const auto& f = state.features();
  const int tile = f.tile_factor;
  const int outer = kExtent / tile;
  std::string out = "@T.prim_func\ndef main(A, B, C):\n";
  std::string indent = "    ";
  const std::string target = f.cached_write ? "C_global" : "C";
  if (f.cached_write) {
    out += fmt::format("{}C_global = T.alloc_buffer(({}, {}))\n", indent, kExtent, kExtent);
  }
  if (tile > 1) {
    if (f.parallelized) {
      out += fmt::format("{}for i_0 in T.parallel({}):\n", indent, outer);
      indent += "    ";
      out += fmt::format("{}for j_0 in T.serial({}):\n", indent, outer);
    } else {
      out += fmt::format("{}for i_0, j_0 in T.grid({}, {}):\n", indent, outer, outer);
    }
    indent += "    ";
    out += fmt::format("{}for k in T.{}({}):\n", indent, f.unrolled ? "unroll" : "serial", kExtent);
    indent += "    ";
    out += fmt::format("{}for i_1 in T.serial({}):\n", indent, tile);
    indent += "    ";
    out += fmt::format("{}for j_1 in T.{}({}):\n", indent, f.vectorized ? "vectorized" : "serial",
                       tile);
  } else {
    out += fmt::format("{}for i in T.{}({}):\n", indent, f.parallelized ? "parallel" : "serial",
                       kExtent);
    indent += "    ";
    out += fmt::format("{}for k in T.{}({}):\n", indent, f.unrolled ? "unroll" : "serial", kExtent);
    indent += "    ";
    out += fmt::format("{}for j in T.{}({}):\n", indent, f.vectorized ? "vectorized" : "serial",
                       kExtent);
  }
  indent += "    ";
  out += fmt::format("{}with T.block(\"matmul_update\"):\n", indent);
  out += fmt::format("{}    {}[i, j] = {}[i, j] + A[i, k] * B[k, j]\n", indent, target, target);
  if (f.cached_write) {
    out += fmt::format("    for ax0, ax1 in T.grid({}, {}):\n", kExtent, kExtent);
    out += "        C[ax0, ax1] = C_global[ax0, ax1]\n";
  }
  return out;
}

}  // namespace colt
