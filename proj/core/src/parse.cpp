#include "colt/parse.hpp"

#include "json.hpp"

namespace colt {

namespace {

using nlohmann::json;

// Index one past the brace closing the object that opens at `open`, or npos.
std::size_t match_object(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (ch == '\\') {
        escaped = true;
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') {
      in_string = true;
    } else if (ch == '{') {
      ++depth;
    } else if (ch == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

// Drops commas that directly precede a closing bracket, outside string literals.
std::string strip_trailing_commas(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      out += ch;
      if (escaped) {
        escaped = false;
      } else if (ch == '\\') {
        escaped = true;
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') in_string = true;
    if (ch == ',') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\n' || text[j] == '\r' ||
                                 text[j] == '\t')) {
        ++j;
      }
      if (j < text.size() && (text[j] == '}' || text[j] == ']')) continue;
    }
    out += ch;
  }
  return out;
}

Mutator random_valid(const ProgramState& state, Rng& rng) {
  const auto valid = valid_mutators(state);
  return valid[rng.index(valid.size())];
}

}  // namespace

std::optional<std::string> extract_json_object(std::string_view text) {
  for (std::size_t open = text.find('{'); open != std::string_view::npos;
       open = text.find('{', open + 1)) {
    const std::size_t close = match_object(text, open);
    if (close == std::string_view::npos) continue;
    const json parsed =
        json::parse(strip_trailing_commas(text.substr(open, close - open)), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed.dump();
  }
  return std::nullopt;
}

JointProposal parse_proposal(std::string_view text, const ProgramState& state,
                             const ModelSet& models, const ModelId& current_model, Rng& rng) {
  JointProposal out;
  out.raw_response = std::string{text};

  const auto object_text = extract_json_object(text);
  if (!object_text) {
    const Mutator fallback = random_valid(state, rng);
    out.mutators = {fallback};
    out.next_model = current_model;
    out.validation_notes.push_back(
        {"no JSON object in response", "substituted random valid " + fallback.to_string()});
    out.validation_notes.push_back({"no next_model in response", "kept " + current_model});
    return out;
  }
  const json answer = json::parse(*object_text);

  // Transformations, validated against the evolving program.
  std::optional<std::size_t> error_note;
  const auto it = answer.find("transformations");
  if (it == answer.end() || !it->is_array()) {
    error_note = out.validation_notes.size();
    out.validation_notes.push_back({"missing or non-array \"transformations\"", "none"});
  } else {
    ProgramState cursor = state;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& entry = (*it)[i];
      const std::string label = entry.is_string() ? entry.get<std::string>() : entry.dump();
      const auto mutator = entry.is_string() ? Mutator::parse(label) : std::nullopt;
      if (!mutator) {
        error_note = out.validation_notes.size();
        out.validation_notes.push_back({"unknown transformation \"" + label + "\" at index " +
                                            std::to_string(i),
                                        "truncated to " + std::to_string(i) + " entries"});
        break;
      }
      if (cursor.at_horizon()) {
        out.validation_notes.push_back({"horizon reached at index " + std::to_string(i),
                                        "truncated to " + std::to_string(i) + " entries", false});
        break;
      }
      if (!is_applicable(cursor.features(), *mutator)) {
        error_note = out.validation_notes.size();
        out.validation_notes.push_back({"inapplicable transformation \"" + label +
                                            "\" at index " + std::to_string(i),
                                        "truncated to " + std::to_string(i) + " entries"});
        break;
      }
      cursor = apply_mutator(cursor, *mutator);
      out.mutators.push_back(*mutator);
    }
  }
  if (out.mutators.empty()) {
    const Mutator fallback = random_valid(state, rng);
    out.mutators = {fallback};
    const std::string correction = "substituted random valid " + fallback.to_string();
    if (error_note) {
      out.validation_notes[*error_note].correction += "; " + correction;
    } else {
      out.validation_notes.push_back({"empty transformation list", correction});
    }
  }

  const auto model_it = answer.find("next_model");
  if (model_it != answer.end() && model_it->is_string() &&
      models.contains(model_it->get<std::string>())) {
    out.next_model = model_it->get<std::string>();
  } else {
    const std::string label = model_it == answer.end() ? std::string{"<missing>"}
                              : model_it->is_string()  ? model_it->get<std::string>()
                                                       : model_it->dump();
    out.validation_notes.push_back({"unknown next_model \"" + label + "\"", "kept " + current_model});
    out.next_model = current_model;
  }
  return out;
}

std::string render_answer(const std::vector<std::string>& transformations,
                          std::string_view next_model) {
  nlohmann::ordered_json answer;
  answer["transformations"] = transformations;
  answer["next_model"] = std::string{next_model};
  return answer.dump();
}

}  // namespace colt
