#include "colt/model.hpp"

#include <algorithm>
#include <set>

#include "colt/error.hpp"

namespace colt {

ModelSet::ModelSet(std::vector<ModelDescriptor> models) : models_(std::move(models)) {
  std::set<std::string_view> seen;
  for (const auto& m : models_) {
    if (m.id.empty()) throw ConfigError("model id must be nonempty");
    if (!(m.parameter_count > 0.0)) {
      throw ConfigError("model " + m.id + ": parameter_count must be positive");
    }
    if (!seen.insert(m.id).second) throw ConfigError("duplicate model id " + m.id);
  }
  if (!models_.empty()) {
    const auto [lo, hi] = std::minmax_element(
        models_.begin(), models_.end(),
        [](const auto& a, const auto& b) { return a.parameter_count < b.parameter_count; });
    min_params_ = lo->parameter_count;
    max_params_ = hi->parameter_count;
  }
}

bool ModelSet::contains(std::string_view id) const noexcept {
  return std::any_of(models_.begin(), models_.end(), [&](const auto& m) { return m.id == id; });
}

const ModelDescriptor& ModelSet::get(std::string_view id) const {
  for (const auto& m : models_) {
    if (m.id == id) return m;
  }
  throw UnknownModel("unknown model id '" + std::string{id} + "'");
}

bool ModelSet::is_largest(std::string_view id) const {
  return get(id).parameter_count == max_params_;
}

const ModelDescriptor& ModelSet::largest() const {
  if (models_.empty()) throw UnknownModel("empty model set");
  for (const auto& m : models_) {
    if (m.parameter_count == max_params_) return m;
  }
  return models_.front();
}

const ModelDescriptor& ModelSet::smallest() const {
  if (models_.empty()) throw UnknownModel("empty model set");
  for (const auto& m : models_) {
    if (m.parameter_count == min_params_) return m;
  }
  return models_.front();
}

}  // namespace colt
