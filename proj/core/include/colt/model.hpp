#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colt/mutator.hpp"

namespace colt {

using ModelId = std::string;

struct ModelDescriptor {
  ModelId id;
  double parameter_count = 0.0;  // e.g. 8e9

  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

/// The candidate proposer models. Ids are unique, parameter counts positive,
/// and insertion order is preserved for reporting.
class ModelSet {
 public:
  ModelSet() = default;
  explicit ModelSet(std::vector<ModelDescriptor> models);

  [[nodiscard]] std::span<const ModelDescriptor> models() const noexcept { return models_; }
  [[nodiscard]] std::size_t size() const noexcept { return models_.size(); }
  [[nodiscard]] bool empty() const noexcept { return models_.empty(); }

  [[nodiscard]] bool contains(std::string_view id) const noexcept;
  /// Throws UnknownModel.
  [[nodiscard]] const ModelDescriptor& get(std::string_view id) const;

  [[nodiscard]] double max_parameters() const noexcept { return max_params_; }
  [[nodiscard]] double min_parameters() const noexcept { return min_params_; }

  /// True for every model whose parameter count equals the maximum.
  [[nodiscard]] bool is_largest(std::string_view id) const;

  /// First largest model in insertion order.
  [[nodiscard]] const ModelDescriptor& largest() const;
  /// First smallest model in insertion order.
  [[nodiscard]] const ModelDescriptor& smallest() const;

 private:
  std::vector<ModelDescriptor> models_;
  double max_params_ = 0.0;
  double min_params_ = 0.0;
};

/// A transformation sequence plus the model recommended to act next.
struct JointAction {
  std::vector<Mutator> mutators;
  ModelId next_model;
};

}  // namespace colt
