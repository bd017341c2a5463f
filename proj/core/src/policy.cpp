#include "colt/policy.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "colt/error.hpp"

namespace colt {

void PolicyParams::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("policy.lambda must lie in [0, 1]");
  if (!(c > 0.0)) throw ConfigError("policy.c must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("policy.epsilon must be positive");
  if (branching < 1) throw ConfigError("policy.branching must be at least 1");
}

double phi_small(const ModelDescriptor& model, const ModelSet& models, double epsilon) {
  const auto& known = models.get(model.id);
  const double log_max = std::log(models.max_parameters());
  const double numerator = log_max - std::log(known.parameter_count);
  if (numerator == 0.0) return 0.0;
  return numerator / (log_max - std::log(models.min_parameters()) + epsilon);
}

double ma_uct_score(const NodeStats& child, double phi, std::uint64_t parent_visits,
                    const PolicyParams& params) {
  if (child.visits == 0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(child.visits);
  const double exploit = child.cumulative_reward / n;
  const double explore = std::sqrt(std::log(static_cast<double>(parent_visits)) / n);
  return (1.0 - params.lambda) * exploit + params.lambda * phi + params.c * explore;
}

std::size_t select_child(std::span<const ChildCandidate> children, std::uint64_t parent_visits,
                         const PolicyParams& params, Rng& rng) {
  if (children.empty()) throw EmptyChildren("select_child called with no children");
  std::vector<std::size_t> best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < children.size(); ++i) {
    const double s = ma_uct_score(children[i].stats, children[i].phi, parent_visits, params);
    if (best.empty() || s > best_score) {
      best_score = s;
      best.assign(1, i);
    } else if (s == best_score) {
      best.push_back(i);
    }
  }
  if (best.size() == 1) return best.front();
  return best[rng.index(best.size())];
}

}  // namespace colt
