#include "colt/environment.hpp"

#include <algorithm>

#include "colt/error.hpp"

namespace colt {

double Environment::reward(const ProgramState& state) const {
  return std::clamp(1.0 - cost(state) / base_cost(), 0.0, 1.0);
}

SynthKernel::SynthKernel(double base_cost, int horizon) : base_cost_(base_cost), horizon_(horizon) {
  if (!(base_cost > 0.0)) throw ConfigError("base_cost must be positive");
  if (horizon < 0) throw ConfigError("horizon must be nonnegative");
}

Rational SynthKernel::exact_speedup(const ProgramFeatures& f) {
  // Gains are multiplied in a fixed order so equal feature sets give equal values.
  Rational g{1};
  switch (f.tile_factor) {
    case 4:
      g *= Rational{8, 5};
      break;
    case 8:
      g *= Rational{2};
      break;
    case 16:
      g *= Rational{9, 5};
      break;
    default:
      break;
  }
  if (f.vectorized) g *= f.tile_factor >= 8 ? Rational{4} : Rational{3, 2};
  if (f.parallelized) g *= Rational{7, 2};
  if (f.unrolled) g *= f.unroll_after_tile ? Rational{6, 5} : Rational{9, 10};
  if (f.cached_write) g *= f.cache_after_vectorize ? Rational{13, 10} : Rational{19, 20};
  return g;
}

double SynthKernel::speedup(const ProgramState& state) const {
  return to_double(exact_speedup(state.features()));
}

double SynthKernel::cost(const ProgramState& state) const {
  return base_cost_ / speedup(state);
}

}  // namespace colt
