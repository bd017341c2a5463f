#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "colt/program.hpp"

namespace colt {

using Rational = boost::rational<std::int64_t>;

/// A compiler environment: scores programs. Transformation semantics live in
/// program.hpp; an environment only supplies the objective.
class Environment {
 public:
  virtual ~Environment() = default;

  [[nodiscard]] virtual std::string_view name() const = 0;
  [[nodiscard]] virtual double base_cost() const = 0;
  [[nodiscard]] virtual int horizon() const = 0;

  /// Predicted cost in abstract time units; always positive.
  [[nodiscard]] virtual double cost(const ProgramState& state) const = 0;

  /// cost(baseline) / cost(state).
  [[nodiscard]] virtual double speedup(const ProgramState& state) const {
    return base_cost() / cost(state);
  }

  /// clamp(1 - cost/base_cost, 0, 1).
  [[nodiscard]] double reward(const ProgramState& state) const;

  [[nodiscard]] ProgramState initial_state() const { return ProgramState{horizon()}; }
};

/// Analytic cost model "SynthKernel-v1": a product of per-transformation gains,
/// some of which depend on what was applied earlier.
class SynthKernel final : public Environment {
 public:
  static constexpr std::string_view kName = "SynthKernel-v1";
  static constexpr double kDefaultBaseCost = 1000.0;

  explicit SynthKernel(double base_cost = kDefaultBaseCost, int horizon = kDefaultHorizon);

  [[nodiscard]] std::string_view name() const override { return kName; }
  [[nodiscard]] double base_cost() const override { return base_cost_; }
  [[nodiscard]] int horizon() const override { return horizon_; }
  [[nodiscard]] double cost(const ProgramState& state) const override;
  [[nodiscard]] double speedup(const ProgramState& state) const override;

  /// Exact gain product for a feature set.
  [[nodiscard]] static Rational exact_speedup(const ProgramFeatures& features);

 private:
  double base_cost_;
  int horizon_;
};

[[nodiscard]] inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace colt
