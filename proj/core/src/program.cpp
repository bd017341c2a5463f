#include "colt/program.hpp"

#include <algorithm>

#include "colt/error.hpp"

namespace colt {

namespace {

void fold(ProgramFeatures& f, const Mutator& m) {
  switch (m.kind()) {
    case MutatorKind::Tile:
      f.tile_factor = *m.arg();
      break;
    case MutatorKind::Vectorize:
      f.vectorized = true;
      break;
    case MutatorKind::Parallel:
      f.parallelized = true;
      break;
    case MutatorKind::Unroll:
      f.unrolled = true;
      f.unroll_after_tile = f.tile_factor > 1;
      break;
    case MutatorKind::CacheWrite:
      f.cached_write = true;
      f.cache_after_vectorize = f.vectorized;
      break;
  }
}

std::vector<Mutator> all_mutators_canonical() {
  std::vector<Mutator> all;
  for (int f : kTileFactors) all.push_back(Mutator::tile(f));
  all.push_back(Mutator::vectorize());
  all.push_back(Mutator::parallel());
  all.push_back(Mutator::unroll());
  all.push_back(Mutator::cache_write());
  std::sort(all.begin(), all.end(), canonical_less);
  return all;
}

}  // namespace

ProgramState::ProgramState(int horizon) : horizon_(horizon) {
  if (horizon < 0) throw Error("horizon must be nonnegative");
}

ProgramState ProgramState::from_trace(std::span<const Mutator> trace, int horizon) {
  ProgramState s{horizon};
  for (const auto& m : trace) s = apply_mutator(s, m);
  return s;
}

std::vector<std::string> ProgramState::trace_strings() const {
  std::vector<std::string> out;
  out.reserve(trace_.size());
  for (const auto& m : trace_) out.push_back(m.to_string());
  return out;
}

ProgramFeatures replay_features(std::span<const Mutator> trace) {
  ProgramFeatures f;
  for (const auto& m : trace) fold(f, m);
  return f;
}

bool is_applicable(const ProgramFeatures& f, const Mutator& m) {
  switch (m.kind()) {
    case MutatorKind::Tile:
      return true;
    case MutatorKind::Vectorize:
      return !f.vectorized;
    case MutatorKind::Parallel:
      return !f.parallelized;
    case MutatorKind::Unroll:
      return !f.unrolled;
    case MutatorKind::CacheWrite:
      return !f.cached_write;
  }
  return false;
}

std::vector<Mutator> valid_mutators(const ProgramState& state) {
  if (state.at_horizon()) return {};
  static const std::vector<Mutator> kAll = all_mutators_canonical();
  std::vector<Mutator> out;
  for (const auto& m : kAll) {
    if (is_applicable(state.features(), m)) out.push_back(m);
  }
  return out;
}

ProgramState apply_mutator(const ProgramState& state, const Mutator& m) {
  if (state.at_horizon()) {
    throw HorizonExceeded("trace already at horizon " + std::to_string(state.horizon()));
  }
  if (!is_applicable(state.features(), m)) {
    throw InvalidMutator(m.to_string() + " is not applicable after " + format_trace(state.trace()));
  }
  ProgramState next = state;
  next.trace_.push_back(m);
  fold(next.features_, m);
  return next;
}

std::string format_trace(std::span<const Mutator> trace) {
  std::string out = "[";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i != 0) out += ", ";
    out += trace[i].to_string();
  }
  out += "]";
  return out;
}

}  // namespace colt
