#include "colt/mutator.hpp"

#include <algorithm>
#include <charconv>

#include "colt/error.hpp"

namespace colt {

Mutator Mutator::tile(int factor) {
  if (std::find(kTileFactors.begin(), kTileFactors.end(), factor) == kTileFactors.end()) {
    throw InvalidMutator("tile factor must be one of 4, 8, 16; got " + std::to_string(factor));
  }
  return Mutator{MutatorKind::Tile, factor};
}

std::optional<Mutator> Mutator::parse(std::string_view text) {
  if (text == "Vectorize") return vectorize();
  if (text == "Parallel") return parallel();
  if (text == "Unroll") return unroll();
  if (text == "CacheWrite") return cache_write();

  constexpr std::string_view kPrefix = "Tile(";
  if (text.size() <= kPrefix.size() + 1 || !text.starts_with(kPrefix) || !text.ends_with(')')) {
    return std::nullopt;
  }
  const auto digits = text.substr(kPrefix.size(), text.size() - kPrefix.size() - 1);
  int factor = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), factor);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  // "Tile(08)" is not canonical.
  if (digits.front() == '0') return std::nullopt;
  if (std::find(kTileFactors.begin(), kTileFactors.end(), factor) == kTileFactors.end()) {
    return std::nullopt;
  }
  return Mutator{MutatorKind::Tile, factor};
}

std::string Mutator::to_string() const {
  switch (kind_) {
    case MutatorKind::Tile:
      return "Tile(" + std::to_string(arg_) + ")";
    case MutatorKind::Vectorize:
      return "Vectorize";
    case MutatorKind::Parallel:
      return "Parallel";
    case MutatorKind::Unroll:
      return "Unroll";
    case MutatorKind::CacheWrite:
      return "CacheWrite";
  }
  return "?";
}

bool canonical_less(const Mutator& a, const Mutator& b) { return a.to_string() < b.to_string(); }

}  // namespace colt
