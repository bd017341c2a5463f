#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace colt {

enum class MutatorKind { Tile, Vectorize, Parallel, Unroll, CacheWrite };

/// Tile factors accepted by Tile(f).
inline constexpr std::array<int, 3> kTileFactors{4, 8, 16};

/// One schedule transformation. Only Tile carries an argument.
class Mutator {
 public:
  static Mutator tile(int factor);
  static Mutator vectorize() { return Mutator{MutatorKind::Vectorize, 0}; }
  static Mutator parallel() { return Mutator{MutatorKind::Parallel, 0}; }
  static Mutator unroll() { return Mutator{MutatorKind::Unroll, 0}; }
  static Mutator cache_write() { return Mutator{MutatorKind::CacheWrite, 0}; }

  /// Parses a canonical spelling ("Tile(8)", "Vectorize", ...). Anything else is nullopt.
  static std::optional<Mutator> parse(std::string_view text);

  [[nodiscard]] MutatorKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::optional<int> arg() const noexcept {
    return kind_ == MutatorKind::Tile ? std::optional<int>{arg_} : std::nullopt;
  }

  /// Canonical wire spelling.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Mutator&, const Mutator&) = default;

 private:
  Mutator(MutatorKind kind, int arg) : kind_(kind), arg_(arg) {}

  MutatorKind kind_;
  int arg_;
};

/// Orders by canonical spelling; this is the tie-break order used throughout.
bool canonical_less(const Mutator& a, const Mutator& b);

}  // namespace colt
