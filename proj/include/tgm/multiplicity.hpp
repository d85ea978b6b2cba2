#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace tgm {

/// Closed interval [min, max] of counts; an empty max means unbounded ("*").
struct Multiplicity {
  std::uint32_t min = 0;
  std::optional<std::uint32_t> max;

  static Multiplicity exactly(std::uint32_t n) { return {n, n}; }
  static Multiplicity at_least(std::uint32_t n) { return {n, std::nullopt}; }
  static Multiplicity between(std::uint32_t lo, std::uint32_t hi) { return {lo, hi}; }

  bool unbounded() const noexcept { return !max.has_value(); }
  bool well_formed() const noexcept { return !max || (*max >= 1 && min <= *max); }
  bool admits(std::uint64_t count) const noexcept { return count >= min && (!max || count <= *max); }
  /// Interval containment: every count admitted by `inner` is admitted here.
  bool contains(const Multiplicity& inner) const noexcept {
    if (inner.min < min) return false;
    if (!max) return true;
    return inner.max && *inner.max <= *max;
  }

  /// "min..max", with "*" for an unbounded maximum.
  std::string to_string() const;

  bool operator==(const Multiplicity&) const = default;
};

/// Smallest interval containing every input interval: min of the minima and
/// max of the maxima, an unbounded maximum dominating. Throws EmptyList.
Multiplicity most_general_multiplicity(std::span<const Multiplicity> ms);

}  // namespace tgm
