#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

namespace phylo {

/// A length in [0, inf]; addition is absorbing at infinity.
struct ExtendedLength {
  double value = 0.0;

  static constexpr ExtendedLength infinity() noexcept { return {std::numeric_limits<double>::infinity()}; }
  bool is_infinite() const noexcept { return std::isinf(value); }

  friend ExtendedLength operator+(ExtendedLength a, ExtendedLength b) noexcept { return {a.value + b.value}; }
  friend bool operator==(const ExtendedLength&, const ExtendedLength&) = default;
  friend auto operator<=>(const ExtendedLength&, const ExtendedLength&) = default;
};

// Per-type rules for edge lengths. Finite lengths live in [0, inf); extended
// lengths may also be inf.
template <class L>
struct LengthTraits;

template <>
struct LengthTraits<double> {
  static bool admissible(double x) noexcept { return std::isfinite(x) && x >= 0.0; }
  static double value(double x) noexcept { return x; }
  static double make(double x) noexcept { return x; }
};

template <>
struct LengthTraits<ExtendedLength> {
  static bool admissible(ExtendedLength x) noexcept { return !std::isnan(x.value) && x.value >= 0.0; }
  static double value(ExtendedLength x) noexcept { return x.value; }
  static ExtendedLength make(double x) noexcept { return {x}; }
};

/// Shortest decimal that round-trips the double; "inf" for infinity.
std::string format_length(double x);
inline std::string length_key(double x) { return format_length(x); }
inline std::string length_key(ExtendedLength x) { return format_length(x.value); }

}  // namespace phylo
