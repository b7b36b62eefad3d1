#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace icsguard {

/// Attacker cost of a component or a measure instance.
///
/// A cost is either a finite, non-negative decimal with at most three
/// fractional digits, or infinite. Finite values are stored as an exact
/// count of thousandths so sums and comparisons never round.
class Cost {
 public:
  static constexpr std::int64_t kScale = 1000;

  constexpr Cost() = default;

  /// Throws std::invalid_argument when `millis` is negative.
  static Cost from_millis(std::int64_t millis);
  static Cost from_integer(std::int64_t units) { return from_millis(units * kScale); }
  static constexpr Cost infinite() {
    Cost c;
    c.infinite_ = true;
    return c;
  }

  /// Accepts "inf" or a plain decimal literal such as "3", "0.5" or "12.125".
  static std::optional<Cost> parse(std::string_view text);
  /// Converts a JSON-style double; fails if more than three fractional digits
  /// would be needed or the value is negative / not finite.
  static std::optional<Cost> from_double(double value);

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_zero() const { return !infinite_ && millis_ == 0; }
  /// Thousandths of a unit. Only meaningful for finite costs.
  constexpr std::int64_t millis() const { return millis_; }

  /// Shortest exact decimal rendering; "inf" for infinite costs.
  std::string to_string() const;

  Cost operator+(const Cost& other) const;
  Cost& operator+=(const Cost& other) { return *this = *this + other; }
  /// Scales by a non-negative integer factor.
  Cost operator*(std::int64_t factor) const;

  friend constexpr bool operator==(const Cost& a, const Cost& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.millis_ == b.millis_);
  }
  friend constexpr std::strong_ordering operator<=>(const Cost& a, const Cost& b) {
    if (a.infinite_ || b.infinite_) {
      return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
    }
    return a.millis_ <=> b.millis_;
  }

 private:
  std::int64_t millis_ = 0;
  bool infinite_ = false;
};

}  // namespace icsguard
