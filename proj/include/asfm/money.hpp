#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace asfm {

/// Share counts. Always whole shares.
using Quantity = std::int64_t;

/// Fixed-point currency amount with two fractional digits.
///
/// Stored as an integer number of cents so balances and trade prices never
/// touch binary floating point. Operations that can produce sub-cent results
/// (midpoints, scaling by a factor, averaging) round half-up explicitly.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) { return Money{cents}; }

  /// Parses "10", "10.2", "10.25", "-0.05". More than two fractional digits
  /// is an error rather than a silent rounding.
  static Money parse(std::string_view text);

  /// Converts a decimal literal coming from JSON. Rejects values that are not
  /// representable with two fractional digits.
  static Money from_decimal(double value);

  constexpr std::int64_t cents() const { return cents_; }
  double to_double() const { return static_cast<double>(cents_) / 100.0; }

  /// Always renders two fractional digits ("10.20").
  std::string str() const;

  /// Multiplies by a real factor, rounding the result half-up to the cent.
  /// The factor is first quantized to 1e-6 so the result does not depend on
  /// the binary expansion of values such as 1.01.
  Money scaled(double factor) const;

  /// Same as scaled() but truncates toward zero.
  Money scaled_floor(double factor) const;

  constexpr Money operator+(Money o) const { return Money{cents_ + o.cents_}; }
  constexpr Money operator-(Money o) const { return Money{cents_ - o.cents_}; }
  constexpr Money operator-() const { return Money{-cents_}; }
  constexpr Money& operator+=(Money o) {
    cents_ += o.cents_;
    return *this;
  }
  constexpr Money& operator-=(Money o) {
    cents_ -= o.cents_;
    return *this;
  }
  constexpr Money operator*(Quantity q) const { return Money{cents_ * q}; }

  constexpr auto operator<=>(const Money&) const = default;

 private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}

  std::int64_t cents_ = 0;
};

constexpr Money operator*(Quantity q, Money m) { return m * q; }

/// Integer division rounding half-up (toward +infinity on ties).
/// `den` must be positive.
constexpr std::int64_t div_round_half_up(std::int64_t num, std::int64_t den) {
  std::int64_t q = num / den;
  std::int64_t r = num % den;
  if (r < 0) {
    r += den;
    --q;
  }
  return 2 * r >= den ? q + 1 : q;
}

/// (a + b) / 2 rounded half-up to the cent.
constexpr Money midpoint(Money a, Money b) {
  return Money::from_cents(div_round_half_up(a.cents() + b.cents(), 2));
}

/// Largest whole number of shares purchasable with `budget` at `price`.
constexpr Quantity affordable_shares(Money budget, Money price) {
  if (price.cents() <= 0 || budget.cents() <= 0) return 0;
  return budget.cents() / price.cents();
}

inline std::string to_string(Money m) { return m.str(); }

}  // namespace asfm
