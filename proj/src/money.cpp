#include "asfm/money.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace asfm {

Money Money::parse(std::string_view text) {
  auto fail = [&] {
    return std::invalid_argument("invalid money literal: '" + std::string(text) + "'");
  };
  if (text.empty()) throw fail();

  bool negative = false;
  std::string_view rest = text;
  if (rest.front() == '-' || rest.front() == '+') {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  auto dot = rest.find('.');
  std::string_view whole = rest.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw fail();
  if (frac.size() > 2) throw fail();

  std::int64_t units = 0;
  if (!whole.empty()) {
    auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
    if (ec != std::errc{} || ptr != whole.data() + whole.size()) throw fail();
  }
  std::int64_t fraction = 0;
  for (char c : frac) {
    if (c < '0' || c > '9') throw fail();
    fraction = fraction * 10 + (c - '0');
  }
  if (frac.size() == 1) fraction *= 10;

  std::int64_t cents = units * 100 + fraction;
  return Money{negative ? -cents : cents};
}

Money Money::from_decimal(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite money value");
  double scaled = value * 100.0;
  double rounded = std::round(scaled);
  if (std::fabs(scaled - rounded) > 1e-6) {
    throw std::invalid_argument("money value has more than two decimals: " + std::to_string(value));
  }
  return Money{static_cast<std::int64_t>(rounded)};
}

std::string Money::str() const {
  std::int64_t abs = cents_ < 0 ? -cents_ : cents_;
  std::string out = cents_ < 0 ? "-" : "";
  out += std::to_string(abs / 100);
  out += '.';
  std::int64_t frac = abs % 100;
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return out;
}

namespace {

constexpr std::int64_t kFactorScale = 1'000'000;

__int128 scaled_numerator(std::int64_t cents, double factor) {
  auto ppm = static_cast<std::int64_t>(std::llround(factor * static_cast<double>(kFactorScale)));
  return static_cast<__int128>(cents) * ppm;
}

}  // namespace

Money Money::scaled(double factor) const {
  __int128 num = scaled_numerator(cents_, factor);
  __int128 q = num / kFactorScale;
  __int128 r = num % kFactorScale;
  if (r < 0) {
    r += kFactorScale;
    --q;
  }
  if (2 * r >= kFactorScale) ++q;
  return Money{static_cast<std::int64_t>(q)};
}

Money Money::scaled_floor(double factor) const {
  __int128 num = scaled_numerator(cents_, factor);
  return Money{static_cast<std::int64_t>(num / kFactorScale)};
}

}  // namespace asfm
