// Copyright 2026 The spingo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINGO_CHIPS_H_
#define SPINGO_CHIPS_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace spingo {

// An amount of chips counted in integer tenths of a unit. In cash games and in
// everything the codec produces the unit is one big blind; in tournaments it is
// one level-1 big blind.
class Chips {
 public:
  constexpr Chips() = default;
  static constexpr Chips tenths(std::int64_t t) { return Chips(t); }
  static constexpr Chips units(std::int64_t u) { return Chips(u * 10); }

  constexpr std::int64_t raw() const { return tenths_; }
  constexpr double as_double() const { return static_cast<double>(tenths_) / 10.0; }

  constexpr auto operator<=>(const Chips&) const = default;

  constexpr Chips& operator+=(Chips o) { tenths_ += o.tenths_; return *this; }
  constexpr Chips& operator-=(Chips o) { tenths_ -= o.tenths_; return *this; }
  friend constexpr Chips operator+(Chips a, Chips b) { return Chips(a.tenths_ + b.tenths_); }
  friend constexpr Chips operator-(Chips a, Chips b) { return Chips(a.tenths_ - b.tenths_); }
  friend constexpr Chips operator*(Chips a, std::int64_t k) { return Chips(a.tenths_ * k); }
  friend constexpr Chips operator*(std::int64_t k, Chips a) { return Chips(a.tenths_ * k); }
  constexpr Chips operator-() const { return Chips(-tenths_); }

 private:
  constexpr explicit Chips(std::int64_t t) : tenths_(t) {}
  std::int64_t tenths_ = 0;
};

constexpr Chips kZeroChips{};

// "6.5", "2", "0.3": shortest one-decimal form, no trailing ".0".
std::string format_amount(Chips c);
// "19.0", "29.3": always exactly one decimal.
std::string format_fixed1(Chips c);

// Strict parser for format_amount output. Rejects leading zeros, "2.0",
// more than one decimal and signs.
std::optional<Chips> parse_canonical_amount(std::string_view s);
// Strict parser for format_fixed1 output.
std::optional<Chips> parse_fixed1(std::string_view s);
// Lenient decimal parser: any finite non-negative decimal, rounded half away
// from zero to one decimal place.
std::optional<Chips> parse_decimal_rounded(std::string_view s);

// Re-expresses `c` in tenths of `unit` (e.g. chips to big blinds), rounding
// half away from zero.
Chips normalize(Chips c, Chips unit);
// Inverse of normalize for an amount already expressed in tenths of `unit`.
Chips denormalize(Chips in_units, Chips unit);

inline std::ostream& operator<<(std::ostream& os, Chips c) { return os << format_amount(c); }

}  // namespace spingo

#endif  // SPINGO_CHIPS_H_
