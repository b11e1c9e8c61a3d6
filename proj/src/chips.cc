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

#include "spingo/chips.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

namespace spingo {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

std::optional<std::int64_t> to_int(std::string_view s) {
  if (!all_digits(s) || s.size() > 15) return std::nullopt;
  std::int64_t v = 0;
  for (char ch : s) v = v * 10 + (ch - '0');
  return v;
}

}  // namespace

std::string format_amount(Chips c) {
  std::int64_t t = c.raw();
  std::string sign = t < 0 ? "-" : "";
  t = std::llabs(t);
  std::string out = sign + std::to_string(t / 10);
  if (t % 10 != 0) out += "." + std::to_string(t % 10);
  return out;
}

std::string format_fixed1(Chips c) {
  std::int64_t t = c.raw();
  std::string sign = t < 0 ? "-" : "";
  t = std::llabs(t);
  return sign + std::to_string(t / 10) + "." + std::to_string(t % 10);
}

std::optional<Chips> parse_canonical_amount(std::string_view s) {
  auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  if (whole.empty() || (whole.size() > 1 && whole[0] == '0')) return std::nullopt;
  auto w = to_int(whole);
  if (!w) return std::nullopt;
  std::int64_t frac = 0;
  if (dot != std::string_view::npos) {
    std::string_view f = s.substr(dot + 1);
    if (f.size() != 1 || !all_digits(f) || f[0] == '0') return std::nullopt;
    frac = f[0] - '0';
  }
  return Chips::tenths(*w * 10 + frac);
}

std::optional<Chips> parse_fixed1(std::string_view s) {
  auto dot = s.find('.');
  if (dot == std::string_view::npos || dot + 2 != s.size()) return std::nullopt;
  std::string_view whole = s.substr(0, dot);
  if (whole.empty() || (whole.size() > 1 && whole[0] == '0')) return std::nullopt;
  auto w = to_int(whole);
  auto f = to_int(s.substr(dot + 1));
  if (!w || !f) return std::nullopt;
  return Chips::tenths(*w * 10 + *f);
}

std::optional<Chips> parse_decimal_rounded(std::string_view s) {
  if (s.empty()) return std::nullopt;
  auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (!whole.empty() && !all_digits(whole)) return std::nullopt;
  if (dot != std::string_view::npos && !frac.empty() && !all_digits(frac)) return std::nullopt;
  if (dot != std::string_view::npos && frac.empty() && whole.empty()) return std::nullopt;
  std::string text(s);
  errno = 0;
  double v = std::strtod(text.c_str(), nullptr);
  if (!std::isfinite(v) || v > 1e12) return std::nullopt;
  return Chips::tenths(static_cast<std::int64_t>(std::llround(v * 10.0)));
}

Chips normalize(Chips c, Chips unit) {
  // round(c * 10 / unit), half away from zero
  std::int64_t num = c.raw() * 10;
  std::int64_t den = unit.raw();
  std::int64_t q = (2 * std::llabs(num) + den) / (2 * den);
  return Chips::tenths(num < 0 ? -q : q);
}

Chips denormalize(Chips in_units, Chips unit) {
  std::int64_t num = in_units.raw() * unit.raw();
  std::int64_t q = (2 * std::llabs(num) + 10) / 20;
  return Chips::tenths(num < 0 ? -q : q);
}

}  // namespace spingo
