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

#include "spingo/cards.h"

#include <stdexcept>

#include "spingo/rng.h"

namespace spingo {
namespace {

constexpr std::string_view kRanks = "23456789TJQKA";
constexpr std::string_view kSuits = "cdhs";

}  // namespace

char rank_char(int rank) { return kRanks[rank]; }
char suit_char(int suit) { return kSuits[suit]; }

std::string Card::str() const { return {rank_char(rank()), suit_char(suit())}; }

std::optional<Card> parse_card(std::string_view s) {
  if (s.size() != 2) return std::nullopt;
  auto r = kRanks.find(s[0]);
  auto u = kSuits.find(s[1]);
  if (r == std::string_view::npos || u == std::string_view::npos) return std::nullopt;
  return Card(static_cast<int>(r), static_cast<int>(u));
}

std::optional<std::vector<Card>> parse_cards(std::string_view text) {
  if (text.size() % 2 != 0) return std::nullopt;
  std::vector<Card> out;
  for (std::size_t i = 0; i < text.size(); i += 2) {
    auto c = parse_card(text.substr(i, 2));
    if (!c) return std::nullopt;
    out.push_back(*c);
  }
  return out;
}

std::string cards_str(std::span<const Card> cards) {
  std::string out;
  for (const Card& c : cards) out += c.str();
  return out;
}

DealScript ordered_deck() {
  DealScript d;
  for (int i = 0; i < kDeckSize; ++i) d[i] = Card::from_index(i);
  return d;
}

DealScript shuffled_deck(std::uint64_t seed) {
  DealScript d = ordered_deck();
  Rng rng(seed);
  for (int i = kDeckSize - 1; i > 0; --i) {
    auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(d[i], d[j]);
  }
  return d;
}

DealScript deck_with_prefix(std::span<const Card> fixed) {
  if (fixed.size() > kDeckSize) throw std::invalid_argument("too many fixed cards");
  std::array<bool, kDeckSize> used{};
  DealScript d;
  std::size_t pos = 0;
  for (const Card& c : fixed) {
    if (used[c.index()]) throw std::invalid_argument("duplicate card " + c.str());
    used[c.index()] = true;
    d[pos++] = c;
  }
  for (int i = 0; i < kDeckSize; ++i) {
    if (!used[i]) d[pos++] = Card::from_index(i);
  }
  return d;
}

DealScript deck_from_slots(std::span<const std::optional<Card>> slots) {
  if (slots.size() > kDeckSize) throw std::invalid_argument("too many slots");
  std::array<bool, kDeckSize> used{};
  for (const auto& c : slots) {
    if (!c) continue;
    if (used[c->index()]) throw std::invalid_argument("duplicate card " + c->str());
    used[c->index()] = true;
  }
  DealScript d;
  int next_free = 0;
  auto take_free = [&]() {
    while (used[next_free]) ++next_free;
    used[next_free] = true;
    return Card::from_index(next_free);
  };
  for (std::size_t i = 0; i < kDeckSize; ++i) {
    d[i] = (i < slots.size() && slots[i]) ? *slots[i] : take_free();
  }
  return d;
}

}  // namespace spingo
