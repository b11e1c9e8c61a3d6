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

#ifndef SPINGO_CARDS_H_
#define SPINGO_CARDS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spingo {

// Rank 0..12 maps to 2..A; suit 0..3 maps to c,d,h,s.
class Card {
 public:
  constexpr Card() = default;
  constexpr Card(int rank, int suit) : index_(static_cast<std::uint8_t>(rank * 4 + suit)) {}
  static constexpr Card from_index(int index) { return Card(index / 4, index % 4); }

  constexpr int rank() const { return index_ / 4; }
  constexpr int suit() const { return index_ % 4; }
  constexpr int index() const { return index_; }

  std::string str() const;

  constexpr auto operator<=>(const Card&) const = default;

 private:
  std::uint8_t index_ = 0;
};

inline constexpr int kDeckSize = 52;

std::optional<Card> parse_card(std::string_view two_chars);
// Parses a run of concatenated cards such as "4h7s6c".
std::optional<std::vector<Card>> parse_cards(std::string_view text);
std::string cards_str(std::span<const Card> cards);

char rank_char(int rank);
char suit_char(int suit);

// A full 52-card order for one deal. Hole cards come first (two per seat,
// starting left of the button), followed by the five board cards.
using DealScript = std::array<Card, kDeckSize>;

DealScript ordered_deck();
DealScript shuffled_deck(std::uint64_t seed);

// Builds a deal whose leading cards are `fixed` in order and whose remaining
// positions hold the unused cards in ascending order. Throws on duplicates.
DealScript deck_with_prefix(std::span<const Card> fixed);

// Like deck_with_prefix, but only the engaged slots are pinned; empty slots and
// the tail receive the unused cards in ascending order.
DealScript deck_from_slots(std::span<const std::optional<Card>> slots);

}  // namespace spingo

#endif  // SPINGO_CARDS_H_
