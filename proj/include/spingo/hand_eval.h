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

#ifndef SPINGO_HAND_EVAL_H_
#define SPINGO_HAND_EVAL_H_

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spingo/cards.h"

namespace spingo {

enum class HandCategory : std::uint8_t {
  kHighCard = 0,
  kPair,
  kTwoPair,
  kTrips,
  kStraight,
  kFlush,
  kFullHouse,
  kQuads,
  kStraightFlush,
};

std::string category_name(HandCategory c);

// Category plus the tiebreak ranks (0 = deuce .. 12 = ace), most significant
// first. Packed as 4 bits per field so that integer order is hand order.
class HandRank {
 public:
  constexpr HandRank() = default;
  constexpr explicit HandRank(std::uint32_t packed) : packed_(packed) {}
  static HandRank make(HandCategory category, std::span<const int> tiebreak);

  HandCategory category() const { return static_cast<HandCategory>(packed_ >> 20); }
  // Only the ranks that are meaningful for the category (e.g. one for a
  // straight, four for one pair).
  std::vector<int> tiebreak() const;
  constexpr std::uint32_t packed() const { return packed_; }

  constexpr auto operator<=>(const HandRank&) const = default;

 private:
  std::uint32_t packed_ = 0;
};

// Best five-card hand among 7 distinct cards. Throws std::invalid_argument on
// a wrong count or duplicate cards.
HandRank evaluate7(std::span<const Card> cards);

// Unchecked variant for 5 to 7 distinct cards; used on hot paths.
HandRank evaluate_fast(std::span<const Card> cards);

}  // namespace spingo

#endif  // SPINGO_HAND_EVAL_H_
