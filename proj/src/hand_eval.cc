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

#include "spingo/hand_eval.h"

#include <bit>
#include <stdexcept>

namespace spingo {
namespace {

constexpr int kFieldsByCategory[] = {5, 4, 3, 3, 1, 5, 2, 2, 1};

// Highest straight in a 13-bit rank mask, -1 if none. The wheel counts as
// five-high.
int straight_top(std::uint32_t mask) {
  for (int top = 12; top >= 4; --top) {
    const std::uint32_t run = 0x1Fu << (top - 4);
    if ((mask & run) == run) return top;
  }
  constexpr std::uint32_t kWheel = (1u << 12) | 0xFu;
  if ((mask & kWheel) == kWheel) return 3;
  return -1;
}

// Writes up to `n` highest set ranks of `mask` into `out`.
int top_ranks(std::uint32_t mask, int n, int* out) {
  int k = 0;
  while (mask != 0 && k < n) {
    int r = 31 - std::countl_zero(mask);
    out[k++] = r;
    mask &= ~(1u << r);
  }
  return k;
}

std::uint32_t pack(HandCategory c, const int* ranks, int n) {
  std::uint32_t v = static_cast<std::uint32_t>(c) << 20;
  for (int i = 0; i < n; ++i) v |= static_cast<std::uint32_t>(ranks[i]) << (16 - 4 * i);
  return v;
}

}  // namespace

std::string category_name(HandCategory c) {
  switch (c) {
    case HandCategory::kHighCard: return "high-card";
    case HandCategory::kPair: return "pair";
    case HandCategory::kTwoPair: return "two-pair";
    case HandCategory::kTrips: return "trips";
    case HandCategory::kStraight: return "straight";
    case HandCategory::kFlush: return "flush";
    case HandCategory::kFullHouse: return "full-house";
    case HandCategory::kQuads: return "quads";
    case HandCategory::kStraightFlush: return "straight-flush";
  }
  return "?";
}

HandRank HandRank::make(HandCategory category, std::span<const int> tiebreak) {
  return HandRank(pack(category, tiebreak.data(), static_cast<int>(tiebreak.size())));
}

std::vector<int> HandRank::tiebreak() const {
  std::vector<int> out;
  int n = kFieldsByCategory[static_cast<int>(category())];
  for (int i = 0; i < n; ++i) out.push_back(static_cast<int>((packed_ >> (16 - 4 * i)) & 0xF));
  return out;
}

HandRank evaluate_fast(std::span<const Card> cards) {
  std::uint32_t suit_mask[4] = {0, 0, 0, 0};
  int count[13] = {};
  for (const Card& c : cards) {
    suit_mask[c.suit()] |= 1u << c.rank();
    ++count[c.rank()];
  }
  const std::uint32_t all = suit_mask[0] | suit_mask[1] | suit_mask[2] | suit_mask[3];
  int r[5] = {0, 0, 0, 0, 0};

  for (std::uint32_t sm : suit_mask) {
    if (std::popcount(sm) >= 5) {
      int top = straight_top(sm);
      if (top >= 0) {
        r[0] = top;
        return HandRank(pack(HandCategory::kStraightFlush, r, 1));
      }
      // Quads or a full house cannot coexist with a flush in 7 cards, so the
      // flush is final once found.
      top_ranks(sm, 5, r);
      return HandRank(pack(HandCategory::kFlush, r, 5));
    }
  }

  std::uint32_t quads = 0, trips = 0, pairs = 0;
  for (int i = 0; i < 13; ++i) {
    if (count[i] == 4) quads |= 1u << i;
    else if (count[i] == 3) trips |= 1u << i;
    else if (count[i] == 2) pairs |= 1u << i;
  }

  if (quads != 0) {
    r[0] = 31 - std::countl_zero(quads);
    top_ranks(all & ~(1u << r[0]), 1, r + 1);
    return HandRank(pack(HandCategory::kQuads, r, 2));
  }
  if (trips != 0) {
    int t = 31 - std::countl_zero(trips);
    std::uint32_t rest = (trips & ~(1u << t)) | pairs;
    if (rest != 0) {
      r[0] = t;
      r[1] = 31 - std::countl_zero(rest);
      return HandRank(pack(HandCategory::kFullHouse, r, 2));
    }
  }
  if (int top = straight_top(all); top >= 0) {
    r[0] = top;
    return HandRank(pack(HandCategory::kStraight, r, 1));
  }
  if (trips != 0) {
    r[0] = 31 - std::countl_zero(trips);
    top_ranks(all & ~(1u << r[0]), 2, r + 1);
    return HandRank(pack(HandCategory::kTrips, r, 3));
  }
  if (std::popcount(pairs) >= 2) {
    top_ranks(pairs, 2, r);
    top_ranks(all & ~(1u << r[0]) & ~(1u << r[1]), 1, r + 2);
    return HandRank(pack(HandCategory::kTwoPair, r, 3));
  }
  if (pairs != 0) {
    r[0] = 31 - std::countl_zero(pairs);
    top_ranks(all & ~(1u << r[0]), 3, r + 1);
    return HandRank(pack(HandCategory::kPair, r, 4));
  }
  top_ranks(all, 5, r);
  return HandRank(pack(HandCategory::kHighCard, r, 5));
}

HandRank evaluate7(std::span<const Card> cards) {
  if (cards.size() != 7) throw std::invalid_argument("evaluate7 needs exactly 7 cards");
  std::uint64_t seen = 0;
  for (const Card& c : cards) {
    const std::uint64_t bit = 1ULL << c.index();
    if (seen & bit) throw std::invalid_argument("duplicate card " + c.str());
    seen |= bit;
  }
  return evaluate_fast(cards);
}

}  // namespace spingo
