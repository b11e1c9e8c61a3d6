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

#include "spingo/tournament.h"

#include <algorithm>
#include <stdexcept>

#include "spingo/rng.h"

namespace spingo {

BlindLevel BlindSchedule::at_hand(int hand_no) const {
  if (levels.empty()) throw std::invalid_argument("empty blind schedule");
  const int index = hands_per_level > 0 ? (hand_no - 1) / hands_per_level : 0;
  const int last = static_cast<int>(levels.size()) - 1;
  if (index <= last) return levels[index];
  BlindLevel b = levels[last];
  if (double_after_last) {
    for (int i = last; i < index; ++i) {
      b.sb = b.sb * 2;
      b.bb = b.bb * 2;
    }
  }
  return b;
}

BlindSchedule BlindSchedule::hyper_turbo() {
  return BlindSchedule{{BlindLevel{Chips::tenths(5), Chips::tenths(10)}}, 10, true};
}

int Tournament::initial_button(const TournamentConfig& config) {
  if (config.players < 2 || config.players > 3) throw std::invalid_argument("tournaments seat 2 or 3 players");
  if (config.schedule.levels.empty()) throw std::invalid_argument("empty blind schedule");
  if (config.starting_stack <= kZeroChips) throw std::invalid_argument("starting stack must be positive");
  return static_cast<int>(derive_seed(config.seed, 0) % static_cast<std::uint64_t>(config.players));
}

TableState Tournament::deal_hand(const TournamentConfig& config, std::span<const Chips> stacks, int button_player,
                                 int hand_no) {
  HandConfig hc;
  hc.mode = GameMode::kTournament;
  hc.hand_no = hand_no;
  hc.blinds = config.schedule.at_hand(hand_no);
  for (int p = 0; p < static_cast<int>(stacks.size()); ++p) {
    if (stacks[p] <= kZeroChips) continue;
    if (p == button_player) hc.button = static_cast<int>(hc.stacks.size());
    hc.stacks.push_back(stacks[p]);
    hc.players.push_back(p);
  }
  return TableState::deal(hc, derive_seed(config.seed, static_cast<std::uint64_t>(hand_no)));
}

Tournament::Tournament(TournamentConfig config)
    : config_(std::move(config)),
      stacks_(static_cast<std::size_t>(config_.players), config_.starting_stack),
      button_player_(initial_button(config_)),
      hand_(deal_hand(config_, stacks_, button_player_, 1)) {}

std::vector<int> Tournament::live_players() const {
  std::vector<int> out;
  for (int p = 0; p < static_cast<int>(stacks_.size()); ++p) {
    if (stacks_[p] > kZeroChips) out.push_back(p);
  }
  return out;
}

bool Tournament::finished() const {
  if (!hand_.settled()) return false;
  int live = 0;
  for (const Seat& s : hand_.seats()) {
    if (s.stack > kZeroChips) ++live;
  }
  return live == 1;
}

int Tournament::winner() const {
  if (!finished()) throw HandStateError("tournament still running");
  for (const Seat& s : hand_.seats()) {
    if (s.stack > kZeroChips) return s.player;
  }
  throw HandStateError("no chips left on the table");
}

void Tournament::next_hand() {
  if (!hand_.settled()) throw HandStateError("current hand not settled");
  if (finished()) throw HandStateError("tournament finished");
  for (const Seat& s : hand_.seats()) stacks_[s.player] = s.stack;
  const int n = static_cast<int>(stacks_.size());
  for (int k = 1; k <= n; ++k) {
    int p = (button_player_ + k) % n;
    if (stacks_[p] > kZeroChips) {
      button_player_ = p;
      break;
    }
  }
  hand_ = deal_hand(config_, stacks_, button_player_, hand_.hand_no() + 1);
}

Tournament new_tournament(const TournamentConfig& config) { return Tournament(config); }

}  // namespace spingo
