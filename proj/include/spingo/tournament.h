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

#ifndef SPINGO_TOURNAMENT_H_
#define SPINGO_TOURNAMENT_H_

#include <cstdint>
#include <vector>

#include "spingo/table.h"

namespace spingo {

// Blind levels by hand count. After the last configured level the blinds keep
// doubling every `hands_per_level` hands when `double_after_last` is set.
struct BlindSchedule {
  std::vector<BlindLevel> levels;
  int hands_per_level = 10;
  bool double_after_last = true;

  // Levels are counted from hand 1.
  BlindLevel at_hand(int hand_no) const;

  // 0.5/1 doubling every 10 hands.
  static BlindSchedule hyper_turbo();
};

struct TournamentConfig {
  Chips starting_stack = Chips::units(25);
  BlindSchedule schedule = BlindSchedule::hyper_turbo();
  std::uint64_t seed = 0;
  int players = 3;
};

// Winner-take-all sit-and-go. Players are numbered 0..players-1 clockwise and
// keep their number when others bust; each hand is dealt from a deck derived
// from (seed, hand number).
class Tournament {
 public:
  explicit Tournament(TournamentConfig config);

  const TournamentConfig& config() const { return config_; }
  const TableState& hand() const { return hand_; }
  int hand_no() const { return hand_.hand_no(); }
  int button_player() const { return button_player_; }
  std::span<const Chips> stacks() const { return stacks_; }
  std::vector<int> live_players() const;

  bool finished() const;
  // Only once finished.
  int winner() const;

  void apply(Role role, const ActionToken& action) { hand_.apply(role, action); }
  // Requires the current hand to be settled and the tournament unfinished.
  void next_hand();

 private:
  static int initial_button(const TournamentConfig& config);
  static TableState deal_hand(const TournamentConfig& config, std::span<const Chips> stacks, int button_player,
                              int hand_no);

  TournamentConfig config_;
  std::vector<Chips> stacks_;
  int button_player_ = 0;
  TableState hand_;
};

Tournament new_tournament(const TournamentConfig& config);

}  // namespace spingo

#endif  // SPINGO_TOURNAMENT_H_
