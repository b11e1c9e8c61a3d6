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

#ifndef SPINGO_ARENA_H_
#define SPINGO_ARENA_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spingo/agents.h"
#include "spingo/chips.h"
#include "spingo/table.h"
#include "spingo/tournament.h"

namespace spingo {

enum class MatchMode { kCashHu, kSpinAndGo };

std::string mode_name(MatchMode m);

// An agent returned something the engine refused, or a hand ran away.
class ArenaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatchResult {
  MatchMode mode = MatchMode::kCashHu;
  std::vector<std::string> agents;
  std::uint64_t master_seed = 0;
  bool duplicate = false;
  // The unit winnings are reported in: the table big blind for cash games,
  // the level-1 big blind for tournaments.
  Chips big_blind = Chips::units(1);
  // net[h][a]: chips agent `a` won in hand `h`. Each row sums to zero.
  std::vector<std::vector<Chips>> net;
  std::vector<double> bb_per_100;
  std::vector<double> ci95_halfwidth;

  // Tournaments only, in play order.
  std::vector<int> tournament_winner;
  std::vector<std::size_t> tournament_hands;
  std::vector<double> win_rate;

  std::size_t n_hands() const { return net.size(); }
  std::vector<double> winnings_bb(std::size_t agent) const;
};

// 100 x the mean of `winnings`, which must be nonempty.
double bb_per_100(std::span<const double> winnings);

// Normal-approximation 95% halfwidth in BB/100. Paired mode averages
// consecutive hands first and needs an even count of at least four.
double ci95(std::span<const double> winnings, bool paired = false);

struct CashConfig {
  Chips stack = Chips::units(200);
  BlindLevel blinds;
  std::uint64_t seed = 0;
  bool duplicate = false;
  unsigned threads = 1;
};

// Heads-up cash match. Deal i is dealt from a deck derived from (seed, i);
// stacks reset every hand and the button alternates. In duplicate mode every
// deal is played twice with the agents' seats swapped, so the match has
// 2 x n_deals hands and hand 2i+1 mirrors hand 2i.
MatchResult run_cash_match(const AgentPtr& a, const AgentPtr& b, std::size_t n_deals, const CashConfig& config);

struct SpinConfig {
  Chips starting_stack = Chips::units(25);
  BlindSchedule schedule = BlindSchedule::hyper_turbo();
  std::uint64_t seed = 0;
  bool rotate_seats = true;
  unsigned threads = 1;
  // Safety net for agents that never put chips in.
  int max_hands = 5000;
};

// Three-player winner-take-all tournaments. With rotation, tournaments come in
// triples sharing one seed, the agents shifted one seat each time; n must then
// be a multiple of 3.
MatchResult run_spin_and_go(const std::array<AgentPtr, 3>& agents, std::size_t n_tournaments,
                            const SpinConfig& config);

// Plays one settled hand, asking `agent_for_seat` for every decision.
void play_hand(TableState& state, std::span<Agent* const> agent_for_seat);

// Ordered keys; per-hand winnings in BB under "winnings".
std::string match_json(const MatchResult& r);
std::string match_text(const MatchResult& r);

}  // namespace spingo

#endif  // SPINGO_ARENA_H_
