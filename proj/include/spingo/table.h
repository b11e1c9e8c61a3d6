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

#ifndef SPINGO_TABLE_H_
#define SPINGO_TABLE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spingo/action.h"
#include "spingo/cards.h"
#include "spingo/chips.h"
#include "spingo/hand_eval.h"

namespace spingo {

// Heads-up tables use only kSb (the button) and kBb.
enum class Role { kBtn, kSb, kBb };
enum class Street { kPreflop, kFlop, kTurn, kRiver, kShowdown, kSettled };
enum class GameMode { kCash, kTournament };

std::string role_name(Role r);
std::optional<Role> parse_role(std::string_view s);
std::string street_name(Street s);

struct BlindLevel {
  Chips sb = Chips::tenths(5);
  Chips bb = Chips::tenths(10);
  bool operator==(const BlindLevel&) const = default;
};

struct ChipRange {
  Chips min;
  Chips max;
  bool contains(Chips c) const { return c >= min && c <= max; }
  bool operator==(const ChipRange&) const = default;
};

// Moves available to the seat that is to act. `call` is engaged exactly when
// there is something to call; otherwise `may_check` is set.
struct LegalActionSet {
  bool may_fold = false;
  bool may_check = false;
  std::optional<Chips> call;
  std::optional<ChipRange> bet;
  std::optional<ChipRange> raise_to;
  bool may_allin = false;

  bool allows(const ActionToken& a) const;
  bool empty() const { return !may_fold && !may_check && !call && !bet && !raise_to && !may_allin; }
  std::string str() const;
  bool operator==(const LegalActionSet&) const = default;
};

class IllegalActionError : public std::runtime_error {
 public:
  IllegalActionError(const ActionToken& attempted, LegalActionSet legal)
      : std::runtime_error("illegal action " + attempted.str() + "; legal: " + legal.str()),
        attempted_(attempted),
        legal_(std::move(legal)) {}
  const ActionToken& attempted() const { return attempted_; }
  const LegalActionSet& legal() const { return legal_; }

 private:
  ActionToken attempted_;
  LegalActionSet legal_;
};

class OutOfTurnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an operation does not fit the current street (e.g. acting on a
// settled hand, settling a hand still in progress).
class HandStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Seat {
  int player = 0;
  Role role = Role::kBtn;
  Chips starting_stack;
  Chips stack;
  Chips committed_street;
  Chips committed_total;
  std::array<Card, 2> hole{};
  bool folded = false;
  bool acted = false;
  // Bet level this seat last acted against on the current street.
  Chips faced_level;

  bool operator==(const Seat&) const = default;
};

struct HistoryEntry {
  Street street;
  Role role;
  ActionToken token;
  bool operator==(const HistoryEntry&) const = default;
};

struct Pot {
  Chips amount;
  std::vector<int> eligible;  // seat indices
};

struct HandConfig {
  std::vector<Chips> stacks;  // clockwise seat order, 2 or 3 seats
  BlindLevel blinds;
  int button = 0;
  GameMode mode = GameMode::kCash;
  int hand_no = 1;
  std::vector<int> players;  // optional caller ids, defaults to seat index
};

// Authoritative state of one no-limit hold'em hand for 2 or 3 seats. Seats are
// stored clockwise; the button seat is BTN three-handed and SB heads-up.
// Mutate only through apply(); copies are independent.
class TableState {
 public:
  static TableState deal(const HandConfig& config, std::uint64_t seed);
  static TableState deal(const HandConfig& config, const DealScript& deck, std::uint64_t seed_label = 0);

  int hand_no() const { return hand_no_; }
  GameMode mode() const { return mode_; }
  const BlindLevel& blinds() const { return blinds_; }
  Street street() const { return street_; }
  std::span<const Card> board() const { return board_; }
  std::span<const Seat> seats() const { return seats_; }
  const Seat& seat(int i) const { return seats_.at(i); }
  int num_seats() const { return static_cast<int>(seats_.size()); }
  int button() const { return button_; }
  std::uint64_t deck_seed() const { return deck_seed_; }
  const DealScript& deck() const { return deck_; }
  std::span<const HistoryEntry> history() const { return history_; }
  Chips bet_level() const { return bet_level_; }
  Chips last_full_raise() const { return last_full_raise_; }

  bool in_betting() const { return street_ <= Street::kRiver; }
  bool settled() const { return street_ == Street::kSettled; }
  std::optional<Role> to_act() const;
  int to_act_seat() const { return to_act_; }
  int seat_of(Role r) const;
  bool has_role(Role r) const;

  // Chips committed by all seats this hand.
  Chips pot() const;
  Chips to_call(int seat) const;
  LegalActionSet legal_actions() const;

  void apply(Role role, const ActionToken& action);

  // Main and side pots, merged where eligibility is identical. A trailing pot
  // with a single contributor is an uncalled amount returned to its owner.
  std::vector<Pot> pots() const;
  std::vector<Chips> compute_payouts() const;
  // Settled hands only: payouts that were paid, per seat.
  std::span<const Chips> payouts() const { return payouts_; }
  // Settled hands only: stack change per seat.
  std::vector<Chips> net_winnings() const;

  std::string serialize() const;

  bool operator==(const TableState&) const = default;

 private:
  TableState() = default;

  Chips capacity(int s) const { return seats_[s].committed_street + seats_[s].stack; }
  Chips max_other_capacity(int s) const;
  int others_with_chips(int s) const;
  int live_count() const;
  bool needs_action(int s) const;
  int find_to_act(int start) const;
  void commit(int s, Chips amount);
  void advance_after(int actor);
  void start_street(Street s);
  void finish_hand();
  HandRank showdown_rank(int s) const;

  int hand_no_ = 1;
  GameMode mode_ = GameMode::kCash;
  BlindLevel blinds_;
  Street street_ = Street::kPreflop;
  std::vector<Card> board_;
  std::vector<Seat> seats_;
  int button_ = 0;
  int to_act_ = -1;
  Chips bet_level_;
  Chips last_full_raise_;
  std::uint64_t deck_seed_ = 0;
  DealScript deck_{};
  std::vector<HistoryEntry> history_;
  std::vector<Chips> payouts_;
};

// Cash hand: stacks keyed by role (BTN/SB/BB three-handed, SB/BB heads-up).
TableState new_cash_hand(std::span<const std::pair<Role, Chips>> stacks, BlindLevel blinds,
                         std::uint64_t seed);
TableState new_cash_hand(const HandConfig& config, std::uint64_t seed);

LegalActionSet legal_actions(const TableState& state);
TableState apply_action(const TableState& state, Role role, const ActionToken& action);
// Payouts per seat for a finished hand (showdown, settled, or one seat left).
std::vector<Chips> settle_showdown(const TableState& state);

}  // namespace spingo

#endif  // SPINGO_TABLE_H_
