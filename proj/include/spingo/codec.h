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

#ifndef SPINGO_CODEC_H_
#define SPINGO_CODEC_H_

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spingo/action.h"
#include "spingo/cards.h"
#include "spingo/table.h"

namespace spingo {

// Instruction-string format, one line per decision:
//
//   pos:H=BTN stacks:H=29.3,BB=1.7,SB=19.0 hand:TsQs | pre:H r2,SB c,BB f
//     | flop:4h7s6c SB b1,H c | turn:8d SB b1,H c | river:9c SB b1 H:
//
// (shown wrapped). Stacks are start-of-hand values before blinds, in big
// blinds with exactly one decimal, hero first and then the other seats walking
// counter-clockwise from hero. Action amounts use the shortest form ("r2",
// "r6.5"). The hero's own past actions are attributed to "H". A street whose
// action list is empty is followed directly by " H:".

struct StackEntry {
  Role role;
  Chips stack;
  bool operator==(const StackEntry&) const = default;
};

struct ContextAction {
  Role role;
  ActionToken token;
  bool operator==(const ContextAction&) const = default;
};

struct StreetLog {
  Street street;
  std::vector<ContextAction> actions;
  bool operator==(const StreetLog&) const = default;
};

// Everything one seat may know at a decision point, in big blinds.
struct DecisionContext {
  Role hero = Role::kBtn;
  std::vector<StackEntry> stacks;  // hero first
  std::array<Card, 2> hand{};
  std::vector<Card> board;
  std::vector<StreetLog> streets;  // preflop first; only streets reached

  Street current_street() const { return streets.back().street; }
  bool operator==(const DecisionContext&) const = default;
};

class GrammarError : public std::runtime_error {
 public:
  GrammarError(std::size_t position, const std::string& what)
      : std::runtime_error("prompt grammar error at byte " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ContextError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ActionParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Snapshot of what `hero` sees in a hand that is still being played.
DecisionContext context_from_state(const TableState& state, Role hero);
std::string encode_context(const DecisionContext& ctx);
// Requires hero to be the seat to act.
std::string encode_prompt(const TableState& state, Role hero);
// Parses and checks a prompt: grammar errors carry the offending byte offset;
// duplicate cards, unknown actors or actions by folded seats raise ContextError.
DecisionContext decode_prompt(std::string_view text);

// Rebuilds a playable state (big-blind units, blinds 0.5/1) from a context by
// replaying its actions. Unknown opponent cards are filled with unused cards.
// Throws ContextError when the actions do not replay legally or the hero is
// not the seat to act afterwards.
TableState replay_context(const DecisionContext& ctx);

// Parses model output. Surrounding whitespace is ignored; anything else must
// be exactly one token. Amounts are rounded to one decimal.
ActionToken parse_action(std::string_view text);

enum class RepairRule { kRaiseToBet, kBetToRaise, kCallToCheck, kCheckToCall, kAmountClamped, kFallback };
std::string rule_name(RepairRule r);

struct RepairNote {
  std::string original;
  ActionToken repaired;
  RepairRule rule;
};

struct Repaired {
  ActionToken action;
  std::optional<RepairNote> note;
};

// Check if legal, otherwise fold.
ActionToken fallback_action(const LegalActionSet& legal);

// Maps an action onto the closest legal one: swap raise/bet and call/check,
// then clamp the amount into range, then fall back. Always returns a legal
// action; `note` is empty when the input was already legal.
Repaired repair_action(const ActionToken& token, const LegalActionSet& legal);

}  // namespace spingo

#endif  // SPINGO_CODEC_H_
