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

#ifndef SPINGO_ACTION_H_
#define SPINGO_ACTION_H_

#include <optional>
#include <string>

#include "spingo/chips.h"

namespace spingo {

enum class ActionKind { kFold, kCall, kCheck, kAllIn, kBet, kRaise };

// One move in the compact vocabulary: f, c, x, a, b{amt}, r{amt}. A bet
// amount is the bet size; a raise amount is the total the raiser reaches on
// the current street (raise-to).
class ActionToken {
 public:
  static ActionToken fold() { return ActionToken(ActionKind::kFold, kZeroChips); }
  static ActionToken call() { return ActionToken(ActionKind::kCall, kZeroChips); }
  static ActionToken check() { return ActionToken(ActionKind::kCheck, kZeroChips); }
  static ActionToken allin() { return ActionToken(ActionKind::kAllIn, kZeroChips); }
  static ActionToken bet(Chips amount) { return ActionToken(ActionKind::kBet, amount); }
  static ActionToken raise_to(Chips amount) { return ActionToken(ActionKind::kRaise, amount); }

  ActionKind kind() const { return kind_; }
  bool sized() const { return kind_ == ActionKind::kBet || kind_ == ActionKind::kRaise; }
  // Zero for unsized kinds.
  Chips amount() const { return amount_; }

  std::string str() const;

  bool operator==(const ActionToken&) const = default;

 private:
  ActionToken(ActionKind k, Chips a) : kind_(k), amount_(a) {}
  ActionKind kind_;
  Chips amount_;
};

std::string kind_name(ActionKind k);

}  // namespace spingo

#endif  // SPINGO_ACTION_H_
