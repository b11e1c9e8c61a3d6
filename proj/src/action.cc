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

#include "spingo/action.h"

namespace spingo {

std::string ActionToken::str() const {
  switch (kind_) {
    case ActionKind::kFold: return "f";
    case ActionKind::kCall: return "c";
    case ActionKind::kCheck: return "x";
    case ActionKind::kAllIn: return "a";
    case ActionKind::kBet: return "b" + format_amount(amount_);
    case ActionKind::kRaise: return "r" + format_amount(amount_);
  }
  return "?";
}

std::string kind_name(ActionKind k) {
  switch (k) {
    case ActionKind::kFold: return "fold";
    case ActionKind::kCall: return "call";
    case ActionKind::kCheck: return "check";
    case ActionKind::kAllIn: return "allin";
    case ActionKind::kBet: return "bet";
    case ActionKind::kRaise: return "raise";
  }
  return "?";
}

}  // namespace spingo
