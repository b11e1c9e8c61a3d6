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

#include "spingo/table.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace spingo {

std::string role_name(Role r) {
  switch (r) {
    case Role::kBtn: return "BTN";
    case Role::kSb: return "SB";
    case Role::kBb: return "BB";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "BTN") return Role::kBtn;
  if (s == "SB") return Role::kSb;
  if (s == "BB") return Role::kBb;
  return std::nullopt;
}

std::string street_name(Street s) {
  switch (s) {
    case Street::kPreflop: return "pre";
    case Street::kFlop: return "flop";
    case Street::kTurn: return "turn";
    case Street::kRiver: return "river";
    case Street::kShowdown: return "showdown";
    case Street::kSettled: return "settled";
  }
  return "?";
}

bool LegalActionSet::allows(const ActionToken& a) const {
  switch (a.kind()) {
    case ActionKind::kFold: return may_fold;
    case ActionKind::kCheck: return may_check;
    case ActionKind::kCall: return call.has_value();
    case ActionKind::kAllIn: return may_allin;
    case ActionKind::kBet: return bet && bet->contains(a.amount());
    case ActionKind::kRaise: return raise_to && raise_to->contains(a.amount());
  }
  return false;
}

std::string LegalActionSet::str() const {
  std::string out = "{";
  auto add = [&out](const std::string& s) {
    if (out.size() > 1) out += ", ";
    out += s;
  };
  if (may_fold) add("fold");
  if (may_check) add("check");
  if (call) add("call " + format_amount(*call));
  if (bet) add("bet [" + format_amount(bet->min) + "," + format_amount(bet->max) + "]");
  if (raise_to) add("raise_to [" + format_amount(raise_to->min) + "," + format_amount(raise_to->max) + "]");
  if (may_allin) add("allin");
  return out + "}";
}

TableState TableState::deal(const HandConfig& config, std::uint64_t seed) {
  return deal(config, shuffled_deck(seed), seed);
}

TableState TableState::deal(const HandConfig& config, const DealScript& deck, std::uint64_t seed_label) {
  const int n = static_cast<int>(config.stacks.size());
  if (n < 2 || n > 3) throw std::invalid_argument("a table needs 2 or 3 seats");
  if (config.button < 0 || config.button >= n) throw std::invalid_argument("button seat out of range");
  if (config.blinds.sb <= kZeroChips || config.blinds.bb < config.blinds.sb)
    throw std::invalid_argument("invalid blinds");
  if (!config.players.empty() && static_cast<int>(config.players.size()) != n)
    throw std::invalid_argument("players list does not match seat count");
  std::set<int> seen;
  for (const Card& c : deck) seen.insert(c.index());
  if (seen.size() != kDeckSize) throw std::invalid_argument("deal script is not a permutation of the deck");

  TableState st;
  st.hand_no_ = config.hand_no;
  st.mode_ = config.mode;
  st.blinds_ = config.blinds;
  st.button_ = config.button;
  st.deck_seed_ = seed_label;
  st.deck_ = deck;
  st.seats_.resize(n);
  for (int i = 0; i < n; ++i) {
    Seat& s = st.seats_[i];
    if (config.stacks[i] <= kZeroChips) throw std::invalid_argument("stacks must be positive");
    s.player = config.players.empty() ? i : config.players[i];
    s.starting_stack = s.stack = config.stacks[i];
  }
  const int sb = n == 3 ? (st.button_ + 1) % n : st.button_;
  const int bb = (sb + 1) % n;
  if (n == 3) st.seats_[st.button_].role = Role::kBtn;
  st.seats_[sb].role = Role::kSb;
  st.seats_[bb].role = Role::kBb;
  for (int k = 0; k < n; ++k) {
    Seat& s = st.seats_[(st.button_ + 1 + k) % n];
    s.hole = {deck[2 * k], deck[2 * k + 1]};
  }
  st.commit(sb, std::min(config.blinds.sb, st.seats_[sb].stack));
  st.commit(bb, std::min(config.blinds.bb, st.seats_[bb].stack));
  st.street_ = Street::kPreflop;
  st.bet_level_ = config.blinds.bb;
  st.last_full_raise_ = config.blinds.bb;
  st.to_act_ = st.find_to_act((bb + 1) % n);
  if (st.to_act_ < 0) st.advance_after(bb);
  return st;
}

std::optional<Role> TableState::to_act() const {
  if (to_act_ < 0) return std::nullopt;
  return seats_[to_act_].role;
}

int TableState::seat_of(Role r) const {
  for (int i = 0; i < num_seats(); ++i) {
    if (seats_[i].role == r) return i;
  }
  throw std::invalid_argument("no seat with role " + role_name(r));
}

bool TableState::has_role(Role r) const {
  return std::any_of(seats_.begin(), seats_.end(), [r](const Seat& s) { return s.role == r; });
}

Chips TableState::pot() const {
  Chips total;
  for (const Seat& s : seats_) total += s.committed_total;
  return total;
}

Chips TableState::max_other_capacity(int s) const {
  Chips best;
  for (int i = 0; i < num_seats(); ++i) {
    if (i == s || seats_[i].folded) continue;
    best = std::max(best, capacity(i));
  }
  return best;
}

int TableState::others_with_chips(int s) const {
  int n = 0;
  for (int i = 0; i < num_seats(); ++i) {
    if (i != s && !seats_[i].folded && seats_[i].stack > kZeroChips) ++n;
  }
  return n;
}

int TableState::live_count() const {
  return static_cast<int>(std::count_if(seats_.begin(), seats_.end(), [](const Seat& s) { return !s.folded; }));
}

Chips TableState::to_call(int s) const {
  const Seat& seat = seats_[s];
  // Nobody can be made to match more than an opponent is able to put in.
  Chips target = std::min(bet_level_, max_other_capacity(s));
  Chips owed = target - seat.committed_street;
  if (owed <= kZeroChips) return kZeroChips;
  return std::min(owed, seat.stack);
}

bool TableState::needs_action(int s) const {
  const Seat& seat = seats_[s];
  if (seat.folded || seat.stack == kZeroChips) return false;
  const bool owes = to_call(s) > kZeroChips;
  if (seat.acted && !owes) return false;
  return owes || others_with_chips(s) > 0;
}

int TableState::find_to_act(int start) const {
  const int n = num_seats();
  for (int k = 0; k < n; ++k) {
    int s = (start + k) % n;
    if (needs_action(s)) return s;
  }
  return -1;
}

LegalActionSet TableState::legal_actions() const {
  if (!in_betting() || to_act_ < 0) throw HandStateError("no decision pending on a " + street_name(street_) + " hand");
  const int p = to_act_;
  const Seat& seat = seats_[p];
  LegalActionSet out;
  out.may_fold = true;
  const Chips owed = to_call(p);
  if (owed > kZeroChips) out.call = owed;
  else out.may_check = true;

  const Chips others_cap = max_other_capacity(p);
  const bool reopened = !seat.acted || bet_level_ - seat.faced_level >= last_full_raise_;
  const bool aggressive = reopened && others_with_chips(p) > 0 && seat.stack > owed && others_cap > bet_level_;
  if (aggressive) {
    const Chips top = std::min(capacity(p), others_cap);
    if (bet_level_ == kZeroChips) {
      out.bet = ChipRange{std::min(blinds_.bb, top), top};
    } else {
      out.raise_to = ChipRange{std::min(bet_level_ + last_full_raise_, top), top};
    }
  }
  out.may_allin = seat.stack > kZeroChips && (aggressive || seat.stack <= owed);
  return out;
}

void TableState::commit(int s, Chips amount) {
  Seat& seat = seats_[s];
  seat.stack -= amount;
  seat.committed_street += amount;
  seat.committed_total += amount;
}

void TableState::apply(Role role, const ActionToken& action) {
  if (!in_betting() || to_act_ < 0) throw HandStateError("hand is " + street_name(street_) + "; no action accepted");
  if (!has_role(role)) throw OutOfTurnError("no seat with role " + role_name(role));
  const int p = seat_of(role);
  if (p != to_act_) throw OutOfTurnError(role_name(role) + " acted but " + role_name(seats_[to_act_].role) + " is to act");
  LegalActionSet legal = legal_actions();
  if (!legal.allows(action)) throw IllegalActionError(action, std::move(legal));

  Seat& seat = seats_[p];
  Chips put;
  switch (action.kind()) {
    case ActionKind::kFold: seat.folded = true; break;
    case ActionKind::kCheck: break;
    case ActionKind::kCall: put = *legal.call; break;
    case ActionKind::kBet:
    case ActionKind::kRaise: put = action.amount() - seat.committed_street; break;
    case ActionKind::kAllIn: put = seat.stack; break;
  }
  commit(p, put);
  if (seat.committed_street > bet_level_) {
    const Chips increment = seat.committed_street - bet_level_;
    if (increment >= last_full_raise_) last_full_raise_ = increment;
    bet_level_ = seat.committed_street;
  }
  seat.acted = true;
  seat.faced_level = bet_level_;
  const bool all_in = put > kZeroChips && seat.stack == kZeroChips;
  history_.push_back({street_, role, all_in ? ActionToken::allin() : action});
  advance_after(p);
}

void TableState::advance_after(int actor) {
  if (live_count() == 1) {
    finish_hand();
    return;
  }
  to_act_ = find_to_act((actor + 1) % num_seats());
  if (to_act_ >= 0) return;

  int with_chips = 0;
  for (const Seat& s : seats_) {
    if (!s.folded && s.stack > kZeroChips) ++with_chips;
  }
  if (street_ == Street::kRiver || with_chips <= 1) {
    while (board_.size() < 5) board_.push_back(deck_[2 * num_seats() + board_.size()]);
    street_ = Street::kShowdown;
    finish_hand();
    return;
  }
  start_street(static_cast<Street>(static_cast<int>(street_) + 1));
}

void TableState::start_street(Street s) {
  street_ = s;
  const std::size_t want = s == Street::kFlop ? 3 : s == Street::kTurn ? 4 : 5;
  while (board_.size() < want) board_.push_back(deck_[2 * num_seats() + board_.size()]);
  for (Seat& seat : seats_) {
    seat.committed_street = kZeroChips;
    seat.acted = false;
    seat.faced_level = kZeroChips;
  }
  bet_level_ = kZeroChips;
  last_full_raise_ = blinds_.bb;
  to_act_ = find_to_act((button_ + 1) % num_seats());
  if (to_act_ < 0) advance_after(button_);
}

HandRank TableState::showdown_rank(int s) const {
  std::array<Card, 7> cards;
  cards[0] = seats_[s].hole[0];
  cards[1] = seats_[s].hole[1];
  std::copy(board_.begin(), board_.end(), cards.begin() + 2);
  return evaluate_fast(cards);
}

std::vector<Pot> TableState::pots() const {
  std::set<Chips> levels;
  for (const Seat& s : seats_) {
    if (s.committed_total > kZeroChips) levels.insert(s.committed_total);
  }
  std::vector<Pot> out;
  Chips prev;
  for (Chips level : levels) {
    Pot layer;
    int contributors = 0;
    for (int i = 0; i < num_seats(); ++i) {
      if (seats_[i].committed_total >= level) {
        ++contributors;
        if (!seats_[i].folded) layer.eligible.push_back(i);
      }
    }
    layer.amount = (level - prev) * contributors;
    prev = level;
    if (!out.empty() && (out.back().eligible == layer.eligible || layer.eligible.empty())) {
      out.back().amount += layer.amount;
    } else {
      out.push_back(std::move(layer));
    }
  }
  return out;
}

std::vector<Chips> TableState::compute_payouts() const {
  if (in_betting() && live_count() > 1) throw HandStateError("hand has not ended");
  const int n = num_seats();
  std::vector<Chips> pay(n);
  std::vector<HandRank> ranks(n);
  const bool showdown = live_count() > 1;
  if (showdown) {
    if (board_.size() != 5) throw HandStateError("showdown without a full board");
    for (int i = 0; i < n; ++i) {
      if (!seats_[i].folded) ranks[i] = showdown_rank(i);
    }
  }
  for (const Pot& pot : pots()) {
    std::vector<int> winners;
    if (pot.eligible.size() == 1 || !showdown) {
      winners = pot.eligible;
    } else {
      HandRank best;
      for (int s : pot.eligible) best = std::max(best, ranks[s]);
      for (int s : pot.eligible) {
        if (ranks[s] == best) winners.push_back(s);
      }
    }
    // Odd tenths go to winners in clockwise order from the seat left of the button.
    std::sort(winners.begin(), winners.end(), [&](int a, int b) {
      return (a - button_ - 1 + n) % n < (b - button_ - 1 + n) % n;
    });
    const std::int64_t k = static_cast<std::int64_t>(winners.size());
    const std::int64_t share = pot.amount.raw() / k;
    std::int64_t rem = pot.amount.raw() % k;
    for (int s : winners) {
      pay[s] += Chips::tenths(share + (rem > 0 ? 1 : 0));
      if (rem > 0) --rem;
    }
  }
  return pay;
}

void TableState::finish_hand() {
  if (live_count() > 1) street_ = Street::kShowdown;
  payouts_ = compute_payouts();
  for (int i = 0; i < num_seats(); ++i) seats_[i].stack += payouts_[i];
  street_ = Street::kSettled;
  to_act_ = -1;
}

std::vector<Chips> TableState::net_winnings() const {
  if (!settled()) throw HandStateError("hand not settled");
  std::vector<Chips> out;
  for (const Seat& s : seats_) out.push_back(s.stack - s.starting_stack);
  return out;
}

std::string TableState::serialize() const {
  std::ostringstream os;
  os << "spingo-table/1\n";
  os << "hand_no=" << hand_no_ << "\n";
  os << "mode=" << (mode_ == GameMode::kCash ? "cash" : "tournament") << "\n";
  os << "blinds=" << format_amount(blinds_.sb) << "/" << format_amount(blinds_.bb) << "\n";
  os << "street=" << street_name(street_) << "\n";
  os << "button=" << button_ << "\n";
  os << "to_act=" << (to_act_ < 0 ? "-" : role_name(seats_[to_act_].role)) << "\n";
  os << "bet_level=" << format_amount(bet_level_) << "\n";
  os << "last_full_raise=" << format_amount(last_full_raise_) << "\n";
  os << "deck_seed=" << deck_seed_ << "\n";
  os << "deck=" << cards_str(deck_) << "\n";
  os << "board=" << cards_str(board_) << "\n";
  for (int i = 0; i < num_seats(); ++i) {
    const Seat& s = seats_[i];
    os << "seat=" << i << " role=" << role_name(s.role) << " player=" << s.player
       << " start=" << format_amount(s.starting_stack) << " stack=" << format_amount(s.stack)
       << " street=" << format_amount(s.committed_street) << " total=" << format_amount(s.committed_total)
       << " hole=" << cards_str(s.hole) << " folded=" << s.folded << " acted=" << s.acted
       << " faced=" << format_amount(s.faced_level) << "\n";
  }
  os << "history=";
  for (std::size_t i = 0; i < history_.size(); ++i) {
    if (i > 0) os << ",";
    os << street_name(history_[i].street) << ":" << role_name(history_[i].role) << " " << history_[i].token.str();
  }
  os << "\npayouts=";
  for (std::size_t i = 0; i < payouts_.size(); ++i) os << (i ? "," : "") << format_amount(payouts_[i]);
  os << "\n";
  return os.str();
}

TableState new_cash_hand(std::span<const std::pair<Role, Chips>> stacks, BlindLevel blinds, std::uint64_t seed) {
  const int n = static_cast<int>(stacks.size());
  if (n < 2 || n > 3) throw std::invalid_argument("a table needs 2 or 3 seats");
  std::vector<Role> order = n == 3 ? std::vector<Role>{Role::kBtn, Role::kSb, Role::kBb}
                                   : std::vector<Role>{Role::kSb, Role::kBb};
  HandConfig cfg;
  cfg.blinds = blinds;
  cfg.button = 0;
  for (Role want : order) {
    int found = 0;
    for (const auto& [role, stack] : stacks) {
      if (role == want) {
        ++found;
        cfg.stacks.push_back(stack);
      }
    }
    if (found != 1) throw std::invalid_argument("roles must be distinct and complete; problem with " + role_name(want));
  }
  return TableState::deal(cfg, seed);
}

TableState new_cash_hand(const HandConfig& config, std::uint64_t seed) { return TableState::deal(config, seed); }

LegalActionSet legal_actions(const TableState& state) { return state.legal_actions(); }

TableState apply_action(const TableState& state, Role role, const ActionToken& action) {
  TableState next = state;
  next.apply(role, action);
  return next;
}

std::vector<Chips> settle_showdown(const TableState& state) { return state.compute_payouts(); }

}  // namespace spingo
