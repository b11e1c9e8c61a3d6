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

#include "spingo/codec.h"

#include <algorithm>
#include <cctype>
#include <set>

namespace spingo {
namespace {

const Chips kBbUnit = Chips::tenths(10);

ActionToken normalized_token(const ActionToken& t, Chips bb) {
  switch (t.kind()) {
    case ActionKind::kBet: return ActionToken::bet(normalize(t.amount(), bb));
    case ActionKind::kRaise: return ActionToken::raise_to(normalize(t.amount(), bb));
    default: return t;
  }
}

std::string encode_actions(const DecisionContext& ctx, const StreetLog& log) {
  std::string out;
  for (std::size_t i = 0; i < log.actions.size(); ++i) {
    if (i > 0) out += ",";
    const ContextAction& a = log.actions[i];
    out += a.role == ctx.hero ? "H" : role_name(a.role);
    out += " ";
    out += a.token.str();
  }
  return out;
}

std::size_t board_cards_for(Street s) {
  switch (s) {
    case Street::kFlop: return 3;
    case Street::kTurn:
    case Street::kRiver: return 1;
    default: return 0;
  }
}

class PromptParser {
 public:
  explicit PromptParser(std::string_view text) : text_(text) {}

  DecisionContext parse() {
    DecisionContext ctx;
    expect("pos:H=");
    ctx.hero = parse_role_token();
    expect(" stacks:H=");
    ctx.stacks.push_back({ctx.hero, parse_stack()});
    while (peek() == ',') {
      ++pos_;
      Role r = parse_role_token();
      expect("=");
      ctx.stacks.push_back({r, parse_stack()});
    }
    expect(" hand:");
    auto hand = parse_card_run(2);
    ctx.hand = {hand[0], hand[1]};
    expect(" | pre:");
    ctx.streets.push_back({Street::kPreflop, {}});
    if (!at_suffix()) parse_actions(ctx, ctx.streets.back());
    for (Street s : {Street::kFlop, Street::kTurn, Street::kRiver}) {
      if (at_suffix()) break;
      expect(" | " + street_name(s) + ":");
      auto cards = parse_card_run(board_cards_for(s));
      ctx.board.insert(ctx.board.end(), cards.begin(), cards.end());
      ctx.streets.push_back({s, {}});
      if (at_suffix()) break;
      expect(" ");
      parse_actions(ctx, ctx.streets.back());
    }
    expect(" H:");
    if (pos_ != text_.size()) fail("trailing characters after \" H:\"");
    return ctx;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw GrammarError(pos_, what); }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool at_suffix() const { return text_.substr(pos_) == " H:"; }

  void expect(std::string_view lit) {
    for (std::size_t i = 0; i < lit.size(); ++i) {
      if (pos_ + i >= text_.size() || text_[pos_ + i] != lit[i]) {
        pos_ += i;
        fail("expected \"" + std::string(lit) + "\"");
      }
    }
    pos_ += lit.size();
  }

  std::string_view take_while(auto pred) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && pred(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Role parse_role_token() {
    std::size_t start = pos_;
    auto word = take_while([](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; });
    auto r = parse_role(word);
    if (!r) {
      pos_ = start;
      fail("expected BTN, SB or BB");
    }
    return *r;
  }

  Chips parse_stack() {
    std::size_t start = pos_;
    auto num = take_while([](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; });
    auto v = parse_fixed1(num);
    if (!v) {
      pos_ = start;
      fail("expected a stack with one decimal");
    }
    return *v;
  }

  std::vector<Card> parse_card_run(std::size_t n) {
    std::vector<Card> out;
    for (std::size_t i = 0; i < n; ++i) {
      auto c = pos_ + 2 <= text_.size() ? parse_card(text_.substr(pos_, 2)) : std::nullopt;
      if (!c) fail("expected a card");
      out.push_back(*c);
      pos_ += 2;
    }
    return out;
  }

  ActionToken parse_token() {
    std::size_t start = pos_;
    auto word = take_while([](char c) { return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '.'; });
    auto bad = [&]() {
      pos_ = start;
      fail("expected an action token");
    };
    if (word.empty()) bad();
    if (word.size() == 1) {
      switch (word[0]) {
        case 'f': return ActionToken::fold();
        case 'c': return ActionToken::call();
        case 'x': return ActionToken::check();
        case 'a': return ActionToken::allin();
        default: bad();
      }
    }
    if (word[0] != 'b' && word[0] != 'r') bad();
    auto amount = parse_canonical_amount(word.substr(1));
    if (!amount || *amount <= kZeroChips) bad();
    return word[0] == 'b' ? ActionToken::bet(*amount) : ActionToken::raise_to(*amount);
  }

  void parse_actions(const DecisionContext& ctx, StreetLog& log) {
    while (true) {
      Role actor;
      if (peek() == 'H' && pos_ + 1 < text_.size() && text_[pos_ + 1] == ' ') {
        actor = ctx.hero;
        ++pos_;
      } else {
        actor = parse_role_token();
        if (actor == ctx.hero) fail("hero's own actions must be attributed to H");
      }
      expect(" ");
      log.actions.push_back({actor, parse_token()});
      if (peek() != ',') break;
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void check_context(const DecisionContext& ctx) {
  const std::size_t n = ctx.stacks.size();
  if (n < 2 || n > 3) throw ContextError("a decision context lists 2 or 3 seats");
  std::set<Role> roles;
  for (const StackEntry& e : ctx.stacks) {
    if (!roles.insert(e.role).second) throw ContextError("duplicate role " + role_name(e.role));
    if (e.stack <= kZeroChips) throw ContextError("non-positive stack for " + role_name(e.role));
  }
  if (n == 2 && roles.count(Role::kBtn)) throw ContextError("heads-up seats are SB and BB");
  std::set<int> cards;
  auto add_card = [&cards](const Card& c) {
    if (!cards.insert(c.index()).second) throw ContextError("duplicate card " + c.str());
  };
  for (const Card& c : ctx.hand) add_card(c);
  for (const Card& c : ctx.board) add_card(c);
  std::set<Role> folded;
  for (const StreetLog& log : ctx.streets) {
    for (const ContextAction& a : log.actions) {
      if (!roles.count(a.role)) throw ContextError("action by unseated role " + role_name(a.role));
      if (folded.count(a.role)) throw ContextError("action by folded seat " + role_name(a.role));
      if (a.token.kind() == ActionKind::kFold) folded.insert(a.role);
    }
  }
  if (folded.count(ctx.hero)) throw ContextError("hero has folded");
}

}  // namespace

DecisionContext context_from_state(const TableState& state, Role hero) {
  if (!state.in_betting()) throw HandStateError("hand already " + street_name(state.street()));
  const int h = state.seat_of(hero);
  const int n = state.num_seats();
  const Chips bb = state.blinds().bb;
  DecisionContext ctx;
  ctx.hero = hero;
  for (int k = 0; k < n; ++k) {
    const Seat& s = state.seat((h - k + n) % n);
    ctx.stacks.push_back({s.role, normalize(s.starting_stack, bb)});
  }
  ctx.hand = state.seat(h).hole;
  ctx.board.assign(state.board().begin(), state.board().end());
  for (int s = 0; s <= static_cast<int>(state.street()); ++s) ctx.streets.push_back({static_cast<Street>(s), {}});
  for (const HistoryEntry& e : state.history()) {
    ctx.streets[static_cast<int>(e.street)].actions.push_back({e.role, normalized_token(e.token, bb)});
  }
  return ctx;
}

std::string encode_context(const DecisionContext& ctx) {
  if (ctx.stacks.empty() || ctx.streets.empty()) throw ContextError("incomplete decision context");
  std::string out = "pos:H=" + role_name(ctx.hero) + " stacks:";
  for (std::size_t i = 0; i < ctx.stacks.size(); ++i) {
    if (i > 0) out += ",";
    out += (i == 0 ? std::string("H") : role_name(ctx.stacks[i].role)) + "=" + format_fixed1(ctx.stacks[i].stack);
  }
  out += " hand:" + cards_str(ctx.hand) + " | pre:" + encode_actions(ctx, ctx.streets[0]);
  std::size_t board_pos = 0;
  for (std::size_t i = 1; i < ctx.streets.size(); ++i) {
    const StreetLog& log = ctx.streets[i];
    const std::size_t k = board_cards_for(log.street);
    if (board_pos + k > ctx.board.size()) throw ContextError("board shorter than streets reached");
    out += " | " + street_name(log.street) + ":" +
           cards_str(std::span<const Card>(ctx.board).subspan(board_pos, k));
    board_pos += k;
    if (!log.actions.empty()) out += " " + encode_actions(ctx, log);
  }
  out += " H:";
  return out;
}

std::string encode_prompt(const TableState& state, Role hero) {
  if (!state.in_betting()) throw HandStateError("hand already " + street_name(state.street()));
  if (state.to_act() != hero) throw OutOfTurnError("prompts are encoded for the seat to act");
  return encode_context(context_from_state(state, hero));
}

DecisionContext decode_prompt(std::string_view text) {
  DecisionContext ctx = PromptParser(text).parse();
  check_context(ctx);
  return ctx;
}

TableState replay_context(const DecisionContext& ctx) {
  check_context(ctx);
  const int n = static_cast<int>(ctx.stacks.size());
  const std::vector<Role> order = n == 3 ? std::vector<Role>{Role::kBtn, Role::kSb, Role::kBb}
                                         : std::vector<Role>{Role::kSb, Role::kBb};
  HandConfig cfg;
  cfg.blinds = BlindLevel{Chips::tenths(5), kBbUnit};
  cfg.button = 0;
  for (Role r : order) {
    auto it = std::find_if(ctx.stacks.begin(), ctx.stacks.end(), [r](const StackEntry& e) { return e.role == r; });
    if (it == ctx.stacks.end()) throw ContextError("missing role " + role_name(r));
    cfg.stacks.push_back(it->stack);
  }
  std::vector<std::optional<Card>> slots(static_cast<std::size_t>(2 * n));
  const int hero_seat = static_cast<int>(std::find(order.begin(), order.end(), ctx.hero) - order.begin());
  const int hero_slot = (hero_seat - 1 + n) % n;  // dealing starts left of the button (seat 0)
  slots[2 * hero_slot] = ctx.hand[0];
  slots[2 * hero_slot + 1] = ctx.hand[1];
  for (const Card& c : ctx.board) slots.push_back(c);
  TableState st = TableState::deal(cfg, deck_from_slots(slots));
  for (const StreetLog& log : ctx.streets) {
    for (const ContextAction& a : log.actions) {
      if (st.street() != log.street) throw ContextError("action listed on " + street_name(log.street) + " but the hand is on " + street_name(st.street()));
      try {
        st.apply(a.role, a.token);
      } catch (const IllegalActionError& e) {
        throw ContextError(std::string("replay failed: ") + e.what());
      } catch (const OutOfTurnError& e) {
        throw ContextError(std::string("replay failed: ") + e.what());
      } catch (const HandStateError& e) {
        throw ContextError(std::string("replay failed: ") + e.what());
      }
    }
  }
  if (st.street() != ctx.current_street()) throw ContextError("context ends on " + street_name(ctx.current_street()) + " but the replay is on " + street_name(st.street()));
  if (st.to_act() != ctx.hero) throw ContextError("hero is not the seat to act after replay");
  return st;
}

ActionToken parse_action(std::string_view text) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (text == "f") return ActionToken::fold();
  if (text == "c") return ActionToken::call();
  if (text == "x") return ActionToken::check();
  if (text == "a") return ActionToken::allin();
  if (text.size() >= 2 && (text[0] == 'b' || text[0] == 'r')) {
    auto amount = parse_decimal_rounded(text.substr(1));
    if (!amount) throw ActionParseError("unparseable amount in \"" + std::string(text) + "\"");
    if (*amount <= kZeroChips) throw ActionParseError("non-positive amount in \"" + std::string(text) + "\"");
    return text[0] == 'b' ? ActionToken::bet(*amount) : ActionToken::raise_to(*amount);
  }
  throw ActionParseError("not an action token: \"" + std::string(text) + "\"");
}

std::string rule_name(RepairRule r) {
  switch (r) {
    case RepairRule::kRaiseToBet: return "raise->bet";
    case RepairRule::kBetToRaise: return "bet->raise";
    case RepairRule::kCallToCheck: return "call->check";
    case RepairRule::kCheckToCall: return "check->call";
    case RepairRule::kAmountClamped: return "amount-clamped";
    case RepairRule::kFallback: return "fallback";
  }
  return "?";
}

ActionToken fallback_action(const LegalActionSet& legal) {
  if (legal.may_check) return ActionToken::check();
  if (legal.may_fold) return ActionToken::fold();
  return ActionToken::call();
}

Repaired repair_action(const ActionToken& token, const LegalActionSet& legal) {
  if (legal.allows(token)) return {token, std::nullopt};
  ActionKind kind = token.kind();
  Chips amount = token.amount();
  std::optional<RepairRule> rule;
  if (kind == ActionKind::kRaise && !legal.raise_to && legal.bet) {
    kind = ActionKind::kBet;
    rule = RepairRule::kRaiseToBet;
  } else if (kind == ActionKind::kBet && !legal.bet && legal.raise_to) {
    kind = ActionKind::kRaise;
    rule = RepairRule::kBetToRaise;
  } else if (kind == ActionKind::kCall && !legal.call && legal.may_check) {
    kind = ActionKind::kCheck;
    rule = RepairRule::kCallToCheck;
  } else if (kind == ActionKind::kCheck && !legal.may_check && legal.call) {
    kind = ActionKind::kCall;
    rule = RepairRule::kCheckToCall;
  }
  const std::optional<ChipRange>& range = kind == ActionKind::kBet ? legal.bet : legal.raise_to;
  if ((kind == ActionKind::kBet || kind == ActionKind::kRaise) && range) {
    Chips clamped = std::clamp(amount, range->min, range->max);
    if (clamped != amount && !rule) rule = RepairRule::kAmountClamped;
    amount = clamped;
  }
  ActionToken candidate = kind == ActionKind::kFold    ? ActionToken::fold()
                          : kind == ActionKind::kCall  ? ActionToken::call()
                          : kind == ActionKind::kCheck ? ActionToken::check()
                          : kind == ActionKind::kAllIn ? ActionToken::allin()
                          : kind == ActionKind::kBet   ? ActionToken::bet(amount)
                                                       : ActionToken::raise_to(amount);
  if (rule && legal.allows(candidate)) return {candidate, RepairNote{token.str(), candidate, *rule}};
  ActionToken fb = fallback_action(legal);
  return {fb, RepairNote{token.str(), fb, RepairRule::kFallback}};
}

}  // namespace spingo
