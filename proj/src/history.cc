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

#include "spingo/history.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "spingo/codec.h"
#include "spingo/rng.h"

namespace spingo {
namespace {

// Exact decimal as written in the file: mantissa / 10^scale.
struct Decimal {
  std::uint64_t mantissa = 0;
  int scale = 0;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Accepts an optional currency symbol before or after the number.
std::optional<Decimal> parse_money(std::string_view s) {
  while (!s.empty() && !is_digit(s.front()) && s.front() != '.') s.remove_prefix(1);
  while (!s.empty() && !is_digit(s.back())) s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  Decimal d;
  bool dot = false;
  int digits = 0;
  for (char c : s) {
    if (c == '.') {
      if (dot) return std::nullopt;
      dot = true;
      continue;
    }
    if (!is_digit(c)) return std::nullopt;
    if (++digits > 15) return std::nullopt;
    d.mantissa = d.mantissa * 10 + static_cast<std::uint64_t>(c - '0');
    if (dot) ++d.scale;
  }
  if (digits == 0 || d.scale > 6) return std::nullopt;
  return d;
}

// round(10 * a / b), half away from zero.
std::int64_t ratio_tenths(Decimal a, Decimal b) {
  using u128 = unsigned __int128;
  u128 num = static_cast<u128>(a.mantissa) * 10;
  u128 den = b.mantissa;
  for (int i = 0; i < b.scale; ++i) num *= 10;
  for (int i = 0; i < a.scale; ++i) den *= 10;
  return static_cast<std::int64_t>((2 * num + den) / (2 * den));
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

const std::set<std::string_view> kKeywords = {"HAND", "TIME", "TABLE", "BLINDS", "SEAT", "BUTTON", "DEALT",
                                              "CHAT", "FLOP", "TURN", "RIVER", "SHOWS", "WINS", "SUMMARY", "END"};

struct ParseFailure {
  int line;
  std::string message;
};

struct RawSeat {
  int number;
  std::string name;
  Decimal stack;
};

enum class RawKind { kFold, kCheck, kCall, kBet, kRaise, kAllIn };

struct RawAction {
  Street street;
  std::string actor;
  RawKind kind;
  Decimal amount;
  int line;
};

class BlockBuilder {
 public:
  BlockBuilder(std::string id, int line) {
    hand_.hand_id = std::move(id);
    hand_.line = line;
  }

  const std::string& id() const { return hand_.hand_id; }

  void add(const std::vector<std::string_view>& w, int line) {
    const std::string_view key = w[0];
    if (key == "TIME" || key == "TABLE" || key == "CHAT" || key == "SHOWS" || key == "WINS" || key == "SUMMARY") return;
    if (key == "BLINDS") {
      if (w.size() != 3) fail(line, "BLINDS needs two amounts");
      sb_ = money(w[1], line);
      bb_ = money(w[2], line);
      if (bb_->mantissa == 0) fail(line, "big blind must be positive");
    } else if (key == "SEAT") {
      if (w.size() != 4) fail(line, "SEAT needs number, name and stack");
      int number = 0;
      for (char c : w[1]) {
        if (!is_digit(c) || number > 99) fail(line, "bad seat number");
        number = number * 10 + (c - '0');
      }
      if (w[1].empty() || kKeywords.count(w[2])) fail(line, "bad SEAT line");
      for (const RawSeat& s : seats_)
        if (s.number == number || s.name == w[2]) fail(line, "duplicate seat " + std::string(w[1]));
      seats_.push_back({number, std::string(w[2]), money(w[3], line)});
    } else if (key == "BUTTON") {
      if (w.size() != 2) fail(line, "BUTTON needs a seat number");
      int number = 0;
      for (char c : w[1]) {
        if (!is_digit(c) || number > 99) fail(line, "bad button seat");
        number = number * 10 + (c - '0');
      }
      button_ = number;
    } else if (key == "DEALT") {
      if (w.size() < 3) fail(line, "DEALT needs a name and two cards");
      auto cs = cards_of(w, 2, line);
      if (cs.size() != 2) fail(line, "DEALT needs exactly two cards");
      if (!hand_.hole.emplace(std::string(w[1]), std::array<Card, 2>{cs[0], cs[1]}).second)
        fail(line, "cards dealt twice to " + std::string(w[1]));
    } else if (key == "FLOP" || key == "TURN" || key == "RIVER") {
      const Street next = key == "FLOP" ? Street::kFlop : key == "TURN" ? Street::kTurn : Street::kRiver;
      if (static_cast<int>(next) != static_cast<int>(street_) + 1) fail(line, std::string(key) + " out of order");
      auto cs = cards_of(w, 1, line);
      if (cs.size() != (next == Street::kFlop ? 3u : 1u)) fail(line, "wrong number of board cards");
      hand_.board.insert(hand_.board.end(), cs.begin(), cs.end());
      street_ = next;
    } else {
      action(w, line);
    }
  }

  StructuredHand finish(int line) {
    if (!bb_) fail(line, "missing BLINDS");
    if (seats_.size() < 2 || seats_.size() > 3) fail(line, "need 2 or 3 seats");
    if (!button_) fail(line, "missing BUTTON");
    if (hand_.hole.empty()) fail(line, "no dealt hole cards");
    std::sort(seats_.begin(), seats_.end(), [](const RawSeat& a, const RawSeat& b) { return a.number < b.number; });
    auto btn = std::find_if(seats_.begin(), seats_.end(), [&](const RawSeat& s) { return s.number == *button_; });
    if (btn == seats_.end()) fail(line, "button seat is empty");
    std::rotate(seats_.begin(), btn, seats_.end());

    const std::int64_t sb = ratio_tenths(*sb_, *bb_);
    if (sb > 10) fail(line, "small blind larger than big blind");
    hand_.blinds = BlindLevel{Chips::tenths(sb), Chips::tenths(10)};
    for (const RawSeat& s : seats_) {
      const std::int64_t t = ratio_tenths(s.stack, *bb_);
      if (t <= 0) fail(line, "stack of " + s.name + " rounds to zero");
      hand_.seats.push_back({s.name, Chips::tenths(t)});
    }

    std::uint64_t seen = 0;
    auto claim = [&](const Card& c) {
      if (seen & (1ULL << c.index())) fail(line, "duplicate card " + c.str());
      seen |= 1ULL << c.index();
    };
    for (const auto& [name, cards] : hand_.hole) {
      if (!hand_.seat_index(name)) fail(line, "cards dealt to unseated " + name);
      claim(cards[0]);
      claim(cards[1]);
    }
    for (const Card& c : hand_.board) claim(c);

    for (const RawAction& a : actions_) {
      if (!hand_.seat_index(a.actor)) fail(a.line, "unknown player " + a.actor);
      const std::int64_t amt = ratio_tenths(a.amount, *bb_);
      if ((a.kind == RawKind::kBet || a.kind == RawKind::kRaise) && amt <= 0) fail(a.line, "amount rounds to zero");
      ActionToken t = ActionToken::fold();
      switch (a.kind) {
        case RawKind::kFold: t = ActionToken::fold(); break;
        case RawKind::kCheck: t = ActionToken::check(); break;
        case RawKind::kCall: t = ActionToken::call(); break;
        case RawKind::kAllIn: t = ActionToken::allin(); break;
        case RawKind::kBet: t = ActionToken::bet(Chips::tenths(amt)); break;
        case RawKind::kRaise: t = ActionToken::raise_to(Chips::tenths(amt)); break;
      }
      hand_.actions.push_back({a.street, a.actor, t, a.line});
    }
    return std::move(hand_);
  }

 private:
  [[noreturn]] static void fail(int line, std::string msg) { throw ParseFailure{line, std::move(msg)}; }

  static Decimal money(std::string_view s, int line) {
    auto d = parse_money(s);
    if (!d) fail(line, "bad amount '" + std::string(s) + "'");
    return *d;
  }

  static std::vector<Card> cards_of(const std::vector<std::string_view>& w, std::size_t from, int line) {
    std::string joined;
    for (std::size_t i = from; i < w.size(); ++i) joined += w[i];
    auto cs = parse_cards(joined);
    if (!cs) fail(line, "bad cards '" + joined + "'");
    return *cs;
  }

  void action(const std::vector<std::string_view>& w, int line) {
    if (w.size() < 2) fail(line, "unrecognized line");
    const std::string_view verb = w[1];
    RawAction a{street_, std::string(w[0]), RawKind::kFold, {}, line};
    auto last_amount = [&] {
      if (w.size() < 3) fail(line, std::string(verb) + " needs an amount");
      return money(w.back(), line);
    };
    if (verb == "posts") return;
    if (verb == "folds") a.kind = RawKind::kFold;
    else if (verb == "checks") a.kind = RawKind::kCheck;
    else if (verb == "calls") a.kind = RawKind::kCall;
    else if (verb == "allin" || verb == "all-in") a.kind = RawKind::kAllIn;
    else if (verb == "bets") {
      a.kind = RawKind::kBet;
      a.amount = last_amount();
    } else if (verb == "raises") {
      a.kind = RawKind::kRaise;
      a.amount = last_amount();
    } else {
      fail(line, "unrecognized line");
    }
    actions_.push_back(std::move(a));
  }

  StructuredHand hand_;
  std::optional<Decimal> sb_, bb_;
  std::optional<int> button_;
  std::vector<RawSeat> seats_;
  std::vector<RawAction> actions_;
  Street street_ = Street::kPreflop;
};

Role role_for(std::size_t index, std::size_t seats) {
  if (seats == 2) return index == 0 ? Role::kSb : Role::kBb;
  return index == 0 ? Role::kBtn : index == 1 ? Role::kSb : Role::kBb;
}

}  // namespace

Role StructuredHand::role_at(std::size_t index) const { return role_for(index, seats.size()); }

std::optional<std::size_t> StructuredHand::seat_index(std::string_view name) const {
  for (std::size_t i = 0; i < seats.size(); ++i)
    if (seats[i].name == name) return i;
  return std::nullopt;
}

ParseResult parse_history(std::string_view text) {
  ParseResult out;
  std::optional<BlockBuilder> block;
  bool broken = false;
  int line_no = 0;
  auto report = [&](int line, const std::string& id, std::string msg) {
    out.diagnostics.push_back({line, id, std::move(msg)});
  };

  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto w = words(line);
    if (w.empty() || w[0].front() == '#') continue;

    if (w[0] == "HAND") {
      if (block) {
        if (!broken) report(line_no, block->id(), "hand not terminated by END");
        ++out.skipped;
      }
      block.emplace(w.size() > 1 ? std::string(w[1]) : std::string(), line_no);
      broken = w.size() != 2;
      if (broken) report(line_no, "", "HAND needs exactly one identifier");
      continue;
    }
    if (!block) {
      report(line_no, "", "line outside a hand block");
      continue;
    }
    if (w[0] == "END") {
      if (!broken) {
        try {
          out.hands.push_back(block->finish(line_no));
        } catch (const ParseFailure& f) {
          report(f.line, block->id(), f.message);
          broken = true;
        }
      }
      if (broken) ++out.skipped;
      block.reset();
      continue;
    }
    if (broken) continue;
    try {
      block->add(w, line_no);
    } catch (const ParseFailure& f) {
      report(f.line, block->id(), f.message);
      broken = true;
    }
  }
  if (block) {
    if (!broken) report(line_no, block->id(), "hand not terminated by END");
    ++out.skipped;
  }
  return out;
}

StructuredHand anonymize(const StructuredHand& hand) {
  StructuredHand out = hand;
  std::unordered_map<std::string, std::string> label;
  for (std::size_t i = 0; i < hand.seats.size(); ++i) {
    label[hand.seats[i].name] = role_name(hand.role_at(i));
    out.seats[i].name = label[hand.seats[i].name];
  }
  out.hole.clear();
  for (const auto& [name, cards] : hand.hole) out.hole[label.at(name)] = cards;
  for (HistoryAction& a : out.actions) a.actor = label.at(a.actor);
  return out;
}

std::string scenario_tag(const TableState& state) {
  if (state.num_seats() == 2) return "HU";
  bool live[3] = {false, false, false};
  int n = 0;
  for (const Seat& s : state.seats()) {
    if (!s.folded) {
      live[static_cast<int>(s.role)] = true;
      ++n;
    }
  }
  if (n == 3) return "3way";
  if (live[static_cast<int>(Role::kSb)] && live[static_cast<int>(Role::kBb)]) return "SBvBB";
  if (live[static_cast<int>(Role::kSb)]) return "SBvBTN";
  return "BBvBTN";
}

std::vector<DecisionRecord> to_records(const StructuredHand& hand, Role hero, const std::string& source) {
  const std::size_t n = hand.seats.size();
  std::optional<std::size_t> hero_seat;
  for (std::size_t i = 0; i < n; ++i)
    if (hand.role_at(i) == hero) hero_seat = i;
  if (!hero_seat) throw ReplayError("no " + role_name(hero) + " seat in hand " + hand.hand_id);
  auto hole = hand.hole.find(hand.seats[*hero_seat].name);
  if (hole == hand.hole.end()) throw ReplayError("hero cards unknown in hand " + hand.hand_id);

  std::vector<std::optional<Card>> slots(2 * n);
  const std::size_t k = (*hero_seat + n - 1) % n;
  slots[2 * k] = hole->second[0];
  slots[2 * k + 1] = hole->second[1];
  for (const Card& c : hand.board) slots.push_back(c);

  HandConfig cfg;
  for (const HistorySeat& s : hand.seats) cfg.stacks.push_back(s.stack);
  cfg.blinds = hand.blinds;
  TableState state = TableState::deal(cfg, deck_from_slots(slots));

  std::vector<DecisionRecord> out;
  for (const HistoryAction& a : hand.actions) {
    auto fail = [&](const std::string& why) {
      throw ReplayError("hand " + hand.hand_id + " line " + std::to_string(a.line) + ": " + why);
    };
    if (state.settled()) fail("action after the hand ended");
    if (a.street != state.street()) fail("action on " + street_name(a.street) + " but play is on " + street_name(state.street()));
    const Role role = hand.role_at(*hand.seat_index(a.actor));
    if (state.to_act() != role) fail(role_name(role) + " acts out of turn");

    ActionToken token = a.token;
    const Seat& seat = state.seat(state.seat_of(role));
    if (token.sized() && token.amount() >= seat.committed_street + seat.stack) token = ActionToken::allin();

    std::optional<DecisionRecord> rec;
    if (role == hero) rec = DecisionRecord{encode_prompt(state, hero), token, source, scenario_tag(state), hand.hand_id};
    try {
      state.apply(role, token);
    } catch (const IllegalActionError& e) {
      fail(e.what());
    }
    if (rec) {
      rec->truth = state.history().back().token;
      out.push_back(std::move(*rec));
    }
  }
  if (!state.settled()) throw ReplayError("hand " + hand.hand_id + " ends mid-betting");
  return out;
}

IngestResult ingest(std::string_view text, std::string_view hero, const std::string& source) {
  IngestResult out;
  ParseResult parsed = parse_history(text);
  out.diagnostics = std::move(parsed.diagnostics);
  out.skipped = parsed.skipped;
  const std::optional<Role> hero_role = parse_role(hero);

  for (const StructuredHand& hand : parsed.hands) {
    std::vector<Role> heroes;
    if (hero.empty()) {
      for (std::size_t i = 0; i < hand.seats.size(); ++i)
        if (hand.hole.count(hand.seats[i].name)) heroes.push_back(hand.role_at(i));
    } else if (hero_role) {
      heroes.push_back(*hero_role);
    } else if (auto i = hand.seat_index(hero)) {
      heroes.push_back(hand.role_at(*i));
    } else {
      out.diagnostics.push_back({hand.line, hand.hand_id, "hero not seated"});
      ++out.skipped;
      continue;
    }
    const StructuredHand anon = anonymize(hand);
    try {
      std::vector<DecisionRecord> recs;
      for (Role r : heroes) {
        auto more = to_records(anon, r, source);
        recs.insert(recs.end(), more.begin(), more.end());
      }
      out.records.insert(out.records.end(), recs.begin(), recs.end());
      ++out.hands;
    } catch (const ReplayError& e) {
      out.diagnostics.push_back({hand.line, hand.hand_id, e.what()});
      ++out.skipped;
    }
  }
  return out;
}

std::string record_to_json(const DecisionRecord& r) {
  nlohmann::ordered_json j;
  j["prompt"] = r.prompt;
  j["truth"] = r.truth.str();
  j["source"] = r.source;
  j["scenario"] = r.scenario ? nlohmann::ordered_json(*r.scenario) : nlohmann::ordered_json(nullptr);
  j["hand_id"] = r.hand_id;
  return j.dump();
}

DecisionRecord record_from_json(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad record: ") + e.what());
  }
  if (!j.is_object() || !j.contains("prompt") || !j.contains("truth") || !j["prompt"].is_string() ||
      !j["truth"].is_string())
    throw std::invalid_argument("record needs string prompt and truth");
  DecisionRecord r;
  r.prompt = j["prompt"].get<std::string>();
  try {
    r.truth = parse_action(j["truth"].get<std::string>());
  } catch (const ActionParseError& e) {
    throw std::invalid_argument(e.what());
  }
  r.source = j.value("source", "");
  if (j.contains("scenario") && j["scenario"].is_string()) r.scenario = j["scenario"].get<std::string>();
  if (j.contains("hand_id")) r.hand_id = j["hand_id"].is_string() ? j["hand_id"].get<std::string>() : j["hand_id"].dump();
  return r;
}

void write_jsonl(std::ostream& out, std::span<const DecisionRecord> records) {
  for (const DecisionRecord& r : records) out << record_to_json(r) << '\n';
}

std::vector<DecisionRecord> read_jsonl(std::istream& in) {
  std::vector<DecisionRecord> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::vector<DecisionRecord>> split(std::span<const DecisionRecord> records,
                                               std::span<const double> ratios, std::uint64_t seed) {
  if (records.empty()) throw std::invalid_argument("nothing to split");
  if (ratios.empty()) throw std::invalid_argument("no ratios");
  double sum = 0;
  for (double r : ratios) {
    if (!(r >= 0)) throw std::invalid_argument("ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("ratios must sum to 1");

  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> part;
  for (const DecisionRecord& r : records)
    if (part.emplace(r.hand_id, 0).second) ids.push_back(r.hand_id);

  Rng rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);

  double cum = 0;
  std::size_t from = 0;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    cum += ratios[k];
    const std::size_t to = k + 1 == ratios.size() ? ids.size()
                                                  : std::min(ids.size(), static_cast<std::size_t>(std::llround(cum * ids.size())));
    for (std::size_t i = from; i < to; ++i) part[ids[i]] = k;
    from = std::max(from, to);
  }

  std::vector<std::vector<DecisionRecord>> out(ratios.size());
  for (const DecisionRecord& r : records) out[part[r.hand_id]].push_back(r);
  return out;
}

}  // namespace spingo
