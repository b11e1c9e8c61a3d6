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

#include "spingo/service.h"

#include <cmath>
#include <random>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "spingo/arena.h"
#include "spingo/codec.h"
#include "spingo/rng.h"
#include "spingo/tournament.h"

namespace spingo {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Carries an HTTP status out of request handling.
struct ApiError {
  int status;
  std::string code;
  std::string message;
  std::optional<ordered_json> legal;
};

[[noreturn]] void fail(int status, std::string code, std::string message) {
  throw ApiError{status, std::move(code), std::move(message), std::nullopt};
}

ServiceResponse respond(int status, const ordered_json& j) { return {status, j.dump()}; }

ServiceResponse error_response(const ApiError& e) {
  ordered_json j;
  j["code"] = e.code;
  j["message"] = e.message;
  if (e.legal) j["legal_actions"] = *e.legal;
  return respond(e.status, j);
}

// Runs `fn`, turning thrown ApiErrors and stray exceptions into responses.
template <typename Fn>
ServiceResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ApiError& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return error_response({500, "internal", e.what(), std::nullopt});
  }
}

json parse_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(400, "bad_request", "body must be a JSON object");
  return j;
}

Chips chips_field(const json& obj, const char* key, Chips fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(400, "bad_request", std::string(key) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x <= 0 || x > 1e9) fail(422, "invalid_config", std::string(key) + " out of range");
  const Chips c = Chips::tenths(std::llround(x * 10));
  if (c <= kZeroChips) fail(422, "invalid_config", std::string(key) + " rounds to zero");
  return c;
}

std::int64_t int_field(const json& obj, const char* key, std::int64_t fallback, std::int64_t lo, std::int64_t hi) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(400, "bad_request", std::string(key) + " must be an integer");
  const std::int64_t x = v.get<std::int64_t>();
  if (x < lo || x > hi) fail(422, "invalid_config", std::string(key) + " out of range");
  return x;
}

double num(Chips c) { return static_cast<double>(c.raw()) / 10.0; }

ordered_json cards_json(std::span<const Card> cards) {
  ordered_json a = ordered_json::array();
  for (const Card& c : cards) a.push_back(c.str());
  return a;
}

ordered_json legal_json(const LegalActionSet& l, Chips all_in_to) {
  ordered_json j;
  j["fold"] = l.may_fold;
  j["check"] = l.may_check;
  j["call"] = l.call ? ordered_json(num(*l.call)) : ordered_json(nullptr);
  auto range = [](const std::optional<ChipRange>& r) {
    if (!r) return ordered_json(nullptr);
    ordered_json o;
    o["min"] = num(r->min);
    o["max"] = num(r->max);
    return o;
  };
  j["bet"] = range(l.bet);
  j["raise_to"] = range(l.raise_to);
  j["allin"] = l.may_allin ? ordered_json(num(all_in_to)) : ordered_json(nullptr);
  return j;
}

std::string random_token() {
  std::random_device rd;
  std::ostringstream os;
  os << std::hex;
  for (int i = 0; i < 4; ++i) os << static_cast<std::uint32_t>(rd());
  return os.str();
}

std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Seats whose cards are shown at showdown: the best hand of every contested
// pot. Losers muck.
std::vector<int> revealed_seats(const TableState& st) {
  int live = 0;
  for (const Seat& s : st.seats()) live += !s.folded;
  if (live < 2 || st.board().size() != 5) return {};
  std::vector<bool> shown(static_cast<std::size_t>(st.num_seats()), false);
  for (const Pot& pot : st.pots()) {
    if (pot.eligible.size() < 2) continue;
    std::vector<HandRank> ranks;
    HandRank best;
    for (int i : pot.eligible) {
      std::vector<Card> seven(st.board().begin(), st.board().end());
      seven.push_back(st.seat(i).hole[0]);
      seven.push_back(st.seat(i).hole[1]);
      ranks.push_back(evaluate7(seven));
      best = std::max(best, ranks.back());
    }
    for (std::size_t k = 0; k < ranks.size(); ++k)
      if (ranks[k] == best) shown[static_cast<std::size_t>(pot.eligible[k])] = true;
  }
  std::vector<int> out;
  for (int i = 0; i < st.num_seats(); ++i)
    if (shown[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tables

struct Slot {
  bool human = false;
  std::string spec;
  AgentPtr agent;
  std::string token;
};

struct Snapshot {
  TableState hand;
  bool finished = false;
  int winner = -1;
  std::shared_ptr<const std::vector<ordered_json>> events;
};

class Service::Table {
 public:
  Table(std::string id, bool tournament, std::vector<Slot> slots, std::uint64_t seed, int max_hands, Chips stack,
        BlindLevel blinds, int hands_per_level)
      : id_(std::move(id)),
        tournament_(tournament),
        slots_(std::move(slots)),
        seed_(seed),
        max_hands_(max_hands),
        stack_(stack),
        blinds_(blinds),
        hands_per_level_(hands_per_level) {
    std::lock_guard lock(mu_);
    start_hand();
    advance();
    publish();
  }

  const std::string& id() const { return id_; }
  bool tournament() const { return tournament_; }
  const std::vector<Slot>& slots() const { return slots_; }

  std::shared_ptr<const Snapshot> snapshot() const {
    std::lock_guard lock(snap_mu_);
    return snap_;
  }

  std::vector<TableState> hand_log() const {
    std::lock_guard lock(mu_);
    std::vector<TableState> out = log_;
    if (!finished_) out.push_back(hand());
    return out;
  }

  // Applies a human action and lets the agents answer.
  void submit(int seat, const std::string& text, const std::string& token, std::optional<std::uint64_t> seq) {
    std::lock_guard lock(mu_);
    check_human(seat, token);
    if (finished_) fail(409, "table_finished", "the table has finished; no actions accepted");
    if (seq && *seq != events_.size())
      fail(409, "stale", "expected seq " + std::to_string(events_.size()) + ", got " + std::to_string(*seq));
    const TableState& st = hand();
    const int to_act = st.in_betting() ? st.seat(st.to_act_seat()).player : -1;
    if (to_act != seat) fail(409, "out_of_turn", "seat " + std::to_string(seat) + " is not to act");
    const Role role = *st.to_act();
    const LegalActionSet legal = st.legal_actions();
    const ordered_json legal_j = legal_json(legal, capacity(st, st.to_act_seat()));
    ActionToken action = ActionToken::fold();
    try {
      action = parse_action(text);
    } catch (const std::exception& e) {
      throw ApiError{422, "unparseable_action", e.what(), legal_j};
    }
    if (!legal.allows(action))
      throw ApiError{422, "illegal_action", action.str() + " is not legal here", legal_j};
    apply(role, action);
    try {
      advance();
    } catch (...) {
      publish();
      throw;
    }
    publish();
  }

  void check_human(int seat, const std::string& token) const {
    if (seat < 0 || seat >= static_cast<int>(slots_.size())) fail(404, "unknown_seat", "no such seat");
    const Slot& s = slots_[static_cast<std::size_t>(seat)];
    if (!s.human) fail(403, "not_human", "seat " + std::to_string(seat) + " is played by an agent");
    if (token != s.token) fail(403, "bad_seat_token", "seat token missing or wrong");
  }

 private:
  static Chips capacity(const TableState& st, int seat) {
    return st.seat(seat).committed_street + st.seat(seat).stack;
  }

  const TableState& hand() const { return tour_ ? tour_->hand() : *cash_; }

  void emit(ordered_json e) {
    ordered_json out;
    out["seq"] = events_.size() + 1;
    for (auto& [k, v] : e.items()) out[k] = v;
    events_.push_back(std::move(out));
  }

  void start_hand() {
    if (tournament_) {
      if (!tour_) {
        TournamentConfig tc;
        tc.starting_stack = stack_;
        tc.schedule = BlindSchedule{{blinds_}, hands_per_level_, true};
        tc.seed = seed_;
        tc.players = static_cast<int>(slots_.size());
        tour_.emplace(tc);
      } else {
        tour_->next_hand();
      }
    } else {
      const int n = static_cast<int>(slots_.size());
      HandConfig hc;
      hc.stacks.assign(static_cast<std::size_t>(n), stack_);
      hc.blinds = blinds_;
      hc.hand_no = hands_ + 1;
      hc.button = hands_ % n;
      cash_ = TableState::deal(hc, derive_seed(seed_, static_cast<std::uint64_t>(hc.hand_no)));
    }
    ++hands_;
    const TableState& st = hand();
    ordered_json e;
    e["type"] = "hand_start";
    e["hand_no"] = st.hand_no();
    e["button"] = st.seat(st.button()).player;
    e["blinds"] = {{"sb", num(st.blinds().sb)}, {"bb", num(st.blinds().bb)}};
    ordered_json seats = ordered_json::array();
    for (const Seat& s : st.seats())
      seats.push_back({{"seat", s.player}, {"role", role_name(s.role)}, {"stack", num(s.starting_stack)}});
    e["seats"] = std::move(seats);
    emit(std::move(e));
    // Blinds can put every seat all-in, settling the hand on the deal.
    if (st.settled()) finish_hand();
  }

  void apply(Role role, const ActionToken& action) {
    const std::size_t board_before = hand().board().size();
    const int player = hand().seat(hand().seat_of(role)).player;
    if (tour_) tour_->apply(role, action);
    else cash_->apply(role, action);
    const TableState& st = hand();
    const HistoryEntry& h = st.history().back();
    ordered_json e;
    e["type"] = "action";
    e["hand_no"] = st.hand_no();
    e["seat"] = player;
    e["role"] = role_name(h.role);
    e["street"] = street_name(h.street);
    e["action"] = h.token.str();
    emit(std::move(e));
    // An all-in can run out several streets at once.
    for (std::size_t size = 3; size <= st.board().size(); ++size) {
      if (size <= board_before) continue;
      const std::size_t from = size == 3 ? 0 : size - 1;
      ordered_json b;
      b["type"] = "board";
      b["hand_no"] = st.hand_no();
      b["street"] = size == 3 ? "flop" : size == 4 ? "turn" : "river";
      b["cards"] = cards_json(st.board().subspan(from, size - from));
      emit(std::move(b));
    }
    if (st.settled()) finish_hand();
  }

  void finish_hand() {
    const TableState& st = hand();
    ordered_json e;
    e["type"] = "hand_end";
    e["hand_no"] = st.hand_no();
    const std::vector<Chips> net = st.net_winnings();
    ordered_json nets = ordered_json::array();
    for (int i = 0; i < st.num_seats(); ++i) nets.push_back({{"seat", st.seat(i).player}, {"net", num(net[i])}});
    e["net"] = std::move(nets);
    ordered_json shown = ordered_json::array();
    for (int i : revealed_seats(st))
      shown.push_back({{"seat", st.seat(i).player}, {"cards", cards_json(st.seat(i).hole)}});
    e["showdown"] = std::move(shown);
    emit(std::move(e));
    log_.push_back(st);

    if (tour_ ? tour_->finished() : hands_ >= max_hands_) {
      finished_ = true;
      ordered_json end;
      end["type"] = "table_end";
      if (tour_) {
        winner_ = tour_->winner();
        end["winner"] = winner_;
      }
      end["hands"] = hands_;
      emit(std::move(end));
    }
  }

  // Lets agents act until a human must decide or the table is over.
  void advance() {
    for (int guard = 0; guard < 1'000'000; ++guard) {
      if (finished_) return;
      const TableState& st = hand();
      if (st.settled()) {
        start_hand();
        continue;
      }
      const int seat = st.to_act_seat();
      const Slot& slot = slots_[static_cast<std::size_t>(st.seat(seat).player)];
      if (slot.human) return;
      const Role role = *st.to_act();
      const AgentView view = make_view(st, role);
      ActionToken a = ActionToken::fold();
      try {
        a = slot.agent->decide(view);
      } catch (const std::exception&) {
        a = view.legal.may_check ? ActionToken::check() : ActionToken::fold();
      }
      if (!view.legal.allows(a)) a = repair_action(a, view.legal).action;
      apply(role, a);
    }
    throw std::runtime_error("agents did not finish the table");
  }

  void publish() {
    auto snap = std::make_shared<Snapshot>(Snapshot{hand(), finished_, winner_,
                                                    std::make_shared<const std::vector<ordered_json>>(events_)});
    std::lock_guard lock(snap_mu_);
    snap_ = std::move(snap);
  }

  const std::string id_;
  const bool tournament_;
  const std::vector<Slot> slots_;
  const std::uint64_t seed_;
  const int max_hands_;
  const Chips stack_;
  const BlindLevel blinds_;
  const int hands_per_level_;

  mutable std::mutex mu_;
  std::optional<Tournament> tour_;
  std::optional<TableState> cash_;
  int hands_ = 0;
  bool finished_ = false;
  int winner_ = -1;
  std::vector<ordered_json> events_;
  std::vector<TableState> log_;

  mutable std::mutex snap_mu_;
  std::shared_ptr<const Snapshot> snap_;
};

namespace {

ordered_json view_json(const Service::Table& t, const Snapshot& s, std::optional<int> viewer, std::uint64_t since) {
  const TableState& st = s.hand;
  ordered_json j;
  j["table_id"] = t.id();
  j["mode"] = t.tournament() ? "spin" : "cash";
  j["status"] = s.finished ? "finished" : "playing";
  j["seq"] = s.events->size();
  if (s.winner >= 0) j["winner"] = s.winner;
  j["hand_no"] = st.hand_no();
  j["street"] = street_name(st.street());
  j["button"] = st.seat(st.button()).player;
  j["blinds"] = {{"sb", num(st.blinds().sb)}, {"bb", num(st.blinds().bb)}};
  j["board"] = cards_json(st.board());
  j["pot"] = num(st.pot());
  ordered_json seats = ordered_json::array();
  for (std::size_t p = 0; p < t.slots().size(); ++p) {
    const Slot& slot = t.slots()[p];
    ordered_json o;
    o["seat"] = p;
    o["kind"] = slot.human ? "human" : "agent";
    if (!slot.human) o["agent"] = slot.agent->name();
    const Seat* in_hand = nullptr;
    for (const Seat& seat : st.seats())
      if (seat.player == static_cast<int>(p)) in_hand = &seat;
    if (in_hand) {
      o["role"] = role_name(in_hand->role);
      o["stack"] = num(in_hand->stack);
      o["street_bet"] = num(in_hand->committed_street);
      o["committed"] = num(in_hand->committed_total);
      o["folded"] = in_hand->folded;
    } else {
      o["role"] = nullptr;
      o["stack"] = 0;
      o["busted"] = true;
    }
    seats.push_back(std::move(o));
  }
  j["seats"] = std::move(seats);
  const bool betting = st.in_betting() && !s.finished;
  const int to_act = betting ? st.seat(st.to_act_seat()).player : -1;
  j["to_act"] = to_act >= 0 ? ordered_json(to_act) : ordered_json(nullptr);
  ordered_json history = ordered_json::array();
  for (const HistoryEntry& h : st.history())
    history.push_back({{"street", street_name(h.street)}, {"role", role_name(h.role)}, {"action", h.token.str()}});
  j["history"] = std::move(history);
  if (viewer) {
    ordered_json you;
    you["seat"] = *viewer;
    you["hole"] = ordered_json::array();
    for (int i = 0; i < st.num_seats(); ++i) {
      if (st.seat(i).player != *viewer) continue;
      you["hole"] = cards_json(st.seat(i).hole);
      if (to_act == *viewer) {
        you["legal_actions"] =
            legal_json(st.legal_actions(), st.seat(i).committed_street + st.seat(i).stack);
      }
    }
    j["you"] = std::move(you);
  }
  ordered_json events = ordered_json::array();
  for (std::size_t k = static_cast<std::size_t>(std::min<std::uint64_t>(since, s.events->size()));
       k < s.events->size(); ++k)
    events.push_back((*s.events)[k]);
  j["events"] = std::move(events);
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Matches

struct Service::Match {
  std::mutex mu;
  std::string status = "running";
  std::string result;  // match_json output once done
  std::string error;
};

Service::Service(ServiceOptions options) : options_(std::move(options)) {}

Service::~Service() {
  for (std::thread& t : workers_)
    if (t.joinable()) t.join();
}

std::shared_ptr<Service::Table> Service::find_table(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = tables_.find(id);
  if (it == tables_.end()) fail(404, "unknown_table", "no table " + id);
  return it->second;
}

ServiceResponse Service::create_table(const std::string& body) {
  return guarded([&] {
    const json req = parse_body(body);
    const std::string mode = req.value("mode", std::string("cash"));
    if (mode != "cash" && mode != "spin") fail(422, "invalid_config", "mode must be cash or spin");
    const bool tournament = mode == "spin";
    if (!req.contains("seats") || !req["seats"].is_array()) fail(400, "bad_request", "seats must be an array");
    const json& seat_specs = req["seats"];
    if (seat_specs.size() < 2 || seat_specs.size() > 3) fail(422, "invalid_config", "a table seats 2 or 3 players");
    if (tournament && seat_specs.size() != 3) fail(422, "invalid_config", "spin tables seat 3 players");

    std::vector<Slot> slots;
    bool any_human = false;
    for (const json& s : seat_specs) {
      if (!s.is_string()) fail(400, "bad_request", "each seat is \"human\" or an agent spec");
      Slot slot;
      slot.spec = s.get<std::string>();
      if (slot.spec == "human") {
        slot.human = true;
        slot.token = random_token();
        any_human = true;
      } else {
        try {
          slot.agent = options_.agent_factory(slot.spec);
        } catch (const std::exception& e) {
          fail(422, "invalid_agent", e.what());
        }
        if (!slot.agent) fail(422, "invalid_agent", "unknown agent " + slot.spec);
      }
      slots.push_back(std::move(slot));
    }
    const bool spectator = req.value("spectator", false);
    if (!any_human && !spectator) fail(422, "invalid_config", "no human seat; set spectator to watch agents play");

    BlindLevel blinds;
    if (req.contains("blinds")) {
      const json& b = req["blinds"];
      if (!b.is_object()) fail(400, "bad_request", "blinds must be an object");
      blinds.sb = chips_field(b, "sb", blinds.sb);
      blinds.bb = chips_field(b, "bb", blinds.bb);
      if (blinds.bb < blinds.sb) fail(422, "invalid_config", "big blind below small blind");
    }
    const Chips stack = chips_field(req, "stack", Chips::units(tournament ? 25 : 100));
    if (stack <= blinds.bb) fail(422, "invalid_config", "stack must exceed the big blind");
    const int max_hands = static_cast<int>(int_field(req, "hands", any_human ? 1000 : 100, 1, 100000));
    const int per_level = static_cast<int>(int_field(req, "hands_per_level", 10, 1, 10000));
    std::uint64_t seed = random_seed();
    if (req.contains("seed")) {
      if (!req["seed"].is_number_unsigned() && !req["seed"].is_number_integer())
        fail(400, "bad_request", "seed must be an integer");
      seed = req["seed"].get<std::uint64_t>();
    }

    std::string id;
    {
      std::lock_guard lock(mu_);
      id = "t" + std::to_string(next_table_++);
    }
    auto table = std::make_shared<Table>(id, tournament, std::move(slots), seed, max_hands, stack, blinds, per_level);
    {
      std::lock_guard lock(mu_);
      tables_[id] = table;
    }
    ordered_json j;
    j["id"] = id;
    ordered_json seats = ordered_json::array();
    for (std::size_t p = 0; p < table->slots().size(); ++p) {
      const Slot& s = table->slots()[p];
      ordered_json o;
      o["seat"] = p;
      o["kind"] = s.human ? "human" : "agent";
      if (s.human) o["token"] = s.token;
      else o["agent"] = s.agent->name();
      seats.push_back(std::move(o));
    }
    j["seats"] = std::move(seats);
    j["view"] = view_json(*table, *table->snapshot(), std::nullopt, 0);
    return respond(201, j);
  });
}

ServiceResponse Service::get_view(const std::string& table_id, std::optional<int> seat, std::uint64_t since,
                                  const std::string& seat_token) {
  return guarded([&] {
    auto table = find_table(table_id);
    if (seat) table->check_human(*seat, seat_token);
    return respond(200, view_json(*table, *table->snapshot(), seat, since));
  });
}

ServiceResponse Service::submit_action(const std::string& table_id, const std::string& body) {
  return guarded([&] {
    auto table = find_table(table_id);
    const json req = parse_body(body);
    if (!req.contains("seat") || !req["seat"].is_number_integer()) fail(400, "bad_request", "seat required");
    if (!req.contains("action") || !req["action"].is_string()) fail(400, "bad_request", "action required");
    const int seat = req["seat"].get<int>();
    const std::string token = req.value("token", std::string());
    std::optional<std::uint64_t> seq;
    if (req.contains("seq")) {
      if (!req["seq"].is_number_integer()) fail(400, "bad_request", "seq must be an integer");
      seq = req["seq"].get<std::uint64_t>();
    }
    const std::uint64_t before = table->snapshot()->events->size();
    table->submit(seat, req["action"].get<std::string>(), token, seq);
    ordered_json j;
    j["ok"] = true;
    j["view"] = view_json(*table, *table->snapshot(), seat, seq.value_or(before));
    return respond(200, j);
  });
}

std::vector<TableState> Service::hand_log(const std::string& table_id) const {
  std::shared_ptr<Table> t;
  {
    std::lock_guard lock(mu_);
    auto it = tables_.find(table_id);
    if (it == tables_.end()) return {};
    t = it->second;
  }
  return t->hand_log();
}

ServiceResponse Service::create_match(const std::string& body) {
  return guarded([&] {
    const json req = parse_body(body);
    const std::string mode = req.value("mode", std::string("cash-hu"));
    if (mode != "cash-hu" && mode != "spin") fail(422, "invalid_config", "mode must be cash-hu or spin");
    if (!req.contains("agents") || !req["agents"].is_array()) fail(400, "bad_request", "agents must be an array");
    const std::size_t want = mode == "spin" ? 3 : 2;
    if (req["agents"].size() != want)
      fail(422, "invalid_config", mode + " needs " + std::to_string(want) + " agents");
    std::vector<AgentPtr> agents;
    for (const json& s : req["agents"]) {
      if (!s.is_string()) fail(400, "bad_request", "agent specs are strings");
      try {
        agents.push_back(options_.agent_factory(s.get<std::string>()));
      } catch (const std::exception& e) {
        fail(422, "invalid_agent", e.what());
      }
    }
    const auto max = static_cast<std::int64_t>(options_.max_match_hands);
    const std::size_t n = static_cast<std::size_t>(int_field(req, "hands", mode == "spin" ? 3 : 1000, 1, max));
    const bool duplicate = req.value("duplicate", mode == "spin");
    const std::uint64_t seed = req.contains("seed") ? req["seed"].get<std::uint64_t>() : random_seed();
    if (mode == "spin" && duplicate && n % 3 != 0)
      fail(422, "invalid_config", "seat rotation needs a multiple of 3 tournaments");

    std::function<MatchResult()> job;
    if (mode == "cash-hu") {
      CashConfig c;
      c.stack = chips_field(req, "stack", Chips::units(200));
      c.seed = seed;
      c.duplicate = duplicate;
      c.threads = options_.match_threads;
      if (c.stack <= c.blinds.bb) fail(422, "invalid_config", "stack must exceed the big blind");
      job = [a = agents[0], b = agents[1], n, c] { return run_cash_match(a, b, n, c); };
    } else {
      SpinConfig c;
      c.starting_stack = chips_field(req, "stack", Chips::units(25));
      c.seed = seed;
      c.rotate_seats = duplicate;
      c.threads = options_.match_threads;
      job = [ag = std::array<AgentPtr, 3>{agents[0], agents[1], agents[2]}, n, c] {
        return run_spin_and_go(ag, n, c);
      };
    }

    auto match = std::make_shared<Match>();
    std::string id;
    {
      std::lock_guard lock(mu_);
      id = "m" + std::to_string(next_match_++);
      matches_[id] = match;
      workers_.emplace_back([match, job = std::move(job)] {
        std::string result, error;
        try {
          result = match_json(job());
        } catch (const std::exception& e) {
          error = e.what();
        }
        std::lock_guard lock(match->mu);
        match->status = error.empty() ? "done" : "failed";
        match->result = std::move(result);
        match->error = std::move(error);
      });
    }
    ordered_json j;
    j["id"] = id;
    j["status"] = "running";
    return respond(202, j);
  });
}

ServiceResponse Service::get_match(const std::string& match_id) {
  return guarded([&] {
    std::shared_ptr<Match> m;
    {
      std::lock_guard lock(mu_);
      auto it = matches_.find(match_id);
      if (it == matches_.end()) fail(404, "unknown_match", "no match " + match_id);
      m = it->second;
    }
    std::lock_guard lock(m->mu);
    ordered_json j;
    j["id"] = match_id;
    j["status"] = m->status;
    if (!m->result.empty()) j["result"] = ordered_json::parse(m->result);
    if (!m->error.empty()) j["error"] = m->error;
    return respond(200, j);
  });
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

void send(httplib::Response& res, const ServiceResponse& r) {
  res.status = r.status;
  res.set_content(r.body, "application/json");
}

}  // namespace

void mount_routes(httplib::Server& server, Service& service) {
  const std::string token = service.options().api_token;
  server.set_pre_routing_handler([token](const httplib::Request& req, httplib::Response& res) {
    if (token.empty() || req.get_header_value("Authorization") == "Bearer " + token)
      return httplib::Server::HandlerResponse::Unhandled;
    send(res, error_response({401, "unauthorized", "missing or wrong API token", std::nullopt}));
    return httplib::Server::HandlerResponse::Handled;
  });
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"status\":\"ok\"}", "application/json");
  });
  server.Post("/tables", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.create_table(req.body));
  });
  server.Get(R"(/tables/([^/]+)/view)", [&service](const httplib::Request& req, httplib::Response& res) {
    std::optional<int> seat;
    std::uint64_t since = 0;
    try {
      if (req.has_param("seat")) seat = std::stoi(req.get_param_value("seat"));
      if (req.has_param("since")) since = std::stoull(req.get_param_value("since"));
    } catch (const std::exception&) {
      send(res, error_response({400, "bad_request", "seat and since must be integers", std::nullopt}));
      return;
    }
    std::string seat_token = req.get_header_value("X-Seat-Token");
    if (seat_token.empty()) seat_token = req.get_param_value("token");
    send(res, service.get_view(req.matches[1], seat, since, seat_token));
  });
  server.Post(R"(/tables/([^/]+)/actions)", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.submit_action(req.matches[1], req.body));
  });
  server.Post("/matches", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.create_match(req.body));
  });
  server.Get(R"(/matches/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.get_match(req.matches[1]));
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send(res, error_response({res.status, "not_found", "no such endpoint", std::nullopt}));
  });
}

bool serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  mount_routes(server, service);
  return server.listen(host, port);
}

}  // namespace spingo
