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

#include "spingo/arena.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "parallel.h"
#include "spingo/rng.h"

namespace spingo {
namespace {

// A hand needs at most a few dozen actions; anything past this is a loop.
constexpr int kMaxActionsPerHand = 400;

ActionToken ask(Agent& agent, const TableState& st, Role role) {
  const AgentView view = make_view(st, role);
  ActionToken a = ActionToken::fold();
  try {
    a = agent.decide(view);
  } catch (const std::exception& e) {
    throw ArenaError("agent " + agent.name() + " failed: " + e.what());
  }
  if (!view.legal.allows(a))
    throw ArenaError("agent " + agent.name() + " chose illegal " + a.str() + "; legal: " + view.legal.str());
  return a;
}

// Drives the hand in `st` to settlement; `agent_of` maps a seat to its agent.
template <typename StateFn, typename ApplyFn, typename AgentFn>
void drive(StateFn&& state, ApplyFn&& apply, AgentFn&& agent_of) {
  for (int n = 0; state().in_betting(); ++n) {
    if (n >= kMaxActionsPerHand) throw ArenaError("hand did not finish");
    const TableState& st = state();
    const Role role = *st.to_act();
    const int seat = st.seat_of(role);
    apply(role, ask(agent_of(seat), st, role));
  }
}

double mean(std::span<const double> xs) {
  // Sorted summation so the result does not depend on input order.
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> xs) {
  const double m = mean(xs);
  std::vector<double> sq;
  sq.reserve(xs.size());
  for (double x : xs) sq.push_back((x - m) * (x - m));
  std::sort(sq.begin(), sq.end());
  const double ss = std::accumulate(sq.begin(), sq.end(), 0.0);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

void summarize(MatchResult& r, bool paired) {
  const std::size_t n_agents = r.agents.size();
  r.bb_per_100.assign(n_agents, 0.0);
  r.ci95_halfwidth.assign(n_agents, 0.0);
  for (std::size_t a = 0; a < n_agents; ++a) {
    const std::vector<double> w = r.winnings_bb(a);
    if (w.empty()) continue;
    // Chip totals are exact, so a break-even agent reports exactly 0.
    std::int64_t total = 0;
    for (const auto& row : r.net) total += row[a].raw();
    r.bb_per_100[a] = 100.0 * static_cast<double>(total) /
                      (static_cast<double>(r.big_blind.raw()) * static_cast<double>(w.size()));
    const std::size_t min_n = paired ? 4 : 2;
    if (w.size() >= min_n) r.ci95_halfwidth[a] = ci95(w, paired);
  }
}

}  // namespace

std::string mode_name(MatchMode m) { return m == MatchMode::kCashHu ? "cash-hu" : "spin"; }

std::vector<double> MatchResult::winnings_bb(std::size_t agent) const {
  std::vector<double> out;
  out.reserve(net.size());
  const double bb = static_cast<double>(big_blind.raw());
  for (const auto& row : net) out.push_back(static_cast<double>(row.at(agent).raw()) / bb);
  return out;
}

double bb_per_100(std::span<const double> winnings) {
  if (winnings.empty()) throw std::invalid_argument("bb_per_100 needs at least one hand");
  return 100.0 * mean(winnings);
}

double ci95(std::span<const double> winnings, bool paired) {
  if (!paired) {
    if (winnings.size() < 2) throw std::invalid_argument("ci95 needs at least two hands");
    return 1.96 * sample_sd(winnings) / std::sqrt(static_cast<double>(winnings.size())) * 100.0;
  }
  if (winnings.size() % 2 != 0) throw std::invalid_argument("paired ci95 needs an even number of hands");
  if (winnings.size() < 4) throw std::invalid_argument("paired ci95 needs at least two pairs");
  std::vector<double> pairs;
  pairs.reserve(winnings.size() / 2);
  for (std::size_t i = 0; i < winnings.size(); i += 2) pairs.push_back((winnings[i] + winnings[i + 1]) / 2.0);
  return 1.96 * sample_sd(pairs) / std::sqrt(static_cast<double>(pairs.size())) * 100.0;
}

void play_hand(TableState& state, std::span<Agent* const> agent_for_seat) {
  if (static_cast<int>(agent_for_seat.size()) != state.num_seats())
    throw std::invalid_argument("one agent per seat required");
  drive([&]() -> const TableState& { return state; }, [&](Role r, const ActionToken& a) { state.apply(r, a); },
        [&](int seat) -> Agent& { return *agent_for_seat[seat]; });
}

MatchResult run_cash_match(const AgentPtr& a, const AgentPtr& b, std::size_t n_deals, const CashConfig& config) {
  if (!a || !b) throw std::invalid_argument("both agents are required");
  if (n_deals < 1) throw std::invalid_argument("a match needs at least one deal");
  if (config.stack <= config.blinds.bb) throw std::invalid_argument("stack must exceed the big blind");

  MatchResult r;
  r.mode = MatchMode::kCashHu;
  r.agents = {a->name(), b->name()};
  r.master_seed = config.seed;
  r.duplicate = config.duplicate;
  r.big_blind = config.blinds.bb;
  const std::size_t n_hands = config.duplicate ? 2 * n_deals : n_deals;
  r.net.assign(n_hands, std::vector<Chips>(2));

  // Seat 0 holds the button every hand; the agents trade seats, so each one
  // alternates between button and big blind. Cards are dealt by position, so
  // a mirrored hand hands the same cards to the other agent.
  detail::parallel_for(n_hands, config.threads, [&](std::size_t h) {
    const std::size_t deal = config.duplicate ? h / 2 : h;
    const std::uint64_t seed = derive_seed(config.seed, deal);
    const bool a_on_button = h % 2 == 0;
    HandConfig hc;
    hc.stacks = {config.stack, config.stack};
    hc.blinds = config.blinds;
    hc.button = 0;
    hc.hand_no = static_cast<int>(h) + 1;
    hc.players = a_on_button ? std::vector<int>{0, 1} : std::vector<int>{1, 0};
    TableState st = TableState::deal(hc, shuffled_deck(seed), seed);
    Agent* seats[2] = {a_on_button ? a.get() : b.get(), a_on_button ? b.get() : a.get()};
    play_hand(st, seats);
    const std::vector<Chips> won = st.net_winnings();
    for (int s = 0; s < 2; ++s) r.net[h][st.seat(s).player] = won[s];
  });

  summarize(r, config.duplicate);
  return r;
}

MatchResult run_spin_and_go(const std::array<AgentPtr, 3>& agents, std::size_t n_tournaments,
                            const SpinConfig& config) {
  for (const AgentPtr& p : agents)
    if (!p) throw std::invalid_argument("three agents are required");
  if (n_tournaments < 1) throw std::invalid_argument("at least one tournament is required");
  if (config.rotate_seats && n_tournaments % 3 != 0)
    throw std::invalid_argument("seat rotation needs a multiple of 3 tournaments");

  struct Played {
    std::vector<std::vector<Chips>> net;
    int winner = -1;
  };
  std::vector<Played> played(n_tournaments);

  detail::parallel_for(n_tournaments, config.threads, [&](std::size_t t) {
    const std::size_t group = config.rotate_seats ? t / 3 : t;
    const int shift = config.rotate_seats ? static_cast<int>(t % 3) : 0;
    auto agent_of_player = [shift](int p) { return (p + shift) % 3; };

    TournamentConfig tc;
    tc.starting_stack = config.starting_stack;
    tc.schedule = config.schedule;
    tc.seed = derive_seed(config.seed, group);
    tc.players = 3;
    Tournament tour(tc);
    Played& out = played[t];
    for (;;) {
      drive([&]() -> const TableState& { return tour.hand(); },
            [&](Role r, const ActionToken& a) { tour.apply(r, a); },
            [&](int seat) -> Agent& { return *agents[agent_of_player(tour.hand().seat(seat).player)]; });
      const TableState& st = tour.hand();
      std::vector<Chips> row(3);
      const std::vector<Chips> won = st.net_winnings();
      for (int s = 0; s < st.num_seats(); ++s) row[agent_of_player(st.seat(s).player)] += won[s];
      out.net.push_back(std::move(row));
      if (tour.finished()) break;
      if (tour.hand_no() >= config.max_hands) throw ArenaError("tournament exceeded the hand limit");
      tour.next_hand();
    }
    out.winner = agent_of_player(tour.winner());
  });

  MatchResult r;
  r.mode = MatchMode::kSpinAndGo;
  for (const AgentPtr& p : agents) r.agents.push_back(p->name());
  r.master_seed = config.seed;
  r.duplicate = config.rotate_seats;
  r.big_blind = config.schedule.at_hand(1).bb;
  std::vector<std::size_t> wins(3, 0);
  for (Played& p : played) {
    r.tournament_winner.push_back(p.winner);
    r.tournament_hands.push_back(p.net.size());
    ++wins[p.winner];
    for (auto& row : p.net) r.net.push_back(std::move(row));
  }
  for (std::size_t w : wins) r.win_rate.push_back(static_cast<double>(w) / static_cast<double>(n_tournaments));
  // Rotated tournaments differ in length, so hands do not pair up.
  summarize(r, false);
  return r;
}

std::string match_json(const MatchResult& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["mode"] = mode_name(r.mode);
  j["agents"] = r.agents;
  j["rng"] = kRngName;
  j["master_seed"] = r.master_seed;
  j["duplicate"] = r.duplicate;
  j["big_blind"] = format_amount(r.big_blind);
  j["n_hands"] = r.n_hands();
  j["bb_per_100"] = r.bb_per_100;
  j["ci95_halfwidth"] = r.ci95_halfwidth;
  if (r.mode == MatchMode::kSpinAndGo) {
    j["n_tournaments"] = r.tournament_winner.size();
    j["win_rate"] = r.win_rate;
    j["tournament_winner"] = r.tournament_winner;
    j["tournament_hands"] = r.tournament_hands;
  }
  ordered_json rows = ordered_json::array();
  for (std::size_t h = 0; h < r.net.size(); ++h) {
    ordered_json row = ordered_json::array();
    for (const Chips& c : r.net[h]) row.push_back(static_cast<double>(c.raw()) / static_cast<double>(r.big_blind.raw()));
    rows.push_back(std::move(row));
  }
  j["winnings"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string match_text(const MatchResult& r) {
  std::ostringstream os;
  os << mode_name(r.mode) << (r.duplicate ? " (duplicate)" : "") << ", " << r.n_hands() << " hands, seed "
     << r.master_seed << "\n";
  char buf[128];
  for (std::size_t a = 0; a < r.agents.size(); ++a) {
    std::snprintf(buf, sizeof buf, "  %-24s %+9.2f +/- %.2f BB/100", r.agents[a].c_str(), r.bb_per_100[a],
                  r.ci95_halfwidth[a]);
    os << buf;
    if (!r.win_rate.empty()) {
      std::snprintf(buf, sizeof buf, "  wins %.1f%%", 100.0 * r.win_rate[a]);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace spingo
