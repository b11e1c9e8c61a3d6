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

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "spingo/rng.h"
#include "test_util.h"

namespace spingo {
namespace {

using nlohmann::json;

json body(const ServiceResponse& r) { return json::parse(r.body); }

struct Created {
  std::string id;
  std::vector<std::string> tokens;  // empty for agent seats
  json view;
};

Created create(Service& svc, const json& req) {
  const ServiceResponse r = svc.create_table(req.dump());
  EXPECT_EQ(r.status, 201) << r.body;
  const json j = body(r);
  Created c{j["id"], {}, j["view"]};
  for (const json& s : j["seats"]) c.tokens.push_back(s.value("token", ""));
  return c;
}

json view(Service& svc, const Created& t, std::optional<int> seat, std::uint64_t since = 0) {
  const ServiceResponse r = svc.get_view(t.id, seat, since, seat ? t.tokens[*seat] : "");
  EXPECT_EQ(r.status, 200) << r.body;
  return body(r);
}

ServiceResponse act(Service& svc, const Created& t, int seat, const std::string& action,
                    std::optional<std::uint64_t> seq = std::nullopt) {
  json req{{"seat", seat}, {"action", action}, {"token", t.tokens[seat]}};
  if (seq) req["seq"] = *seq;
  return svc.submit_action(t.id, req.dump());
}

// Oracle: seats holding the best hand of some pot with at least two live
// contributors, ranked with the brute-force evaluator.
std::set<int> oracle_winners(const TableState& st) {
  std::set<int> out;
  int live = 0;
  for (const Seat& s : st.seats()) live += !s.folded;
  if (live < 2) return out;
  std::set<Chips> levels;
  for (const Seat& s : st.seats()) levels.insert(s.committed_total);
  for (Chips level : levels) {
    if (level <= kZeroChips) continue;
    std::vector<int> eligible;
    for (int i = 0; i < st.num_seats(); ++i)
      if (!st.seat(i).folded && st.seat(i).committed_total >= level) eligible.push_back(i);
    if (eligible.size() < 2) continue;
    testing::OracleRank best;
    std::map<int, testing::OracleRank> ranks;
    for (int i : eligible) {
      std::array<Card, 7> seven;
      std::copy(st.board().begin(), st.board().end(), seven.begin());
      seven[5] = st.seat(i).hole[0];
      seven[6] = st.seat(i).hole[1];
      ranks[i] = testing::oracle_best_of_7(seven);
      if (best.empty() || ranks[i] > best) best = ranks[i];
    }
    for (int i : eligible)
      if (ranks[i] == best) out.insert(st.seat(i).player);
  }
  return out;
}

const Seat& seat_of_player(const TableState& st, int player) {
  for (const Seat& s : st.seats())
    if (s.player == player) return s;
  throw std::logic_error("player not dealt in");
}

// Every card string in a response must sit in a field meant for cards and
// agree with the server's own record of the hands.
void check_cards(const json& j, const std::vector<TableState>& hands, std::optional<int> viewer,
                 const std::string& path = "", const TableState* cur = nullptr) {
  auto find_hand = [&](int no) -> const TableState& {
    for (const TableState& h : hands)
      if (h.hand_no() == no) return h;
    throw std::logic_error("unknown hand " + std::to_string(no));
  };
  auto cards_of = [](const json& arr) {
    std::vector<Card> out;
    for (const json& c : arr) out.push_back(*parse_card(c.get<std::string>()));
    return out;
  };
  if (j.is_object()) {
    if (j.contains("table_id")) cur = &find_hand(j["hand_no"]);
    if (j.contains("type") && j.contains("hand_no")) {
      const TableState& h = find_hand(j["hand_no"]);
      const std::string type = j["type"];
      if (type == "board") {
        for (const Card& c : cards_of(j["cards"]))
          EXPECT_NE(std::find(h.board().begin(), h.board().end(), c), h.board().end()) << path;
      }
      if (type == "hand_end") {
        const std::set<int> winners = oracle_winners(h);
        std::set<int> shown;
        for (const json& s : j["showdown"]) {
          shown.insert(s["seat"].get<int>());
          const Seat& seat = seat_of_player(h, s["seat"]);
          EXPECT_EQ(cards_of(s["cards"]), std::vector<Card>(seat.hole.begin(), seat.hole.end()));
        }
        EXPECT_EQ(shown, winners) << "hand " << h.hand_no();
      }
    }
    for (auto& [k, v] : j.items()) {
      const std::string p = path + "/" + k;
      if (k == "cards" || k == "board" || k == "hole") {
        ASSERT_TRUE(v.is_array()) << p;
        if (k == "hole") {
          ASSERT_TRUE(viewer.has_value()) << p;
          ASSERT_NE(cur, nullptr) << p;
          if (!v.empty()) {
            const Seat& seat = seat_of_player(*cur, *viewer);
            EXPECT_EQ(cards_of(v), std::vector<Card>(seat.hole.begin(), seat.hole.end())) << p;
          }
        }
        if (k == "board" && path.find("/events") == std::string::npos) {
          ASSERT_NE(cur, nullptr) << p;
          EXPECT_EQ(cards_of(v), std::vector<Card>(cur->board().begin(), cur->board().end())) << p;
        }
        continue;
      }
      check_cards(v, hands, viewer, p, cur);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_cards(j[i], hands, viewer, path + "/" + std::to_string(i), cur);
  } else if (j.is_string()) {
    const std::string s = j;
    EXPECT_FALSE(s.size() == 2 && parse_card(s).has_value()) << "card " << s << " at " << path;
  }
}

TEST(Tables, HumanVsAgentStartsAtHumanDecision) {
  Service svc;
  const Created t = create(svc, {{"mode", "cash"}, {"seats", {"human", "checkcall"}}, {"seed", 4}});
  const json v = view(svc, t, 0);
  EXPECT_EQ(v["status"], "playing");
  EXPECT_EQ(v["to_act"], 0);
  EXPECT_EQ(v["you"]["hole"].size(), 2u);
  EXPECT_TRUE(v["you"].contains("legal_actions"));
  EXPECT_TRUE(t.view.contains("seats"));
  EXPECT_EQ(t.tokens[1], "");
  check_cards(v, svc.hand_log(t.id), 0);
  check_cards(t.view, svc.hand_log(t.id), std::nullopt);
}

TEST(Tables, SpinWithAgentsReachesHuman) {
  Service svc;
  const Created t = create(svc, {{"mode", "spin"}, {"seats", {"checkcall", "human", "pushfold:8"}}, {"seed", 2}});
  const json v = view(svc, t, 1);
  EXPECT_EQ(v["mode"], "spin");
  EXPECT_EQ(v["to_act"], 1);
  EXPECT_EQ(v["seats"][0]["stack"].get<double>() + v["seats"][1]["stack"].get<double>() +
                v["seats"][2]["stack"].get<double>() + v["pot"].get<double>(),
            75.0);
}

TEST(Tables, CreateErrors) {
  Service svc;
  auto status = [&](const json& req) { return svc.create_table(req.dump()).status; };
  const ServiceResponse bad = svc.create_table(json{{"seats", {"human", "nonsense"}}}.dump());
  EXPECT_EQ(bad.status, 422);
  EXPECT_EQ(body(bad)["code"], "invalid_agent");
  EXPECT_EQ(status({{"seats", {"checkcall", "fold"}}}), 422);
  EXPECT_EQ(status({{"seats", {"human"}}}), 422);
  EXPECT_EQ(status({{"mode", "spin"}, {"seats", {"human", "fold"}}}), 422);
  EXPECT_EQ(status({{"mode", "poker"}, {"seats", {"human", "fold"}}}), 422);
  EXPECT_EQ(status({{"seats", {"human", "fold"}}, {"stack", 0.5}}), 422);
  EXPECT_EQ(status({{"seats", {"human", "fold"}}, {"stack", "lots"}}), 400);
  EXPECT_EQ(svc.create_table("not json").status, 400);
  EXPECT_EQ(svc.create_table("[1,2]").status, 400);
}

TEST(Tables, SpectatorTableAutoPlays) {
  Service svc;
  const Created t =
      create(svc, {{"seats", {"checkcall", "random:3", "allin"}}, {"spectator", true}, {"hands", 7}, {"seed", 9}});
  const json v = view(svc, t, std::nullopt);
  EXPECT_EQ(v["status"], "finished");
  EXPECT_TRUE(v["to_act"].is_null());
  int ends = 0;
  for (const json& e : v["events"]) ends += e["type"] == "hand_end";
  EXPECT_EQ(ends, 7);
  int showdowns = 0;
  for (const json& e : v["events"]) showdowns += e["type"] == "hand_end" && !e["showdown"].empty();
  EXPECT_GT(showdowns, 0);
  EXPECT_EQ(v["events"].back()["type"], "table_end");
  EXPECT_FALSE(v.contains("you"));
  check_cards(v, svc.hand_log(t.id), std::nullopt);
}

TEST(Tables, SinceFiltersEvents) {
  Service svc;
  const Created t = create(svc, {{"seats", {"human", "checkcall"}}, {"seed", 1}});
  const json all = view(svc, t, 0, 0);
  const std::uint64_t last = all["seq"];
  EXPECT_EQ(all["events"].size(), last);
  EXPECT_TRUE(view(svc, t, 0, last)["events"].empty());
  EXPECT_EQ(view(svc, t, 0, last - 1)["events"].size(), 1u);
  EXPECT_TRUE(view(svc, t, 0, last + 50)["events"].empty());
}

// Plays the human seat with `pick` until the table ends; returns responses.
template <typename Pick>
std::vector<json> play_out(Service& svc, const Created& t, int seat, Pick&& pick, int max_actions = 2000) {
  std::vector<json> out;
  for (int i = 0; i < max_actions; ++i) {
    const json v = view(svc, t, seat);
    out.push_back(v);
    if (v["status"] == "finished") break;
    if (v["to_act"] != seat) ADD_FAILURE() << "human not to act while table is playing";
    const ServiceResponse r = act(svc, t, seat, pick(v["you"]["legal_actions"]));
    EXPECT_EQ(r.status, 200) << r.body;
    out.push_back(body(r));
  }
  return out;
}

TEST(Actions, BetAppliedAndIllegalRaiseRejected) {
  Service svc;
  const Created t = create(svc, {{"seats", {"human", "checkcall"}}, {"seed", 12}, {"hands", 3}});
  // Reach a point where the human may check or bet.
  for (int i = 0; i < 50; ++i) {
    const json v = view(svc, t, 0);
    const json& legal = v["you"]["legal_actions"];
    if (legal["check"] == true && !legal["bet"].is_null()) {
      const std::uint64_t seq = v["seq"];
      const ServiceResponse bad = act(svc, t, 0, "r6.5");
      EXPECT_EQ(bad.status, 422);
      const json err = body(bad);
      EXPECT_EQ(err["code"], "illegal_action");
      EXPECT_EQ(err["legal_actions"], legal);
      EXPECT_EQ(view(svc, t, 0)["seq"], seq);
      const ServiceResponse ok = act(svc, t, 0, "b2");
      ASSERT_EQ(ok.status, 200) << ok.body;
      const json after = body(ok);
      bool seen = false;
      for (const json& e : after["view"]["events"]) seen |= e["type"] == "action" && e["seat"] == 0 && e["action"] == "b2";
      EXPECT_TRUE(seen) << after.dump();
      return;
    }
    ASSERT_EQ(act(svc, t, 0, legal["check"] == true ? "x" : "c").status, 200);
  }
  FAIL() << "never reached a check/bet decision";
}

TEST(Actions, Errors) {
  Service svc;
  const Created t = create(svc, {{"seats", {"human", "checkcall"}}, {"seed", 5}, {"hands", 1}});
  EXPECT_EQ(svc.submit_action("nope", R"({"seat":0,"action":"f"})").status, 404);
  EXPECT_EQ(svc.get_view("nope", std::nullopt, 0, "").status, 404);
  EXPECT_EQ(svc.get_view(t.id, 0, 0, "wrong").status, 403);
  EXPECT_EQ(svc.get_view(t.id, 1, 0, "").status, 403);
  EXPECT_EQ(svc.get_view(t.id, 7, 0, "").status, 404);
  EXPECT_EQ(svc.submit_action(t.id, R"({"action":"f"})").status, 400);
  EXPECT_EQ(svc.submit_action(t.id, "{").status, 400);
  json wrong_token{{"seat", 0}, {"action", "f"}, {"token", "x"}};
  EXPECT_EQ(svc.submit_action(t.id, wrong_token.dump()).status, 403);
  const ServiceResponse garbage = act(svc, t, 0, "banana");
  EXPECT_EQ(garbage.status, 422);
  EXPECT_TRUE(body(garbage).contains("legal_actions"));
  EXPECT_EQ(act(svc, t, 0, "f", 999).status, 409);
  // Fold the only hand; the table is then over.
  ASSERT_EQ(act(svc, t, 0, "f").status, 200);
  EXPECT_EQ(view(svc, t, 0)["status"], "finished");
  const ServiceResponse late = act(svc, t, 0, "x");
  EXPECT_EQ(late.status, 409);
  EXPECT_EQ(body(late)["code"], "table_finished");
}

TEST(Actions, OutOfTurnIsConflict) {
  Service svc;
  const Created t = create(svc, {{"seats", {"human", "human"}}, {"seed", 8}});
  const json v = view(svc, t, 0);
  const int waiting = v["to_act"] == 0 ? 1 : 0;
  const ServiceResponse r = act(svc, t, waiting, "c");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(body(r)["code"], "out_of_turn");
}

TEST(Actions, FoldedHandKeepsCardsHidden) {
  Service svc;
  const Created t = create(svc, {{"seats", {"human", "allin"}}, {"seed", 3}, {"hands", 4}});
  const std::vector<json> seen = play_out(svc, t, 0, [](const json&) { return std::string("f"); });
  const json all = view(svc, t, 0);
  for (const json& e : all["events"])
    if (e["type"] == "hand_end") {
      EXPECT_TRUE(e["showdown"].empty());
    }
  for (const json& r : seen) check_cards(r, svc.hand_log(t.id), 0);
}

TEST(Events, GapFreeAndReplayReproducesHands) {
  Service svc;
  const Created t =
      create(svc, {{"mode", "spin"}, {"seats", {"random:1", "pushfold:10", "checkcall"}}, {"spectator", true},
                   {"seed", 31}});
  const json v = view(svc, t, std::nullopt);
  ASSERT_EQ(v["status"], "finished");
  const std::vector<TableState> hands = svc.hand_log(t.id);
  std::uint64_t expect_seq = 1;
  std::optional<TableState> replay;
  std::size_t replayed = 0;
  for (const json& e : v["events"]) {
    EXPECT_EQ(e["seq"], expect_seq++);
    if (e["type"] == "hand_start") {
      const TableState& truth = hands.at(replayed);
      HandConfig hc;
      hc.mode = GameMode::kTournament;
      hc.hand_no = e["hand_no"];
      hc.blinds = BlindLevel{Chips::tenths(std::llround(e["blinds"]["sb"].get<double>() * 10)),
                             Chips::tenths(std::llround(e["blinds"]["bb"].get<double>() * 10))};
      for (const json& s : e["seats"]) {
        if (s["seat"] == e["button"]) hc.button = static_cast<int>(hc.stacks.size());
        hc.stacks.push_back(Chips::tenths(std::llround(s["stack"].get<double>() * 10)));
        hc.players.push_back(s["seat"]);
      }
      replay = TableState::deal(hc, truth.deck(), truth.deck_seed());
    } else if (e["type"] == "action") {
      replay->apply(*parse_role(e["role"].get<std::string>()), parse_action(e["action"].get<std::string>()));
    } else if (e["type"] == "hand_end") {
      EXPECT_EQ(*replay, hands.at(replayed)) << "hand " << replayed + 1;
      ++replayed;
    }
  }
  EXPECT_EQ(replayed, hands.size());
  EXPECT_GT(replayed, 1u);
  EXPECT_EQ(v["winner"], v["events"].back()["winner"]);
  check_cards(v, hands, std::nullopt);
}

TEST(Concurrency, OneSubmissionPerDecisionPoint) {
  Service svc;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Created t = create(svc, {{"seats", {"human", "checkcall"}}, {"seed", seed}});
    const json v = view(svc, t, 0);
    const std::uint64_t seq = v["seq"];
    const std::string move = v["you"]["legal_actions"]["check"] == true ? "x" : "c";
    std::atomic<int> ok{0}, conflict{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
      threads.emplace_back([&] {
        const int s = act(svc, t, 0, move, seq).status;
        if (s == 200) ++ok;
        else if (s == 409) ++conflict;
      });
    for (auto& th : threads) th.join();
    EXPECT_EQ(ok.load(), 1);
    EXPECT_EQ(conflict.load(), 7);
  }
}

TEST(InformationHiding, FuzzedSessions) {
  Rng rng(2024);
  for (int session = 0; session < 40; ++session) {
    Service svc;
    const bool spin = session % 2 == 1;
    const int n = spin ? 3 : 2 + static_cast<int>(rng.below(2));
    const char* agents[] = {"checkcall", "random:7", "pushfold:9", "allin", "fold"};
    json seats = json::array();
    std::vector<int> humans;
    for (int s = 0; s < n; ++s) {
      if (s == 0 || rng.below(3) == 0) {
        seats.push_back("human");
        humans.push_back(s);
      } else {
        seats.push_back(agents[rng.below(5)]);
      }
    }
    const Created t = create(svc, {{"mode", spin ? "spin" : "cash"}, {"seats", seats}, {"seed", session},
                                   {"hands", 6}, {"stack", spin ? 10 : 30}});
    std::vector<json> responses{t.view};
    std::vector<std::optional<int>> viewers{std::nullopt};
    for (int step = 0; step < 400; ++step) {
      const json pub = view(svc, t, std::nullopt, rng.below(5) == 0 ? 0 : step);
      if (pub["status"] == "finished") break;
      const int who = pub["to_act"];
      const json mine = view(svc, t, who, rng.below(3) == 0 ? 0 : pub["seq"].get<std::uint64_t>() - 2);
      check_cards(pub, svc.hand_log(t.id), std::nullopt);
      check_cards(mine, svc.hand_log(t.id), who);
      for (int h : humans) {
        if (h == who) continue;
        const json other = view(svc, t, h, 0);
        check_cards(other, svc.hand_log(t.id), h);
        EXPECT_FALSE(other["you"].contains("legal_actions"));
      }
      const json& legal = mine["you"]["legal_actions"];
      std::vector<std::string> moves;
      if (legal["fold"] == true) moves.push_back("f");
      if (legal["check"] == true) moves.push_back("x");
      if (!legal["call"].is_null()) moves.push_back("c");
      if (!legal["allin"].is_null()) moves.push_back("a");
      if (!legal["bet"].is_null()) moves.push_back("b" + format_amount(Chips::tenths(std::llround(legal["bet"]["min"].get<double>() * 10))));
      if (!legal["raise_to"].is_null())
        moves.push_back("r" + format_amount(Chips::tenths(std::llround(legal["raise_to"]["max"].get<double>() * 10))));
      moves.push_back("r0.1");  // never legal
      moves.push_back("zzz");
      const std::string move = moves[rng.below(moves.size())];
      const ServiceResponse r = act(svc, t, who, move);
      if (move == "r0.1" || move == "zzz") {
        EXPECT_EQ(r.status, 422) << r.body;
      } else {
        ASSERT_EQ(r.status, 200) << move << " " << r.body;
      }
      check_cards(body(r), svc.hand_log(t.id), who);
    }
  }
}

class HttpFixture : public ::testing::Test {
 protected:
  void start(ServiceOptions opts = {}) {
    svc_ = std::make_unique<Service>(std::move(opts));
    mount_routes(server_, *svc_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  std::unique_ptr<Service> svc_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpFixture, TableRoundTrip) {
  start();
  auto cli = client();
  auto created = cli.Post("/tables", json{{"seats", {"human", "checkcall"}}, {"seed", 6}}.dump(), "application/json");
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201);
  const json c = json::parse(created->body);
  const std::string id = c["id"];
  const std::string token = c["seats"][0]["token"];
  auto v = cli.Get("/tables/" + id + "/view?seat=0&since=0", {{"X-Seat-Token", token}});
  ASSERT_TRUE(v);
  EXPECT_EQ(v->status, 200);
  const json vj = json::parse(v->body);
  EXPECT_EQ(vj["you"]["hole"].size(), 2u);
  auto by_query = cli.Get("/tables/" + id + "/view?seat=0&token=" + token);
  EXPECT_EQ(by_query->status, 200);
  auto no_token = cli.Get("/tables/" + id + "/view?seat=0");
  EXPECT_EQ(no_token->status, 403);
  auto bad_param = cli.Get("/tables/" + id + "/view?seat=x");
  EXPECT_EQ(bad_param->status, 400);
  auto acted = cli.Post("/tables/" + id + "/actions", json{{"seat", 0}, {"action", "f"}, {"token", token}}.dump(),
                        "application/json");
  EXPECT_EQ(acted->status, 200);
  auto missing = cli.Get("/tables/zzz/view");
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(json::parse(missing->body)["code"], "unknown_table");
  auto nowhere = cli.Get("/nowhere");
  EXPECT_EQ(nowhere->status, 404);
  EXPECT_TRUE(json::parse(nowhere->body).contains("code"));
}

TEST_F(HttpFixture, MatchJob) {
  start();
  auto cli = client();
  auto r = cli.Post("/matches",
                    json{{"mode", "cash-hu"}, {"agents", {"fold", "allin"}}, {"hands", 50}, {"duplicate", true},
                         {"seed", 1}}
                        .dump(),
                    "application/json");
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 202);
  const std::string id = json::parse(r->body)["id"];
  json status;
  for (int i = 0; i < 500; ++i) {
    status = json::parse(cli.Get("/matches/" + id)->body);
    if (status["status"] != "running") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ASSERT_EQ(status["status"], "done") << status.dump();
  EXPECT_EQ(status["result"]["bb_per_100"][0], -75.0);
  EXPECT_EQ(status["result"]["winnings"].size(), 100u);
  EXPECT_EQ(cli.Get("/matches/m999")->status, 404);
  auto bad = cli.Post("/matches", json{{"mode", "spin"}, {"agents", {"fold"}}}.dump(), "application/json");
  EXPECT_EQ(bad->status, 422);
}

TEST_F(HttpFixture, ApiToken) {
  ServiceOptions opts;
  opts.api_token = "sesame";
  start(opts);
  auto cli = client();
  EXPECT_EQ(cli.Get("/health")->status, 401);
  EXPECT_EQ(cli.Get("/health", {{"Authorization", "Bearer sesame"}})->status, 200);
}

}  // namespace
}  // namespace spingo
