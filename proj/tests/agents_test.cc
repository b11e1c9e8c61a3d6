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

#include "spingo/agents.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <future>

#include "mock_endpoint.h"
#include "test_util.h"

namespace spingo {
namespace {

using testing::MockEndpoint;
using testing::MockReply;

Chips bb(double v) { return Chips::tenths(std::llround(v * 10)); }

TableState heads_up(double sb_stack, double bb_stack, std::uint64_t seed = 1) {
  std::vector<std::pair<Role, Chips>> stacks{{Role::kSb, bb(sb_stack)}, {Role::kBb, bb(bb_stack)}};
  return new_cash_hand(stacks, BlindLevel{}, seed);
}

// Three-way limped flop, pot 3 BB, SB to act with no bet outstanding.
TableState unopened_flop(double stacks, double sb_stack = 0) {
  std::vector<std::pair<Role, Chips>> seats{
      {Role::kBtn, bb(stacks)}, {Role::kSb, bb(sb_stack > 0 ? sb_stack : stacks)}, {Role::kBb, bb(stacks)}};
  TableState st = new_cash_hand(seats, BlindLevel{}, 1);
  st.apply(Role::kBtn, ActionToken::call());
  st.apply(Role::kSb, ActionToken::call());
  st.apply(Role::kBb, ActionToken::check());
  return st;
}

// River of the worked hand: hero on the button facing a 1 BB bet.
TableState worked_river() {
  HandConfig cfg;
  cfg.stacks = {bb(29.3), bb(19.0), bb(1.7)};
  std::vector<std::optional<Card>> slots(6);
  slots[4] = *parse_card("Ts");
  slots[5] = *parse_card("Qs");
  for (const Card& c : testing::cards("4h7s6c8d9c")) slots.push_back(c);
  TableState st = TableState::deal(cfg, deck_from_slots(slots));
  st.apply(Role::kBtn, ActionToken::raise_to(bb(2)));
  st.apply(Role::kSb, ActionToken::call());
  st.apply(Role::kBb, ActionToken::fold());
  for (int i = 0; i < 2; ++i) {
    st.apply(Role::kSb, ActionToken::bet(bb(1)));
    st.apply(Role::kBtn, ActionToken::call());
  }
  st.apply(Role::kSb, ActionToken::bet(bb(1)));
  return st;
}

AgentView view_of(const TableState& st) { return make_view(st, *st.to_act()); }

TEST(MakeView, Fields) {
  TableState st = unopened_flop(200);
  AgentView v = view_of(st);
  EXPECT_EQ(v.seat, Role::kSb);
  EXPECT_EQ(v.street, Street::kFlop);
  EXPECT_EQ(v.pot, bb(3));
  EXPECT_EQ(v.bet_level, kZeroChips);
  EXPECT_EQ(v.stack, bb(199));
  EXPECT_EQ(v.effective, bb(199));
  EXPECT_EQ(v.prompt, encode_prompt(st, Role::kSb));
  EXPECT_THROW(make_view(st, Role::kBb), OutOfTurnError);
  TableState hu = heads_up(30, 12);
  EXPECT_EQ(view_of(hu).effective, bb(12));
}

TEST(Baselines, AlwaysFold) {
  TableState st = heads_up(100, 100);
  EXPECT_EQ(always_fold()->decide(view_of(st)), ActionToken::fold());
  st.apply(Role::kSb, ActionToken::allin());
  EXPECT_EQ(always_fold()->decide(view_of(st)), ActionToken::fold());
}

TEST(Baselines, AlwaysAllIn) {
  TableState st = heads_up(100, 100);
  EXPECT_EQ(always_allin()->decide(view_of(st)), ActionToken::allin());
  EXPECT_EQ(always_allin()->decide(view_of(unopened_flop(50))), ActionToken::allin());
}

TEST(Baselines, CheckCall) {
  TableState st = unopened_flop(100);
  EXPECT_EQ(check_call()->decide(view_of(st)), ActionToken::check());
  st.apply(Role::kSb, ActionToken::bet(bb(4)));
  EXPECT_EQ(check_call()->decide(view_of(st)), ActionToken::call());
}

TEST(Baselines, RandomLegalIsReproducible) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    TableState st = heads_up(1 + rng.below(300), 1 + rng.below(300), rng.next());
    testing::random_playout(st, rng, [](const TableState& s) {
      const AgentView v = view_of(s);
      EXPECT_EQ(random_legal(9)->decide(v), random_legal(9)->decide(v));
    });
  }
  // Different seeds disagree somewhere.
  TableState st = heads_up(200, 200);
  bool differ = false;
  for (std::uint64_t s = 0; s < 20 && !differ; ++s) differ = random_legal(s)->decide(view_of(st)) != random_legal(99)->decide(view_of(st));
  EXPECT_TRUE(differ);
}

TEST(Baselines, PushFold) {
  EXPECT_EQ(push_fold(10)->decide(view_of(heads_up(8, 100))), ActionToken::allin());
  EXPECT_EQ(push_fold(10)->decide(view_of(heads_up(100, 8))), ActionToken::allin());  // effective stack 8
  EXPECT_EQ(push_fold(10)->decide(view_of(heads_up(20, 100))), ActionToken::fold());
  TableState limped = heads_up(20, 20);
  limped.apply(Role::kSb, ActionToken::call());
  EXPECT_EQ(push_fold(10)->decide(view_of(limped)), ActionToken::check());
  TableState flop = unopened_flop(5);
  EXPECT_EQ(push_fold(10)->decide(view_of(flop)), ActionToken::check());
  flop.apply(Role::kSb, ActionToken::bet(bb(1)));
  EXPECT_EQ(push_fold(10)->decide(view_of(flop)), ActionToken::call());
}

TEST(DeepStackPatch, TwoThirdsPotWhenUnopened) {
  EXPECT_EQ(deep_stack_patch(always_allin())->decide(view_of(unopened_flop(200))), ActionToken::bet(bb(2)));
}

TEST(DeepStackPatch, ThreeTimesOutstandingBet) {
  TableState st = unopened_flop(200);
  st.apply(Role::kSb, ActionToken::bet(bb(4)));
  EXPECT_EQ(deep_stack_patch(always_allin())->decide(view_of(st)), ActionToken::raise_to(bb(12)));
}

TEST(DeepStackPatch, KeepsAllInWhenReplacementReachesStack) {
  TableState st = unopened_flop(200, 2.5);
  AgentView v = view_of(st);
  ASSERT_EQ(v.pot, bb(3));
  ASSERT_EQ(v.stack, bb(1.5));
  EXPECT_EQ(deep_stack_patch(always_allin())->decide(v), ActionToken::allin());
}

TEST(DeepStackPatch, PreflopRaisesThreeTimesTheBlind) {
  EXPECT_EQ(deep_stack_patch(always_allin())->decide(view_of(heads_up(200, 200))), ActionToken::raise_to(bb(3)));
}

TEST(DeepStackPatch, ThreeTimesReraise) {
  TableState st = heads_up(200, 200);
  st.apply(Role::kSb, ActionToken::raise_to(bb(10)));
  st.apply(Role::kBb, ActionToken::raise_to(bb(40)));
  TableState small = heads_up(200, 200);
  small.apply(Role::kSb, ActionToken::raise_to(bb(2)));
  small.apply(Role::kBb, ActionToken::raise_to(bb(30)));
  Decision d = deep_stack_patch(always_allin())->decide_with_note(view_of(small));
  EXPECT_EQ(d.action, ActionToken::raise_to(bb(90)));
  EXPECT_EQ(deep_stack_patch(always_allin())->decide(view_of(st)), ActionToken::raise_to(bb(120)));
}

TEST(DeepStackPatch, PassesNonAllInThrough) {
  Rng rng(12);
  AgentPtr inner = random_legal(5);
  AgentPtr patched = deep_stack_patch(inner);
  for (int i = 0; i < 300; ++i) {
    TableState st = heads_up(1 + rng.below(400), 1 + rng.below(400), rng.next());
    testing::random_playout(st, rng, [&](const TableState& s) {
      const AgentView v = view_of(s);
      const ActionToken a = inner->decide(v);
      const ActionToken b = patched->decide(v);
      if (a.kind() != ActionKind::kAllIn) {
        EXPECT_EQ(a, b);
      } else if (b.sized()) {
        EXPECT_LT(b.amount(), v.effective);
      }
      if (b.sized()) {
        EXPECT_LE(b.amount(), v.effective);
      }
    });
  }
}

TEST(Agents, EveryAgentIsLegalOnRandomPlayouts) {
  std::vector<AgentPtr> agents{always_fold(), always_allin(), check_call(), random_legal(1), push_fold(12),
                               deep_stack_patch(always_allin()), deep_stack_patch(random_legal(2)),
                               lookup_agent({}, "empty")};
  Rng rng(21);
  for (int i = 0; i < 1500; ++i) {
    HandConfig cfg;
    const int n = 2 + static_cast<int>(rng.below(2));
    for (int k = 0; k < n; ++k) cfg.stacks.push_back(Chips::tenths(1 + static_cast<std::int64_t>(rng.below(3000))));
    if (i % 3 == 0) cfg.blinds = BlindLevel{Chips::tenths(10), Chips::tenths(20)};
    TableState st = TableState::deal(cfg, rng.next());
    while (!st.settled()) {
      const Role r = *st.to_act();
      const AgentView v = make_view(st, r);
      for (const AgentPtr& a : agents) ASSERT_TRUE(v.legal.allows(a->decide(v))) << a->name() << " " << v.prompt;
      st.apply(r, agents[rng.below(agents.size())]->decide(v));
    }
  }
}

TEST(LookupAgent, ConvertsBigBlindsToTableUnits) {
  HandConfig cfg;
  cfg.stacks = {Chips::tenths(500), Chips::tenths(500)};
  cfg.blinds = BlindLevel{Chips::tenths(10), Chips::tenths(20)};
  TableState st = TableState::deal(cfg, 4);
  const AgentView v = view_of(st);
  AgentPtr a = lookup_agent({{v.prompt, ActionToken::raise_to(bb(3))}});
  EXPECT_EQ(a->decide(v), ActionToken::raise_to(Chips::tenths(60)));
}

EndpointConfig endpoint(const MockEndpoint& m) {
  EndpointConfig c;
  c.url = m.url();
  c.model = "mock";
  c.timeout_ms = 2000;
  c.backoff_ms = 1;
  return c;
}

TEST(LlmAgent, RaiseToAnswer) {
  MockEndpoint m([](const std::string&, int) { return MockReply{"r6.5"}; });
  TableState st = worked_river();
  Decision d = llm_agent(endpoint(m))->decide_with_note(view_of(st));
  EXPECT_EQ(d.action, ActionToken::raise_to(bb(6.5)));
  EXPECT_FALSE(d.note);
  EXPECT_EQ(d.raw, "r6.5");
  auto body = nlohmann::json::parse(m.bodies().at(0));
  EXPECT_EQ(body["prompt"], encode_prompt(st, Role::kBtn));
  EXPECT_EQ(body["model"], "mock");
  EXPECT_EQ(body["temperature"], 0.0);
}

TEST(LlmAgent, UnparseableAnswerFallsBack) {
  MockEndpoint m([](const std::string&, int) { return MockReply{"banana"}; });
  AgentPtr a = llm_agent(endpoint(m));
  Decision d = a->decide_with_note(view_of(unopened_flop(100)));
  EXPECT_EQ(d.action, ActionToken::check());
  ASSERT_TRUE(d.note);
  EXPECT_EQ(d.note->rule, RepairRule::kFallback);
  EXPECT_EQ(d.note->original, "banana");
  EXPECT_EQ(a->decide(view_of(worked_river())), ActionToken::fold());
}

TEST(LlmAgent, IllegalAnswerIsRepaired) {
  MockEndpoint m([](const std::string&, int) { return MockReply{"r3", 200, 0, true}; });
  Decision d = llm_agent(endpoint(m))->decide_with_note(view_of(unopened_flop(100)));
  EXPECT_EQ(d.action, ActionToken::bet(bb(3)));
  EXPECT_EQ(d.note->rule, RepairRule::kRaiseToBet);
}

TEST(LlmAgent, RetriesAfterTimeouts) {
  MockEndpoint m([](const std::string&, int call) { return MockReply{"c", 200, call < 2 ? 600 : 0}; });
  EndpointConfig c = endpoint(m);
  c.timeout_ms = 150;
  c.max_retries = 2;
  c.cache = false;
  EXPECT_EQ(llm_agent(c)->decide(view_of(worked_river())), ActionToken::call());
  EXPECT_EQ(m.calls(), 3);
}

TEST(LlmAgent, ExhaustedRetriesFallBack) {
  MockEndpoint m([](const std::string&, int) { return MockReply{"c", 503}; });
  EndpointConfig c = endpoint(m);
  c.max_retries = 1;
  Decision d = llm_agent(c)->decide_with_note(view_of(worked_river()));
  EXPECT_EQ(d.action, ActionToken::fold());
  EXPECT_EQ(d.note->rule, RepairRule::kFallback);
  EXPECT_EQ(m.calls(), 2);
}

TEST(LlmAgent, UnreachableEndpointFallsBack) {
  EndpointConfig c;
  c.url = "http://127.0.0.1:1/v1/completions";
  c.model = "m";
  c.max_retries = 0;
  c.timeout_ms = 200;
  EXPECT_EQ(llm_agent(c)->decide(view_of(unopened_flop(10))), ActionToken::check());
}

TEST(LlmAgent, CacheAvoidsRepeatCallsAndPersists) {
  const std::string path = (std::filesystem::temp_directory_path() / "spingo_agents_cache_test.jsonl").string();
  std::filesystem::remove(path);
  MockEndpoint m([](const std::string&, int call) { return MockReply{call == 0 ? "x" : "b5"}; });
  EndpointConfig c = endpoint(m);
  c.cache_path = path;
  const AgentView v = view_of(unopened_flop(100));
  {
    AgentPtr a = llm_agent(c);
    EXPECT_EQ(a->decide(v), ActionToken::check());
    EXPECT_EQ(a->decide(v), ActionToken::check());
  }
  EXPECT_EQ(m.calls(), 1);
  EXPECT_EQ(llm_agent(c)->decide(v), ActionToken::check());
  EXPECT_EQ(m.calls(), 1);
  c.model = "other";
  EXPECT_EQ(llm_agent(c)->decide(v), ActionToken::bet(bb(5)));
  std::filesystem::remove(path);
}

TEST(LlmAgent, SendsBearerToken) {
  MockEndpoint m([](const std::string&, int) { return MockReply{"x"}; });
  ::setenv("SPINGO_TEST_TOKEN", "s3cret", 1);
  EndpointConfig c = endpoint(m);
  c.auth_env = "SPINGO_TEST_TOKEN";
  llm_agent(c)->decide(view_of(unopened_flop(100)));
  EXPECT_EQ(m.auth_headers().at(0), "Bearer s3cret");
}

TEST(LlmAgent, BoundsConcurrentRequests) {
  MockEndpoint m([](const std::string&, int) { return MockReply{"x", 200, 30}; });
  EndpointConfig c = endpoint(m);
  c.max_in_flight = 2;
  c.cache = false;
  AgentPtr a = llm_agent(c);
  const AgentView v = view_of(unopened_flop(100));
  std::vector<std::future<ActionToken>> fs;
  for (int i = 0; i < 8; ++i) fs.push_back(std::async(std::launch::async, [&] { return a->decide(v); }));
  for (auto& f : fs) EXPECT_EQ(f.get(), ActionToken::check());
  EXPECT_EQ(m.calls(), 8);
  EXPECT_LE(m.max_in_flight(), 2);
}

TEST(LlmAgent, ConfigErrors) {
  EndpointConfig c;
  c.url = "http://127.0.0.1:9/x";
  c.model = "m";
  EXPECT_NO_THROW(llm_agent(c));
  EndpointConfig bad = c;
  bad.timeout_ms = 0;
  EXPECT_THROW(llm_agent(bad), AgentConfigError);
  bad = c;
  bad.max_retries = -1;
  EXPECT_THROW(llm_agent(bad), AgentConfigError);
  bad = c;
  bad.url = "ftp://x";
  EXPECT_THROW(llm_agent(bad), AgentConfigError);
  bad = c;
  bad.auth_env = "SPINGO_SURELY_UNSET_VARIABLE";
  EXPECT_THROW(llm_agent(bad), AgentConfigError);
}

TEST(MakeAgent, Specs) {
  EXPECT_EQ(make_agent("fold")->name(), "fold");
  EXPECT_EQ(make_agent("allin")->name(), "allin");
  EXPECT_EQ(make_agent("checkcall")->name(), "checkcall");
  EXPECT_EQ(make_agent("random:7")->name(), "random:7");
  EXPECT_EQ(make_agent("pushfold:8.5")->name(), "pushfold:8.5");
  EXPECT_EQ(make_agent("patch:allin")->name(), "patch:allin");
  EXPECT_EQ(make_agent("llm:url=http://127.0.0.1:9/v1/completions,model=m,retries=0,cache=off")->name(), "llm:m");
  for (const char* bad : {"", "bogus", "random:x", "fold:1", "patch:", "llm:model=m", "llm:url=http://h/,model=m,zzz=1",
                          "pushfold:-1"})
    EXPECT_THROW(make_agent(bad), AgentConfigError) << bad;
}

TEST(CacheKey, DependsOnModelAndPrompt) {
  EXPECT_EQ(cache_key("a", "p"), cache_key("a", "p"));
  EXPECT_NE(cache_key("a", "p"), cache_key("b", "p"));
  EXPECT_NE(cache_key("a", "p"), cache_key("a", "q"));
  EXPECT_EQ(cache_key("a", "p").size(), 16u);
}

}  // namespace
}  // namespace spingo
