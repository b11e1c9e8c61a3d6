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

#ifndef SPINGO_AGENTS_H_
#define SPINGO_AGENTS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spingo/action.h"
#include "spingo/codec.h"
#include "spingo/table.h"

namespace spingo {

// What the seat to act may see. Chip fields are in table units; `context` and
// `prompt` are in big blinds.
struct AgentView {
  Role seat = Role::kBtn;
  Street street = Street::kPreflop;
  DecisionContext context;
  std::string prompt;
  LegalActionSet legal;
  Chips big_blind;
  Chips pot;
  Chips bet_level;
  Chips stack;
  Chips committed;
  // Most this seat can put in on this street against the live opponents.
  Chips effective;
};

// Requires `seat` to be the seat to act.
AgentView make_view(const TableState& state, Role seat);

struct Decision {
  ActionToken action = ActionToken::fold();
  std::optional<RepairNote> note;
  // Unprocessed model output, empty for scripted agents.
  std::string raw;
};

// Every agent returns a legal action for any view with a nonempty legal set.
// Implementations must tolerate concurrent calls.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual Decision decide_with_note(const AgentView& view) = 0;
  ActionToken decide(const AgentView& view) { return decide_with_note(view).action; }
};

using AgentPtr = std::shared_ptr<Agent>;

AgentPtr always_fold();
AgentPtr always_allin();
AgentPtr check_call();
// Uniform over the legal kinds; the draw depends only on seed and view.
AgentPtr random_legal(std::uint64_t seed);
// Preflop: all-in when the effective stack is at most `threshold_bb`, else
// check if free, else fold. Postflop: check-call.
AgentPtr push_fold(double threshold_bb);

// Replaces the inner agent's all-in by a bet of 2/3 pot when no bet is
// outstanding, or by a raise to three times the outstanding bet. The all-in is
// kept when the replacement would reach the effective stack.
AgentPtr deep_stack_patch(AgentPtr inner);

// Answers from a prompt -> action table (actions in big blinds), falling back
// to check-or-fold for unknown prompts.
AgentPtr lookup_agent(std::map<std::string, ActionToken> table, std::string name = "lookup");

struct EndpointConfig {
  std::string url;  // http://host:port/path
  std::string model;
  double temperature = 0.0;
  int timeout_ms = 30000;
  int max_retries = 2;
  int backoff_ms = 100;
  int max_tokens = 8;
  int max_in_flight = 4;
  // Name of the environment variable holding a bearer token; empty for none.
  std::string auth_env;
  bool cache = true;
  // JSONL file the cache is loaded from and appended to; empty keeps it in memory.
  std::string cache_path;
};

class AgentConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws AgentConfigError on a bad configuration.
AgentPtr llm_agent(const EndpointConfig& config);

// Hex FNV-1a of model and prompt; the response cache key.
std::string cache_key(std::string_view model, std::string_view prompt);

// Agent specs: fold, allin, checkcall, random[:SEED], pushfold[:BB],
// patch:<spec>, llm:url=...,model=...[,timeout=MS,retries=N,temperature=T,
// auth_env=VAR,cache=PATH|off,max_in_flight=N]. Throws AgentConfigError.
AgentPtr make_agent(std::string_view spec);

}  // namespace spingo

#endif  // SPINGO_AGENTS_H_
