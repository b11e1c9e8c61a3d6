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

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <regex>
#include <semaphore>
#include <thread>
#include <unordered_map>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "spingo/rng.h"

namespace spingo {
namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ActionToken check_or_fold(const LegalActionSet& legal) { return fallback_action(legal); }

Decision fallback_decision(const LegalActionSet& legal, std::string raw) {
  Decision d;
  d.action = fallback_action(legal);
  d.note = RepairNote{raw, d.action, RepairRule::kFallback};
  d.raw = std::move(raw);
  return d;
}

// Turns model text (amounts in big blinds) into a legal action in table units.
Decision interpret(const std::string& raw, const AgentView& v) {
  ActionToken t = ActionToken::fold();
  try {
    t = parse_action(raw);
  } catch (const ActionParseError&) {
    return fallback_decision(v.legal, raw);
  }
  if (t.kind() == ActionKind::kBet) t = ActionToken::bet(denormalize(t.amount(), v.big_blind));
  if (t.kind() == ActionKind::kRaise) t = ActionToken::raise_to(denormalize(t.amount(), v.big_blind));
  Repaired r = repair_action(t, v.legal);
  Decision d{r.action, std::move(r.note), raw};
  if (d.note) d.note->original = raw;
  return d;
}

class Scripted : public Agent {
 public:
  Decision decide_with_note(const AgentView& v) override {
    Repaired r = repair_action(choose(v), v.legal);
    return Decision{r.action, std::move(r.note), {}};
  }

 protected:
  virtual ActionToken choose(const AgentView& v) const = 0;
};

class AlwaysFold : public Scripted {
 public:
  std::string name() const override { return "fold"; }
  ActionToken choose(const AgentView& v) const override {
    return v.legal.may_fold ? ActionToken::fold() : ActionToken::check();
  }
};

class AlwaysAllIn : public Scripted {
 public:
  std::string name() const override { return "allin"; }
  ActionToken choose(const AgentView& v) const override {
    return v.legal.may_allin ? ActionToken::allin() : check_or_fold(v.legal);
  }
};

ActionToken passive(const LegalActionSet& l) {
  if (l.may_check) return ActionToken::check();
  if (l.call) return ActionToken::call();
  if (l.may_allin) return ActionToken::allin();
  return ActionToken::fold();
}

class CheckCall : public Scripted {
 public:
  std::string name() const override { return "checkcall"; }
  ActionToken choose(const AgentView& v) const override { return passive(v.legal); }
};

class RandomLegal : public Scripted {
 public:
  explicit RandomLegal(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "random:" + std::to_string(seed_); }
  ActionToken choose(const AgentView& v) const override {
    Rng rng(derive_seed(seed_, fnv1a(v.prompt)));
    const LegalActionSet& l = v.legal;
    std::vector<ActionToken> options;
    if (l.may_fold) options.push_back(ActionToken::fold());
    if (l.may_check) options.push_back(ActionToken::check());
    if (l.call) options.push_back(ActionToken::call());
    if (l.may_allin) options.push_back(ActionToken::allin());
    auto draw = [&rng](const ChipRange& r) {
      return Chips::tenths(r.min.raw() + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(r.max.raw() - r.min.raw() + 1))));
    };
    if (l.bet) options.push_back(ActionToken::bet(draw(*l.bet)));
    if (l.raise_to) options.push_back(ActionToken::raise_to(draw(*l.raise_to)));
    if (options.empty()) return ActionToken::fold();
    return options[rng.below(options.size())];
  }

 private:
  std::uint64_t seed_;
};

class PushFold : public Scripted {
 public:
  explicit PushFold(double threshold) : threshold_(threshold) {}
  std::string name() const override { return "pushfold:" + format_amount(Chips::tenths(std::llround(threshold_ * 10))); }
  ActionToken choose(const AgentView& v) const override {
    if (v.street != Street::kPreflop) return passive(v.legal);
    if (static_cast<double>(v.effective.raw()) <= threshold_ * static_cast<double>(v.big_blind.raw()) && v.legal.may_allin)
      return ActionToken::allin();
    return check_or_fold(v.legal);
  }

 private:
  double threshold_;
};

class DeepStackPatch : public Agent {
 public:
  explicit DeepStackPatch(AgentPtr inner) : inner_(std::move(inner)) {}
  std::string name() const override { return "patch:" + inner_->name(); }

  Decision decide_with_note(const AgentView& v) override {
    Decision d = inner_->decide_with_note(v);
    if (d.action.kind() != ActionKind::kAllIn || (!v.legal.bet && !v.legal.raise_to)) return d;
    ActionToken t = ActionToken::fold();
    if (v.bet_level == kZeroChips) {
      const std::int64_t pot_bb = normalize(v.pot, v.big_blind).raw();
      t = ActionToken::bet(denormalize(Chips::tenths((4 * pot_bb + 3) / 6), v.big_blind));
    } else {
      t = ActionToken::raise_to(Chips::tenths(3 * v.bet_level.raw()));
    }
    if (t.amount() >= v.effective) return d;
    Repaired r = repair_action(t, v.legal);
    d.action = r.action;
    if (r.note) d.note = std::move(r.note);
    return d;
  }

 private:
  AgentPtr inner_;
};

class Lookup : public Agent {
 public:
  Lookup(std::map<std::string, ActionToken> table, std::string name) : table_(std::move(table)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Decision decide_with_note(const AgentView& v) override {
    auto it = table_.find(v.prompt);
    if (it == table_.end()) return fallback_decision(v.legal, {});
    return interpret(it->second.str(), v);
  }

 private:
  std::map<std::string, ActionToken> table_;
  std::string name_;
};

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  static const std::regex re(R"(^(https?)://([^/:]+)(:\d+)?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw AgentConfigError("bad endpoint url '" + url + "'");
  if (m[1] == "https") throw AgentConfigError("https endpoints need a TLS-enabled build; use a local http proxy");
  return {m[1].str() + "://" + m[2].str() + m[3].str(), m[4].matched ? m[4].str() : "/"};
}

class LlmAgent : public Agent {
 public:
  explicit LlmAgent(const EndpointConfig& c) : cfg_(c), url_(parse_url(c.url)), slots_(std::max(1, c.max_in_flight)) {
    if (cfg_.model.empty()) throw AgentConfigError("model name required");
    if (cfg_.timeout_ms <= 0) throw AgentConfigError("timeout must be positive");
    if (cfg_.max_retries < 0) throw AgentConfigError("retries must be non-negative");
    if (cfg_.max_in_flight < 1) throw AgentConfigError("max_in_flight must be positive");
    if (!cfg_.auth_env.empty()) {
      const char* tok = std::getenv(cfg_.auth_env.c_str());
      if (!tok) throw AgentConfigError("environment variable " + cfg_.auth_env + " is not set");
      token_ = tok;
    }
    if (cfg_.cache && !cfg_.cache_path.empty()) load_cache();
  }

  std::string name() const override { return "llm:" + cfg_.model; }

  Decision decide_with_note(const AgentView& v) override {
    const std::string key = cache_key(cfg_.model, v.prompt);
    if (cfg_.cache) {
      std::lock_guard lock(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) return interpret(it->second, v);
    }
    std::optional<std::string> text = request(v.prompt);
    if (!text) return fallback_decision(v.legal, {});
    if (cfg_.cache) store(key, *text);
    return interpret(*text, v);
  }

 private:
  std::optional<std::string> request(const std::string& prompt) {
    nlohmann::ordered_json body;
    body["model"] = cfg_.model;
    body["prompt"] = prompt;
    body["temperature"] = cfg_.temperature;
    body["max_tokens"] = cfg_.max_tokens;
    const std::string payload = body.dump();

    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long>(cfg_.backoff_ms) << (attempt - 1)));
      slots_.acquire();
      httplib::Result res = [&] {
        httplib::Client cli(url_.origin);
        const auto t = std::chrono::milliseconds(cfg_.timeout_ms);
        cli.set_connection_timeout(t);
        cli.set_read_timeout(t);
        cli.set_write_timeout(t);
        if (!token_.empty()) cli.set_bearer_token_auth(token_);
        return cli.Post(url_.path, payload, "application/json");
      }();
      slots_.release();
      if (!res || res->status != 200) continue;
      if (auto text = extract_text(res->body)) return text;
    }
    return std::nullopt;
  }

  static std::optional<std::string> extract_text(const std::string& body) {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    if (j.contains("text") && j["text"].is_string()) return j["text"].get<std::string>();
    if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
      const auto& c = j["choices"][0];
      if (c.contains("text") && c["text"].is_string()) return c["text"].get<std::string>();
      if (c.contains("message") && c["message"].is_object() && c["message"].contains("content") &&
          c["message"]["content"].is_string())
        return c["message"]["content"].get<std::string>();
    }
    return std::nullopt;
  }

  void load_cache() {
    std::ifstream in(cfg_.cache_path);
    std::string line;
    while (std::getline(in, line)) {
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("key") || !j.contains("response")) continue;
      if (!j["key"].is_string() || !j["response"].is_string()) continue;
      cache_.emplace(j["key"].get<std::string>(), j["response"].get<std::string>());
    }
  }

  void store(const std::string& key, const std::string& text) {
    std::lock_guard lock(mu_);
    if (!cache_.emplace(key, text).second || cfg_.cache_path.empty()) return;
    nlohmann::ordered_json j;
    j["key"] = key;
    j["model"] = cfg_.model;
    j["response"] = text;
    std::ofstream(cfg_.cache_path, std::ios::app) << j.dump() << '\n';
  }

  EndpointConfig cfg_;
  ParsedUrl url_;
  std::string token_;
  std::counting_semaphore<> slots_;
  std::mutex mu_;
  std::unordered_map<std::string, std::string> cache_;
};

std::map<std::string, std::string> key_values(std::string_view s) {
  std::map<std::string, std::string> out;
  while (!s.empty()) {
    const std::size_t comma = s.find(',');
    const std::string_view item = s.substr(0, comma);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw AgentConfigError("expected key=value, got '" + std::string(item) + "'");
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    s.remove_prefix(comma == std::string_view::npos ? s.size() : comma + 1);
  }
  return out;
}

template <typename T>
T number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    T v;
    if constexpr (std::is_floating_point_v<T>) v = static_cast<T>(std::stod(text, &used));
    else v = static_cast<T>(std::stoll(text, &used));
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw AgentConfigError("bad " + what + " '" + text + "'");
  }
}

}  // namespace

AgentView make_view(const TableState& state, Role seat) {
  if (!state.in_betting()) throw HandStateError("hand already " + street_name(state.street()));
  if (state.to_act() != seat) throw OutOfTurnError(role_name(seat) + " is not to act");
  AgentView v;
  v.seat = seat;
  v.street = state.street();
  v.context = context_from_state(state, seat);
  v.prompt = encode_context(v.context);
  v.legal = state.legal_actions();
  v.big_blind = state.blinds().bb;
  v.pot = state.pot();
  v.bet_level = state.bet_level();
  const int me = state.seat_of(seat);
  const Seat& s = state.seat(me);
  v.stack = s.stack;
  v.committed = s.committed_street;
  Chips other;
  for (int i = 0; i < state.num_seats(); ++i) {
    const Seat& o = state.seat(i);
    if (i != me && !o.folded) other = std::max(other, o.stack + o.committed_street);
  }
  v.effective = std::min(s.stack + s.committed_street, other);
  return v;
}

AgentPtr always_fold() { return std::make_shared<AlwaysFold>(); }
AgentPtr always_allin() { return std::make_shared<AlwaysAllIn>(); }
AgentPtr check_call() { return std::make_shared<CheckCall>(); }
AgentPtr random_legal(std::uint64_t seed) { return std::make_shared<RandomLegal>(seed); }
AgentPtr push_fold(double threshold_bb) { return std::make_shared<PushFold>(threshold_bb); }
AgentPtr deep_stack_patch(AgentPtr inner) { return std::make_shared<DeepStackPatch>(std::move(inner)); }
AgentPtr lookup_agent(std::map<std::string, ActionToken> table, std::string name) {
  return std::make_shared<Lookup>(std::move(table), std::move(name));
}
AgentPtr llm_agent(const EndpointConfig& config) { return std::make_shared<LlmAgent>(config); }

std::string cache_key(std::string_view model, std::string_view prompt) {
  const std::uint64_t h = fnv1a(prompt, fnv1a(std::string(model) + '\0'));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AgentPtr make_agent(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  const std::string kind(spec.substr(0, colon));
  const std::string arg = colon == std::string_view::npos ? "" : std::string(spec.substr(colon + 1));
  const bool has_arg = colon != std::string_view::npos;
  if (kind == "fold" && !has_arg) return always_fold();
  if (kind == "allin" && !has_arg) return always_allin();
  if (kind == "checkcall" && !has_arg) return check_call();
  if (kind == "random") return random_legal(has_arg ? number<std::uint64_t>(arg, "seed") : 0);
  if (kind == "pushfold") {
    const double t = has_arg ? number<double>(arg, "threshold") : 10.0;
    if (!(t >= 0)) throw AgentConfigError("threshold must be non-negative");
    return push_fold(t);
  }
  if (kind == "patch" && has_arg) return deep_stack_patch(make_agent(arg));
  if (kind == "llm" && has_arg) {
    EndpointConfig c;
    for (const auto& [k, v] : key_values(arg)) {
      if (k == "url") c.url = v;
      else if (k == "model") c.model = v;
      else if (k == "timeout") c.timeout_ms = number<int>(v, k);
      else if (k == "retries") c.max_retries = number<int>(v, k);
      else if (k == "backoff") c.backoff_ms = number<int>(v, k);
      else if (k == "temperature") c.temperature = number<double>(v, k);
      else if (k == "max_tokens") c.max_tokens = number<int>(v, k);
      else if (k == "max_in_flight") c.max_in_flight = number<int>(v, k);
      else if (k == "auth_env") c.auth_env = v;
      else if (k == "cache") {
        if (v == "off") c.cache = false;
        else if (v != "on") c.cache_path = v;
      } else {
        throw AgentConfigError("unknown llm option '" + k + "'");
      }
    }
    return llm_agent(c);
  }
  throw AgentConfigError("unknown agent spec '" + std::string(spec) + "'");
}

}  // namespace spingo
