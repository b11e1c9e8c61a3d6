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

#ifndef SPINGO_SERVICE_H_
#define SPINGO_SERVICE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spingo/agents.h"
#include "spingo/table.h"

namespace httplib {
class Server;
}

namespace spingo {

// Status code plus JSON body, ready to hand to any transport.
struct ServiceResponse {
  int status = 200;
  std::string body;
};

struct ServiceOptions {
  // When set, every HTTP request must carry "Authorization: Bearer <token>".
  std::string api_token;
  std::function<AgentPtr(const std::string&)> agent_factory = make_agent;
  unsigned match_threads = 1;
  std::size_t max_match_hands = 1'000'000;
};

// Tables and batch matches behind the HTTP API. Every method is safe to call
// concurrently. Mutations of one table are serialized; views read the last
// published snapshot and never wait for an agent to finish thinking.
//
// Amounts in requests and responses are in table chips (big blinds for cash
// tables, level-1 big blinds for tournaments).
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Body: {"mode": "cash"|"spin", "seats": ["human", "<agent spec>", ...],
  //        "stack", "blinds": {"sb", "bb"}, "hands", "hands_per_level",
  //        "seed", "spectator"}.
  ServiceResponse create_table(const std::string& body);
  // `seat` empty for a spectator view. Human seats need their seat token.
  ServiceResponse get_view(const std::string& table_id, std::optional<int> seat, std::uint64_t since,
                           const std::string& seat_token);
  // Body: {"seat", "action", "token", "seq"?}. A given seq must equal the
  // table's latest event seq, so two clients answering the same decision
  // point cannot both succeed.
  ServiceResponse submit_action(const std::string& table_id, const std::string& body);
  // Body: {"mode": "cash-hu"|"spin", "agents": [...], "hands", "stack",
  //        "duplicate", "seed"}. Runs in the background.
  ServiceResponse create_match(const std::string& body);
  ServiceResponse get_match(const std::string& match_id);

  // Every hand the table has finished plus the one in progress, cards
  // included. Server-side auditing only; never exposed over HTTP.
  std::vector<TableState> hand_log(const std::string& table_id) const;

  const ServiceOptions& options() const { return options_; }

  class Table;
  struct Match;

 private:
  std::shared_ptr<Table> find_table(const std::string& id) const;

  ServiceOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Table>> tables_;
  std::map<std::string, std::shared_ptr<Match>> matches_;
  std::vector<std::thread> workers_;
  std::uint64_t next_table_ = 1;
  std::uint64_t next_match_ = 1;
};

// Routes the API onto `server`. The service must outlive the server.
void mount_routes(httplib::Server& server, Service& service);

// Blocks until the server stops.
bool serve(Service& service, const std::string& host, int port);

}  // namespace spingo

#endif  // SPINGO_SERVICE_H_
