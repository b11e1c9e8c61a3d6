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

#ifndef SPINGO_HISTORY_H_
#define SPINGO_HISTORY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spingo/action.h"
#include "spingo/cards.h"
#include "spingo/table.h"

namespace spingo {

// Canonical hand-history text, see docs/hand-history-format.md. All amounts in
// a parsed hand are already divided by that hand's big blind, so the blind
// level is always {sb, 1 BB}.

struct HistorySeat {
  std::string name;
  Chips stack;
  bool operator==(const HistorySeat&) const = default;
};

struct HistoryAction {
  Street street = Street::kPreflop;
  std::string actor;
  ActionToken token = ActionToken::fold();
  int line = 0;
  bool operator==(const HistoryAction&) const = default;
};

struct StructuredHand {
  std::string hand_id;
  int line = 0;
  BlindLevel blinds;
  std::vector<HistorySeat> seats;  // clockwise, button first
  std::map<std::string, std::array<Card, 2>> hole;
  std::vector<Card> board;
  std::vector<HistoryAction> actions;

  // Role of the seat at `index` in `seats`.
  Role role_at(std::size_t index) const;
  std::optional<std::size_t> seat_index(std::string_view name) const;
  bool operator==(const StructuredHand&) const = default;
};

struct HistoryDiagnostic {
  int line = 0;
  std::string hand_id;
  std::string message;
};

struct ParseResult {
  std::vector<StructuredHand> hands;
  std::vector<HistoryDiagnostic> diagnostics;
  std::size_t skipped = 0;
};

// Malformed blocks are skipped and reported; parsing never throws.
ParseResult parse_history(std::string_view text);

// Replaces player names with role labels.
StructuredHand anonymize(const StructuredHand& hand);

struct DecisionRecord {
  std::string prompt;
  ActionToken truth = ActionToken::fold();
  std::string source;
  std::optional<std::string> scenario;
  std::string hand_id;
  bool operator==(const DecisionRecord&) const = default;
};

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "HU" for two-seat tables; otherwise the two live roles ("SBvBB", "SBvBTN",
// "BBvBTN"), or "3way" while all three seats are live.
std::string scenario_tag(const TableState& state);

// One record per decision of `hero`, replayed through the engine. Throws
// ReplayError when the actions do not replay legally or hero's cards are
// unknown.
std::vector<DecisionRecord> to_records(const StructuredHand& hand, Role hero, const std::string& source);

// Hero selection for ingest: empty picks every player with dealt cards, a role
// label picks that seat, anything else is a player name.
struct IngestResult {
  std::vector<DecisionRecord> records;
  std::vector<HistoryDiagnostic> diagnostics;
  std::size_t hands = 0;
  std::size_t skipped = 0;
};
IngestResult ingest(std::string_view text, std::string_view hero, const std::string& source);

std::string record_to_json(const DecisionRecord& r);
// Throws std::invalid_argument on a malformed line.
DecisionRecord record_from_json(std::string_view line);
void write_jsonl(std::ostream& out, std::span<const DecisionRecord> records);
std::vector<DecisionRecord> read_jsonl(std::istream& in);

// Partitions records by hand_id. Hands are shuffled under `seed` and cut at the
// cumulative ratios; records keep their input order within a partition.
std::vector<std::vector<DecisionRecord>> split(std::span<const DecisionRecord> records,
                                               std::span<const double> ratios, std::uint64_t seed);

}  // namespace spingo

#endif  // SPINGO_HISTORY_H_
