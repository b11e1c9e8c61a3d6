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

#ifndef SPINGO_METRICS_H_
#define SPINGO_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spingo/action.h"
#include "spingo/agents.h"
#include "spingo/history.h"

namespace spingo {

enum class ActionClass { kBet, kCall, kCheck, kFold, kRaise, kAllIn };

std::string class_name(ActionClass c);

// The classes a report distinguishes. The five-class set folds all-in into
// another class.
struct ClassSet {
  std::vector<ActionClass> classes;
  std::optional<ActionClass> allin_as;

  static ClassSet six();
  static ClassSet five(ActionClass allin_as = ActionClass::kRaise);
  std::size_t index_of(const ActionToken& t) const;
  std::size_t size() const { return classes.size(); }
};

// Amounts of both tokens are in big blinds.
struct PredictionPair {
  ActionToken prediction;
  ActionToken truth;
};

// Rows are truth, columns are prediction.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}
  static ConfusionMatrix from_pairs(std::span<const PredictionPair> pairs, const ClassSet& classes);

  std::size_t size() const { return n_; }
  std::size_t& at(std::size_t truth, std::size_t pred) { return cells_[truth * n_ + pred]; }
  std::size_t at(std::size_t truth, std::size_t pred) const { return cells_[truth * n_ + pred]; }
  std::size_t row_total(std::size_t truth) const;
  std::size_t column_total(std::size_t pred) const;
  std::size_t total() const;
  std::size_t diagonal() const;
  // Share of the truth row, in percent; 0 for an empty row.
  double row_percent(std::size_t truth, std::size_t pred) const;
  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<std::size_t> cells_;
};

struct F1Scores {
  // Empty for a class with no true and no predicted instances.
  std::vector<std::optional<double>> per_class;
  double macro = 0.0;
};

F1Scores f1_scores(const ConfusionMatrix& m);

// All take a nonempty span and throw std::invalid_argument otherwise.
double exact_accuracy(std::span<const PredictionPair> pairs);
double tolerant_accuracy(std::span<const PredictionPair> pairs, Chips tolerance = Chips::tenths(5));
F1Scores macro_f1(std::span<const PredictionPair> pairs, const ClassSet& classes);

struct SizeErrors {
  std::optional<double> mae_bb;
  std::optional<double> mape;
  std::size_t n_sized_pairs = 0;
};
// Over pairs where both tokens are bets or both are raises.
SizeErrors size_errors(std::span<const PredictionPair> pairs);

struct SkippedRecord {
  std::size_t index;
  std::string reason;
};

struct MetricsReport {
  std::string agent;
  std::size_t n = 0;
  std::size_t n_skipped = 0;
  std::size_t n_repaired = 0;
  double exact_accuracy = 0;
  double tolerant_accuracy = 0;
  double type_match = 0;
  ClassSet classes;
  F1Scores f1;
  ConfusionMatrix confusion{0};
  SizeErrors sizes;
  std::vector<SkippedRecord> skipped;
};

MetricsReport build_report(std::span<const PredictionPair> pairs, const ClassSet& classes);

// Decodes each record, rebuilds the decision point and asks `agent`. Records
// that do not decode or replay are skipped and listed. Queries may run on
// `threads` workers; the report does not depend on the thread count.
MetricsReport evaluate_dataset(Agent& agent, std::span<const DecisionRecord> records, const ClassSet& classes,
                               unsigned threads = 1);

std::string report_json(const MetricsReport& r);
std::string report_text(const MetricsReport& r);
std::string confusion_csv(const MetricsReport& r);

}  // namespace spingo

#endif  // SPINGO_METRICS_H_
