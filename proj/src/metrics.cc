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

#include "spingo/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "parallel.h"
#include "spingo/codec.h"

namespace spingo {
namespace {

void require_nonempty(std::span<const PredictionPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("no prediction pairs");
}

std::int64_t abs_diff(const PredictionPair& p) { return std::llabs(p.prediction.amount().raw() - p.truth.amount().raw()); }

struct Outcome {
  std::optional<PredictionPair> pair;
  bool repaired = false;
  std::string error;
};

}  // namespace

std::string class_name(ActionClass c) {
  switch (c) {
    case ActionClass::kBet: return "bet";
    case ActionClass::kCall: return "call";
    case ActionClass::kCheck: return "check";
    case ActionClass::kFold: return "fold";
    case ActionClass::kRaise: return "raise";
    case ActionClass::kAllIn: return "allin";
  }
  return "?";
}

ClassSet ClassSet::six() {
  return {{ActionClass::kBet, ActionClass::kCall, ActionClass::kCheck, ActionClass::kFold, ActionClass::kRaise,
           ActionClass::kAllIn},
          std::nullopt};
}

ClassSet ClassSet::five(ActionClass allin_as) {
  if (allin_as == ActionClass::kAllIn) throw std::invalid_argument("all-in must map to another class");
  return {{ActionClass::kBet, ActionClass::kCall, ActionClass::kCheck, ActionClass::kFold, ActionClass::kRaise},
          allin_as};
}

std::size_t ClassSet::index_of(const ActionToken& t) const {
  ActionClass c = ActionClass::kFold;
  switch (t.kind()) {
    case ActionKind::kBet: c = ActionClass::kBet; break;
    case ActionKind::kCall: c = ActionClass::kCall; break;
    case ActionKind::kCheck: c = ActionClass::kCheck; break;
    case ActionKind::kFold: c = ActionClass::kFold; break;
    case ActionKind::kRaise: c = ActionClass::kRaise; break;
    case ActionKind::kAllIn: c = allin_as.value_or(ActionClass::kAllIn); break;
  }
  auto it = std::find(classes.begin(), classes.end(), c);
  if (it == classes.end()) throw std::invalid_argument("class " + class_name(c) + " not in class set");
  return static_cast<std::size_t>(it - classes.begin());
}

ConfusionMatrix ConfusionMatrix::from_pairs(std::span<const PredictionPair> pairs, const ClassSet& classes) {
  ConfusionMatrix m(classes.size());
  for (const PredictionPair& p : pairs) ++m.at(classes.index_of(p.truth), classes.index_of(p.prediction));
  return m;
}

std::size_t ConfusionMatrix::row_total(std::size_t t) const {
  std::size_t s = 0;
  for (std::size_t p = 0; p < n_; ++p) s += at(t, p);
  return s;
}

std::size_t ConfusionMatrix::column_total(std::size_t p) const {
  std::size_t s = 0;
  for (std::size_t t = 0; t < n_; ++t) s += at(t, p);
  return s;
}

std::size_t ConfusionMatrix::total() const {
  std::size_t s = 0;
  for (std::size_t c : cells_) s += c;
  return s;
}

std::size_t ConfusionMatrix::diagonal() const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < n_; ++i) s += at(i, i);
  return s;
}

double ConfusionMatrix::row_percent(std::size_t t, std::size_t p) const {
  const std::size_t row = row_total(t);
  return row == 0 ? 0.0 : 100.0 * static_cast<double>(at(t, p)) / static_cast<double>(row);
}

F1Scores f1_scores(const ConfusionMatrix& m) {
  F1Scores out;
  double sum = 0;
  int counted = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const std::size_t tp = m.at(k, k);
    const std::size_t truth = m.row_total(k);
    const std::size_t pred = m.column_total(k);
    if (truth == 0 && pred == 0) {
      out.per_class.push_back(std::nullopt);
      continue;
    }
    const double f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(truth + pred);
    out.per_class.push_back(f1);
    sum += f1;
    ++counted;
  }
  out.macro = counted == 0 ? 0.0 : sum / counted;
  return out;
}

double exact_accuracy(std::span<const PredictionPair> pairs) {
  require_nonempty(pairs);
  std::size_t hit = 0;
  for (const PredictionPair& p : pairs) hit += p.prediction == p.truth;
  return static_cast<double>(hit) / static_cast<double>(pairs.size());
}

double tolerant_accuracy(std::span<const PredictionPair> pairs, Chips tolerance) {
  require_nonempty(pairs);
  std::size_t hit = 0;
  for (const PredictionPair& p : pairs) {
    if (p.prediction.kind() != p.truth.kind()) continue;
    hit += !p.truth.sized() || abs_diff(p) <= tolerance.raw();
  }
  return static_cast<double>(hit) / static_cast<double>(pairs.size());
}

F1Scores macro_f1(std::span<const PredictionPair> pairs, const ClassSet& classes) {
  require_nonempty(pairs);
  return f1_scores(ConfusionMatrix::from_pairs(pairs, classes));
}

SizeErrors size_errors(std::span<const PredictionPair> pairs) {
  SizeErrors out;
  std::int64_t abs_sum = 0;
  // Summed in sorted order so the result does not depend on pair order.
  std::vector<double> pct;
  for (const PredictionPair& p : pairs) {
    if (!p.truth.sized() || p.prediction.kind() != p.truth.kind()) continue;
    abs_sum += abs_diff(p);
    pct.push_back(static_cast<double>(abs_diff(p)) / static_cast<double>(p.truth.amount().raw()));
  }
  out.n_sized_pairs = pct.size();
  if (pct.empty()) return out;
  std::sort(pct.begin(), pct.end());
  double pct_sum = 0;
  for (double v : pct) pct_sum += v;
  const double n = static_cast<double>(pct.size());
  out.mae_bb = static_cast<double>(abs_sum) / 10.0 / n;
  out.mape = pct_sum / n;
  return out;
}

MetricsReport build_report(std::span<const PredictionPair> pairs, const ClassSet& classes) {
  require_nonempty(pairs);
  MetricsReport r;
  r.n = pairs.size();
  r.classes = classes;
  r.exact_accuracy = exact_accuracy(pairs);
  r.tolerant_accuracy = tolerant_accuracy(pairs);
  r.confusion = ConfusionMatrix::from_pairs(pairs, classes);
  r.type_match = static_cast<double>(r.confusion.diagonal()) / static_cast<double>(r.confusion.total());
  r.f1 = f1_scores(r.confusion);
  r.sizes = size_errors(pairs);
  return r;
}

MetricsReport evaluate_dataset(Agent& agent, std::span<const DecisionRecord> records, const ClassSet& classes,
                               unsigned threads) {
  if (records.empty()) throw std::invalid_argument("no records to evaluate");
  std::vector<Outcome> outcomes(records.size());
  auto run = [&](std::size_t i) {
    Outcome& o = outcomes[i];
    try {
      const DecisionContext ctx = decode_prompt(records[i].prompt);
      const TableState st = replay_context(ctx);
      const Decision d = agent.decide_with_note(make_view(st, ctx.hero));
      o.pair = PredictionPair{d.action, records[i].truth};
      o.repaired = d.note.has_value();
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  };
  detail::parallel_for(records.size(), threads, run);

  std::vector<PredictionPair> pairs;
  std::vector<SkippedRecord> skipped;
  std::size_t repaired = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].pair) {
      pairs.push_back(*outcomes[i].pair);
      repaired += outcomes[i].repaired;
    } else {
      skipped.push_back({i, outcomes[i].error});
    }
  }
  MetricsReport r;
  if (!pairs.empty()) r = build_report(pairs, classes);
  else r.classes = classes;
  r.agent = agent.name();
  r.n_skipped = skipped.size();
  r.n_repaired = repaired;
  r.skipped = std::move(skipped);
  return r;
}

std::string report_json(const MetricsReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["agent"] = r.agent;
  j["n"] = r.n;
  j["n_skipped"] = r.n_skipped;
  j["n_repaired"] = r.n_repaired;
  j["exact_accuracy"] = r.exact_accuracy;
  j["tolerant_accuracy"] = r.tolerant_accuracy;
  j["type_match"] = r.type_match;
  ordered_json f1 = ordered_json::object();
  for (std::size_t k = 0; k < r.classes.size(); ++k) {
    const auto& v = k < r.f1.per_class.size() ? r.f1.per_class[k] : std::nullopt;
    f1[class_name(r.classes.classes[k])] = v ? ordered_json(*v) : ordered_json(nullptr);
  }
  j["per_class_f1"] = f1;
  j["macro_f1"] = r.f1.macro;
  ordered_json names = ordered_json::array();
  for (ActionClass c : r.classes.classes) names.push_back(class_name(c));
  ordered_json counts = ordered_json::array(), pct = ordered_json::array();
  for (std::size_t t = 0; t < r.confusion.size(); ++t) {
    ordered_json row = ordered_json::array(), prow = ordered_json::array();
    for (std::size_t p = 0; p < r.confusion.size(); ++p) {
      row.push_back(r.confusion.at(t, p));
      prow.push_back(std::round(r.confusion.row_percent(t, p) * 10) / 10);
    }
    counts.push_back(row);
    pct.push_back(prow);
  }
  j["confusion"] = {{"classes", names}, {"counts", counts}, {"row_percent", pct}};
  j["mae_bb"] = r.sizes.mae_bb ? ordered_json(*r.sizes.mae_bb) : ordered_json(nullptr);
  j["mape"] = r.sizes.mape ? ordered_json(*r.sizes.mape) : ordered_json(nullptr);
  j["n_sized_pairs"] = r.sizes.n_sized_pairs;
  ordered_json skipped = ordered_json::array();
  for (const SkippedRecord& s : r.skipped) skipped.push_back({{"index", s.index}, {"reason", s.reason}});
  j["skipped"] = skipped;
  return j.dump(2) + "\n";
}

std::string report_text(const MetricsReport& r) {
  std::ostringstream o;
  char buf[128];
  o << "agent " << r.agent << ": " << r.n << " decisions, " << r.n_skipped << " skipped, " << r.n_repaired
    << " repaired\n";
  std::snprintf(buf, sizeof buf, "exact accuracy     %6.2f%%\ntolerant accuracy  %6.2f%%\ntype match         %6.2f%%\n"
                "macro F1           %6.2f%%\n", 100 * r.exact_accuracy, 100 * r.tolerant_accuracy,
                100 * r.type_match, 100 * r.f1.macro);
  o << buf;
  if (r.sizes.mae_bb) {
    std::snprintf(buf, sizeof buf, "MAE %.2f BB, MAPE %.1f%% over %zu sized pairs\n", *r.sizes.mae_bb,
                  100 * *r.sizes.mape, r.sizes.n_sized_pairs);
    o << buf;
  } else {
    o << "MAE/MAPE: no sized pairs\n";
  }
  o << "\ntruth \\ pred";
  for (ActionClass c : r.classes.classes) {
    std::snprintf(buf, sizeof buf, "%16s", class_name(c).c_str());
    o << buf;
  }
  o << '\n';
  for (std::size_t t = 0; t < r.confusion.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%-12s", class_name(r.classes.classes[t]).c_str());
    o << buf;
    for (std::size_t p = 0; p < r.confusion.size(); ++p) {
      std::snprintf(buf, sizeof buf, "%8zu (%5.1f%%)", r.confusion.at(t, p), r.confusion.row_percent(t, p));
      o << buf;
    }
    o << '\n';
  }
  return o.str();
}

std::string confusion_csv(const MetricsReport& r) {
  std::ostringstream o;
  o << "truth,predicted,count,row_percent\n";
  char buf[32];
  for (std::size_t t = 0; t < r.confusion.size(); ++t)
    for (std::size_t p = 0; p < r.confusion.size(); ++p) {
      std::snprintf(buf, sizeof buf, "%.1f", r.confusion.row_percent(t, p));
      o << class_name(r.classes.classes[t]) << ',' << class_name(r.classes.classes[p]) << ',' << r.confusion.at(t, p)
        << ',' << buf << '\n';
    }
  return o.str();
}

}  // namespace spingo
