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

// Command-line front end: ingest hand histories, split datasets, evaluate
// agents, run matches and serve the HTTP API.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "parallel.h"
#include "spingo/arena.h"
#include "spingo/history.h"
#include "spingo/metrics.h"
#include "spingo/service.h"

namespace {

using namespace spingo;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<DecisionRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_jsonl(in);
}

struct IngestArgs {
  std::vector<std::string> inputs;
  std::string format = "canonical";
  std::string hero;
  std::string source;
  std::string out;
  unsigned threads = 1;
};

int run_ingest(const IngestArgs& a) {
  if (a.format != "canonical") throw std::runtime_error("unsupported format " + a.format);
  std::vector<IngestResult> results(a.inputs.size());
  detail::parallel_for(a.inputs.size(), a.threads, [&](std::size_t i) {
    const std::string source = a.source.empty() ? std::filesystem::path(a.inputs[i]).stem().string() : a.source;
    results[i] = ingest(read_file(a.inputs[i]), a.hero, source);
  });

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + a.out);
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  std::size_t records = 0, hands = 0, skipped = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    write_jsonl(out, results[i].records);
    for (const HistoryDiagnostic& d : results[i].diagnostics)
      std::cerr << a.inputs[i] << ":" << d.line << ": " << (d.hand_id.empty() ? "" : d.hand_id + ": ") << d.message
                << "\n";
    records += results[i].records.size();
    hands += results[i].hands;
    skipped += results[i].skipped;
  }
  std::cerr << "ingested " << hands << " hands, " << records << " records; skipped " << skipped << " hands\n";
  return 0;
}

struct SplitArgs {
  std::string input;
  std::vector<double> ratios{0.9, 0.1};
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
};

int run_split(const SplitArgs& a) {
  std::vector<std::string> outputs = a.outputs;
  if (outputs.empty()) {
    const std::filesystem::path p(a.input);
    for (std::size_t i = 0; i < a.ratios.size(); ++i)
      outputs.push_back((p.parent_path() / (p.stem().string() + "." + std::to_string(i) + ".jsonl")).string());
  }
  if (outputs.size() != a.ratios.size()) throw std::runtime_error("need one --out per ratio");
  const std::vector<DecisionRecord> records = load_records(a.input);
  const auto parts = split(records, a.ratios, a.seed);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::ofstream out(outputs[i], std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + outputs[i]);
    write_jsonl(out, parts[i]);
    std::cerr << outputs[i] << ": " << parts[i].size() << " records\n";
  }
  return 0;
}

struct EvalArgs {
  std::string input;
  std::string agent;
  int classes = 5;
  std::string out;
  std::string csv;
  unsigned threads = 1;
};

int run_eval(const EvalArgs& a) {
  const std::vector<DecisionRecord> records = load_records(a.input);
  AgentPtr agent = make_agent(a.agent);
  const ClassSet classes = a.classes == 6 ? ClassSet::six() : ClassSet::five();
  const MetricsReport report = evaluate_dataset(*agent, records, classes, a.threads);
  std::cout << report_text(report);
  if (!a.out.empty()) write_file(a.out, report_json(report));
  if (!a.csv.empty()) write_file(a.csv, confusion_csv(report));
  return 0;
}

struct MatchArgs {
  std::string mode = "cash-hu";
  std::string agent_a, agent_b, agent_c;
  std::size_t hands = 1000;
  std::size_t tournaments = 3;
  double stack = 0;
  bool duplicate = false;
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 1;
};

Chips to_chips(double bb) { return Chips::tenths(std::llround(bb * 10)); }

int run_match(const MatchArgs& a) {
  MatchResult r;
  if (a.mode == "cash-hu") {
    CashConfig c;
    if (a.stack > 0) c.stack = to_chips(a.stack);
    c.seed = a.seed;
    c.duplicate = a.duplicate;
    c.threads = a.threads;
    r = run_cash_match(make_agent(a.agent_a), make_agent(a.agent_b), a.hands, c);
  } else if (a.mode == "spin") {
    if (a.agent_c.empty()) throw std::runtime_error("spin needs --agent-c");
    SpinConfig c;
    if (a.stack > 0) c.starting_stack = to_chips(a.stack);
    c.seed = a.seed;
    c.rotate_seats = a.duplicate;
    c.threads = a.threads;
    r = run_spin_and_go({make_agent(a.agent_a), make_agent(a.agent_b), make_agent(a.agent_c)}, a.tournaments, c);
  } else {
    throw std::runtime_error("unknown mode " + a.mode);
  }
  std::cout << match_text(r);
  if (!a.out.empty()) write_file(a.out, match_json(r));
  return 0;
}

struct ServeArgs {
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string token_env = "SPINGO_API_TOKEN";
  unsigned match_threads = 1;
};

int run_serve(const ServeArgs& a) {
  ServiceOptions opts;
  if (const char* t = std::getenv(a.token_env.c_str())) opts.api_token = t;
  opts.match_threads = a.match_threads;
  Service service(opts);
  std::cerr << "listening on " << a.bind << ":" << a.port << (opts.api_token.empty() ? "" : " (token required)")
            << "\n";
  if (!serve(service, a.bind, a.port)) throw std::runtime_error("cannot listen on " + a.bind);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spingo: poker decision datasets, agent evaluation and matches"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert hand histories to JSONL decision records");
  ingest_cmd->add_option("inputs", ingest_args.inputs, "History files")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--format", ingest_args.format, "Input format")->check(CLI::IsMember({"canonical"}));
  ingest_cmd->add_option("--hero", ingest_args.hero, "BTN, SB, BB or a player name; default every dealt player");
  ingest_cmd->add_option("--source", ingest_args.source, "Source tag; default the file name");
  ingest_cmd->add_option("--out", ingest_args.out, "Output JSONL; default stdout");
  ingest_cmd->add_option("--threads", ingest_args.threads, "Files parsed in parallel")->check(CLI::Range(1u, 256u));

  SplitArgs split_args;
  auto* split_cmd = app.add_subcommand("split", "Partition a JSONL dataset by hand");
  split_cmd->add_option("input", split_args.input, "Input JSONL")->required()->check(CLI::ExistingFile);
  split_cmd->add_option("--ratios", split_args.ratios, "Comma-separated shares summing to 1")->delimiter(',');
  split_cmd->add_option("--seed", split_args.seed, "Shuffle seed");
  split_cmd->add_option("--out", split_args.outputs, "One output per ratio; default <input>.<i>.jsonl");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score an agent against JSONL ground truth");
  eval_cmd->add_option("input", eval_args.input, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--agent", eval_args.agent, "Agent spec")->required();
  eval_cmd->add_option("--classes", eval_args.classes, "5 (all-in counted as raise) or 6")
      ->check(CLI::IsMember({5, 6}));
  eval_cmd->add_option("--out", eval_args.out, "Report JSON");
  eval_cmd->add_option("--csv", eval_args.csv, "Confusion matrix CSV");
  eval_cmd->add_option("--threads", eval_args.threads, "Concurrent agent queries")->check(CLI::Range(1u, 256u));

  MatchArgs match_args;
  auto* match_cmd = app.add_subcommand("match", "Play agents against each other");
  match_cmd->add_option("--mode", match_args.mode, "cash-hu or spin")->check(CLI::IsMember({"cash-hu", "spin"}));
  match_cmd->add_option("--agent-a", match_args.agent_a, "Agent spec")->required();
  match_cmd->add_option("--agent-b", match_args.agent_b, "Agent spec")->required();
  match_cmd->add_option("--agent-c", match_args.agent_c, "Third agent (spin)");
  match_cmd->add_option("--hands", match_args.hands, "Cash deals")->check(CLI::PositiveNumber);
  match_cmd->add_option("--tournaments", match_args.tournaments, "Spin & Go tournaments")
      ->check(CLI::PositiveNumber);
  match_cmd->add_option("--stack", match_args.stack, "Stack in big blinds (cash 200, spin 25)")
      ->check(CLI::PositiveNumber);
  match_cmd->add_flag("--duplicate", match_args.duplicate, "Mirror cash deals; rotate spin seats");
  match_cmd->add_option("--seed", match_args.seed, "Master seed");
  match_cmd->add_option("--out", match_args.out, "Result JSON with per-hand winnings");
  match_cmd->add_option("--threads", match_args.threads, "Parallel deals")->check(CLI::Range(1u, 256u));

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--bind", serve_args.bind, "Address to bind");
  serve_cmd->add_option("--port", serve_args.port, "Port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--token-env", serve_args.token_env, "Environment variable holding the API token");
  serve_cmd->add_option("--match-threads", serve_args.match_threads, "Threads per match job")
      ->check(CLI::Range(1u, 256u));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*ingest_cmd) return run_ingest(ingest_args);
    if (*split_cmd) return run_split(split_args);
    if (*eval_cmd) return run_eval(eval_args);
    if (*match_cmd) return run_match(match_args);
    if (*serve_cmd) return run_serve(serve_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
