// Copyright 2026 The SUQL Engine Authors
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

// suql: ingest | query | eval | repl | serve

#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "suql/agent.hpp"
#include "suql/database.hpp"
#include "suql/error.hpp"
#include "suql/metrics.hpp"
#include "suql/service.hpp"
#include "suql/strings.hpp"

namespace fs = std::filesystem;
using namespace suql;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitQuery = 2;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kParse:
    case ErrorCode::kUnsupported:
    case ErrorCode::kBind:
    case ErrorCode::kCast:
    case ErrorCode::kRuntime:
    case ErrorCode::kBadRequest: return kExitQuery;
    default: return kExitData;
  }
}

void report(const Error& e, std::string_view input = {}) {
  std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
  if (e.position() && !input.empty() && *e.position() <= input.size()) {
    std::cerr << "  " << input << "\n  " << std::string(*e.position(), ' ') << "^\n";
  }
}

nlohmann::json read_json_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + p.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kData, p.string() + ": " + e.what());
  }
}

/// Backend selection shared by every subcommand that evaluates queries.
struct RuntimeOptions {
  std::string backend = "mock";
  fs::path rules;
  fs::path dialogue;
  fs::path prompts;
  fs::path cache;
  std::size_t retrieval_k = 20;
  std::size_t limit = 3;
  std::size_t parallelism = 1;
  bool no_prune = false;
  bool no_order = false;
  int timeout_ms = 30000;

  void add_to(CLI::App* app) {
    app->add_option("--backend", backend, "mock | http")->check(CLI::IsMember({"mock", "http"}));
    app->add_option("--rules", rules, "mock answerer rules (JSON)");
    app->add_option("--dialogue", dialogue, "mock dialogue tables (JSON)");
    app->add_option("--prompts", prompts, "directory of <name>.prompt overrides");
    app->add_option("--cache", cache, "persistent LLM call cache (JSON lines)");
    app->add_option("--retrieval-k", retrieval_k, "rows kept by retrieval pruning")->check(CLI::PositiveNumber);
    app->add_option("--limit", limit, "result limit for conversational searches")->check(CLI::PositiveNumber);
    app->add_option("--parallel", parallelism, "concurrent free-text evaluations")->check(CLI::Range(1, 64));
    app->add_flag("--no-prune", no_prune, "disable retrieval pruning");
    app->add_flag("--no-order", no_order, "disable predicate ordering");
    app->add_option("--timeout-ms", timeout_ms, "HTTP backend timeout");
  }

  PromptTemplates templates() const { return prompts.empty() ? PromptTemplates::defaults() : PromptTemplates::load(prompts); }

  QueryOptions query_options() const {
    QueryOptions q;
    q.planner.retrieval_k = retrieval_k;
    q.planner.prune = !no_prune;
    q.planner.order_conjuncts = !no_order;
    q.parallelism = parallelism;
    return q;
  }

  AgentConfig agent_config() const {
    AgentConfig c;
    c.result_limit = limit;
    c.prompts = templates();
    return c;
  }

  std::unique_ptr<TextRuntime> runtime() const {
    std::shared_ptr<const AnswererBackend> b;
    if (backend == "http") {
      b = std::make_shared<HttpBackend>(CompletionConfig::from_env(),
                                        make_http_transport(std::chrono::milliseconds(timeout_ms)), templates());
    } else {
      b = MockBackend::from_json(rules.empty() ? nlohmann::json::object() : read_json_file(rules));
    }
    std::optional<fs::path> cache_file;
    if (!cache.empty()) cache_file = cache;
    return std::make_unique<TextRuntime>(b, cache_file);
  }

  std::shared_ptr<const DialogueBackend> dialogue_backend() const {
    if (backend == "http")
      return std::make_shared<HttpDialogueBackend>(CompletionConfig::from_env(),
                                                   make_http_transport(std::chrono::milliseconds(timeout_ms)),
                                                   agent_config());
    return std::make_shared<MockDialogueBackend>(dialogue.empty() ? nlohmann::json::object() : read_json_file(dialogue));
  }
};

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SUQL engine: SQL with answer() and summary() over free-text columns"};
  app.require_subcommand(1);

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "build a database directory from DDL and rows");
  IngestSpec ingest_spec;
  std::string schema_path, annotations_path, out_dir;
  std::vector<std::string> data_paths;
  ingest_cmd->add_option("--schema", schema_path, "CREATE TABLE script (.sql) or schema.json")->required();
  ingest_cmd->add_option("--data", data_paths, "rows (.jsonl or .csv), one file per table")->required();
  ingest_cmd->add_option("--annotations", annotations_path, "enum annotations (JSON)");
  ingest_cmd->add_option("--out", out_dir, "output directory")->required();

  // query
  auto* query_cmd = app.add_subcommand("query", "run one SUQL statement");
  std::string db_dir, query_text, mode = "suql", table;
  bool explain = false, as_json = false;
  RuntimeOptions query_rt;
  query_cmd->add_option("--db", db_dir, "database directory")->required();
  query_cmd->add_option("query", query_text, "SUQL text (or a request in linearized mode)")->required();
  query_cmd->add_flag("--explain", explain, "print the plan instead of running");
  query_cmd->add_flag("--json", as_json, "print the wire-format JSON");
  query_cmd->add_option("--mode", mode, "suql | linearized")->check(CLI::IsMember({"suql", "linearized"}));
  query_cmd->add_option("--table", table, "target table for linearized mode");
  query_rt.add_to(query_cmd);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "score a batch of questions");
  std::string questions, report_prefix;
  RuntimeOptions eval_rt;
  eval_cmd->add_option("--db", db_dir, "database directory")->required();
  eval_cmd->add_option("--questions", questions, "JSON lines {question, gold, table}")->required();
  eval_cmd->add_option("--out", report_prefix, "report path prefix (writes .json and .csv)")->required();
  eval_rt.add_to(eval_cmd);

  // repl
  auto* repl_cmd = app.add_subcommand("repl", "interactive queries; lines starting with '>' go to the agent");
  RuntimeOptions repl_rt;
  repl_cmd->add_option("--db", db_dir, "database directory")->required();
  repl_rt.add_to(repl_cmd);

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "HTTP service: /query, /chat, /schema, /healthz");
  ServiceConfig svc;
  std::string sessions_dir;
  RuntimeOptions serve_rt;
  serve_cmd->add_option("--db", db_dir, "database directory")->required();
  serve_cmd->add_option("--host", svc.host, "bind address");
  serve_cmd->add_option("--port", svc.port, "port");
  serve_cmd->add_option("--sessions", sessions_dir, "session snapshot directory");
  serve_rt.add_to(serve_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitQuery;
  }

  std::string current_input;
  try {
    if (*ingest_cmd) {
      ingest_spec.schema = schema_path;
      for (const auto& d : data_paths) ingest_spec.data.emplace_back(d);
      ingest_spec.annotations = annotations_path;
      ingest_spec.out_dir = out_dir;
      ingest(ingest_spec);
      Database db = Database::open(out_dir);
      for (const auto& [name, t] : db.catalog().tables())
        std::cout << "ingested " << name << ": " << t->size() << " rows, " << t->schema().free_text_columns().size()
                  << " free-text index(es)\n";
      return kExitOk;
    }

    if (*query_cmd) {
      Database db = Database::open(db_dir);
      auto runtime = query_rt.runtime();
      QueryOptions opts = query_rt.query_options();
      opts.mode = mode;
      opts.table = table;
      std::string text = query_text;
      if (explain && mode == "suql" && to_lower(trim(text)).rfind("explain", 0) != 0) text = "EXPLAIN " + text;
      current_input = text;
      QueryOutcome out = run_query(db, *runtime, text, opts);
      if (as_json) {
        auto j = result_to_json(out.result);
        if (!out.plan_text.empty()) j["plan"] = out.plan_text;
        std::cout << j.dump(2) << "\n";
      } else {
        if (!out.plan_text.empty()) std::cout << out.plan_text;
        if (!out.explain_only) {
          std::cout << format_table(out.result);
          std::cout << out.result.stats.to_json().dump() << "\n";
        }
      }
      return kExitOk;
    }

    if (*eval_cmd) {
      Database db = Database::open(db_dir);
      auto runtime = eval_rt.runtime();
      Agent agent(db, *runtime, eval_rt.dialogue_backend(), eval_rt.agent_config(), eval_rt.query_options());
      BatchReport rep = run_batch(load_examples(questions), agent);
      std::ofstream(report_prefix + ".json", std::ios::binary) << rep.to_json().dump(2) << "\n";
      std::ofstream(report_prefix + ".csv", std::ios::binary) << rep.to_csv();
      std::cout << "examples " << rep.results.size() << "  EM " << rep.em << "  F1 " << rep.f1 << "  substring "
                << rep.substring << "  failures " << rep.failures << "\n";
      return rep.failures ? kExitData : kExitOk;
    }

    if (*repl_cmd) {
      Database db = Database::open(db_dir);
      auto runtime = repl_rt.runtime();
      Agent agent(db, *runtime, repl_rt.dialogue_backend(), repl_rt.agent_config(), repl_rt.query_options());
      DialogueState state{"repl", {}};
      std::string line;
      std::cout << "suql> " << std::flush;
      while (std::getline(std::cin, line)) {
        std::string_view t = trim(line);
        if (t == "\\q" || t == "exit") break;
        if (!t.empty()) {
          try {
            if (t.front() == '>') {
              ChatResult r = agent.chat_turn(state, std::string(trim(t.substr(1))));
              std::cout << r.reply << "\n";
              if (r.suql) std::cout << "  [" << *r.suql << "]\n";
            } else {
              QueryOutcome out = run_query(db, *runtime, t, repl_rt.query_options());
              if (!out.plan_text.empty()) std::cout << out.plan_text;
              if (!out.explain_only) std::cout << format_table(out.result);
            }
          } catch (const Error& e) {
            report(e, t);
          }
        }
        std::cout << "suql> " << std::flush;
      }
      return kExitOk;
    }

    if (*serve_cmd) {
      svc.db_dir = db_dir;
      svc.backend = serve_rt.backend;
      svc.retrieval_k = serve_rt.retrieval_k;
      svc.result_limit = serve_rt.limit;
      svc.parallelism = serve_rt.parallelism;
      svc.prompt_dir = serve_rt.prompts;
      svc.validate();
      Database db = Database::open(db_dir);
      auto runtime = serve_rt.runtime();
      Agent agent(db, *runtime, serve_rt.dialogue_backend(), serve_rt.agent_config(), serve_rt.query_options());
      std::optional<fs::path> snap;
      if (!sessions_dir.empty()) snap = sessions_dir;
      SessionStore sessions(snap);
      Service service(db, *runtime, agent, sessions, serve_rt.query_options());
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on " << svc.host << ":" << svc.port << "\n" << std::flush;
      if (!serve_http(service, svc.host, svc.port, g_stop)) {
        std::cerr << "error: cannot bind " << svc.host << ":" << svc.port << "\n";
        return kExitData;
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    report(e, current_input);
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
