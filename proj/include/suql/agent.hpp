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

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "suql/database.hpp"
#include "suql/http_client.hpp"
#include "suql/prompts.hpp"

namespace suql {

/// One exchange: the user's utterance, the query it carried (only when the
/// lookup classifier fired) and the agent's reply.
struct Turn {
  std::string user_utterance;
  std::optional<std::string> parsed_query;
  std::string agent_utterance;
  /// {"row_count", "columns", "entities"}; entities are the `name` column
  /// values (or the first column) of the returned rows.
  std::optional<nlohmann::json> result_digest;
};

struct DialogueState {
  std::string session_id;
  std::vector<Turn> turns;  // append-only

  nlohmann::ordered_json to_json() const;
  static DialogueState from_json(const nlohmann::json& j);
};

struct AgentConfig {
  std::size_t result_limit = 3;
  std::size_t retry_budget = 2;
  std::size_t history_turns = 8;
  std::size_t enum_inline_threshold = 10;
  PromptTemplates prompts = PromptTemplates::defaults();

  void validate() const;  // throws Error(kBadRequest)
};

/// Schema text for parser prompts: CREATE TABLE statements with enum
/// values inlined only for domains of at most `enum_inline_threshold`.
std::string schema_prompt(const Catalog& catalog, std::size_t enum_inline_threshold);

/// "User: ... / Target: ... / Agent: ..." lines for the last `max_turns`.
std::string render_history(const DialogueState& state, std::size_t max_turns);

/// The conversational model behind the agent's three decisions.
class DialogueBackend {
 public:
  virtual ~DialogueBackend() = default;
  virtual std::string id() const = 0;
  virtual bool needs_knowledge(const DialogueState& state, const std::string& utterance) const = 0;
  /// `feedback` is empty on the first try and describes the failure of the
  /// previous candidate on the reformulation try.
  virtual std::string parse(const DialogueState& state, const std::string& utterance, const std::string& schema,
                            const std::string& feedback) const = 0;
  /// Proposes a less restrictive query given every query that came back empty.
  virtual std::string relax(const std::string& utterance, const std::vector<std::string>& failed,
                            const std::string& schema) const = 0;
  /// Free-form reply text; nullopt selects the templated reply.
  virtual std::optional<std::string> reply(const DialogueState& state, const std::string& utterance,
                                           const std::string& searched, const std::string& results) const = 0;
  /// Succinct answer for batch QA; nullopt selects the first result cell.
  virtual std::optional<std::string> extract(const std::string& question, const std::string& results) const = 0;
};

/// Lookup-table double: {"classifier": {utterance: bool}, "classifier_default",
/// "parser": {utterance: suql}, "relax": {failed suql: suql}}. Utterance keys
/// match case-insensitively after trimming; relax keys match on canonical
/// query text. Parser targets may use {{prev.name}} (SQL-escaped first entity
/// of the latest turn with results) and {{prev.names_ilike}}
/// (`name ILIKE 'a' OR name ILIKE 'b' ...`).
class MockDialogueBackend : public DialogueBackend {
 public:
  explicit MockDialogueBackend(const nlohmann::json& tables);

  std::string id() const override { return id_; }
  bool needs_knowledge(const DialogueState& state, const std::string& utterance) const override;
  std::string parse(const DialogueState& state, const std::string& utterance, const std::string& schema,
                    const std::string& feedback) const override;
  std::string relax(const std::string& utterance, const std::vector<std::string>& failed,
                    const std::string& schema) const override;
  std::optional<std::string> reply(const DialogueState&, const std::string&, const std::string&,
                                   const std::string&) const override {
    return std::nullopt;
  }
  std::optional<std::string> extract(const std::string&, const std::string&) const override { return std::nullopt; }

 private:
  std::map<std::string, bool> classifier_;
  bool classifier_default_ = true;
  std::map<std::string, std::string> parser_;
  std::map<std::string, std::string> relax_;
  std::string id_;
};

/// Chat-completion backend driven by the prompt templates.
class HttpDialogueBackend : public DialogueBackend {
 public:
  HttpDialogueBackend(CompletionConfig config, std::shared_ptr<Transport> transport, AgentConfig agent_config);

  std::string id() const override { return "http:" + config_.model; }
  bool needs_knowledge(const DialogueState& state, const std::string& utterance) const override;
  std::string parse(const DialogueState& state, const std::string& utterance, const std::string& schema,
                    const std::string& feedback) const override;
  std::string relax(const std::string& utterance, const std::vector<std::string>& failed,
                    const std::string& schema) const override;
  std::optional<std::string> reply(const DialogueState& state, const std::string& utterance,
                                   const std::string& searched, const std::string& results) const override;
  std::optional<std::string> extract(const std::string& question, const std::string& results) const override;

  /// Strips code fences and a leading "SUQL:"/"Target:" label.
  static std::string clean_query_text(const std::string& text);

 private:
  std::string complete(const std::string& prompt) const;

  CompletionConfig config_;
  std::shared_ptr<Transport> transport_;
  AgentConfig agent_config_;
};

/// Deterministic "I searched for ..." sentence rendered from the query's
/// table and filters.
std::string render_searched(const QueryAst& query, const Catalog& catalog);

inline constexpr const char* kNoResultsMarker = "no results";

struct ParseOutcome {
  std::optional<QueryAst> query;       // parsed, bound and LIMIT-clamped
  std::vector<std::string> candidates;  // raw backend outputs, in order
  std::string error;                    // set when no candidate survived
};

struct RetryOutcome {
  ResultSet result;
  std::size_t attempts = 0;
  bool no_result = false;
  QueryAst final_query;
  std::vector<std::string> executed;  // canonical text of each attempt
  std::string plan_text;              // plan of the final attempt
};

struct ChatResult {
  std::string session_id;
  std::string reply;
  std::string searched;  // empty when no query ran
  std::optional<std::string> suql;
  std::optional<nlohmann::ordered_json> results;
  nlohmann::ordered_json trace;
};

class Agent {
 public:
  Agent(const Database& db, TextRuntime& runtime, std::shared_ptr<const DialogueBackend> backend,
        AgentConfig config = {}, QueryOptions query_options = {});

  /// Backend failures default to true: searching is the safer choice.
  bool needs_knowledge(const DialogueState& state, const std::string& utterance) const;
  /// Parse + bind + clamp; one reformulation try on failure.
  ParseOutcome parse_utterance(const DialogueState& state, const std::string& utterance) const;
  /// Executes, and while the result is empty and budget remains asks the
  /// backend for a relaxed query. Stops early when the backend repeats a
  /// query that already failed.
  RetryOutcome execute_with_retry(const std::string& question, const QueryAst& query, std::size_t budget) const;
  /// Searched-statement, then either the no-result declaration or a reply
  /// grounded in the rows.
  std::string respond(const DialogueState& state, const std::string& utterance, const QueryAst& query,
                      const RetryOutcome& outcome) const;
  /// classifier → parser → execute_with_retry → respond; never throws for
  /// stage failures, which degrade to apologetic replies.
  ChatResult chat_turn(DialogueState& state, const std::string& utterance) const;

  /// LIMIT ≤ result_limit for non-aggregate queries.
  QueryAst clamp_limit(QueryAst query) const;
  std::string templated_results(const ResultSet& rs) const;

  const Database& database() const { return db_; }
  const DialogueBackend& backend() const { return *backend_; }
  const AgentConfig& config() const { return config_; }
  const std::string& schema_text() const { return schema_; }

 private:
  ResultSet run(const QueryAst& query, std::string* plan_text) const;

  const Database& db_;
  TextRuntime& runtime_;
  std::shared_ptr<const DialogueBackend> backend_;
  AgentConfig config_;
  QueryOptions query_options_;
  std::string schema_;
};

/// Summary of a result set stored on the turn.
nlohmann::json result_digest(const ResultSet& rs, std::size_t max_rows);

/// In-memory sessions with optional JSON snapshots (<dir>/<id>.json); one
/// turn at a time per session, sessions independent of each other.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> snapshot_dir = std::nullopt);

  struct Session {
    std::mutex mu;
    DialogueState state;
  };

  /// Existing session (memory, then snapshot) or a new one. An unknown
  /// explicit id creates a session with that id.
  std::shared_ptr<Session> get_or_create(const std::optional<std::string>& session_id);
  void save(const Session& session) const;
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_id_ = 1;
};

/// Runs one turn on a stored session under its lock and snapshots it.
ChatResult chat(const Agent& agent, SessionStore& store, const std::optional<std::string>& session_id,
                const std::string& utterance);

}  // namespace suql
