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

#include "suql/agent.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "suql/binder.hpp"
#include "suql/error.hpp"
#include "suql/parser.hpp"
#include "suql/planner.hpp"
#include "suql/strings.hpp"

namespace suql {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string utterance_key(const std::string& s) { return to_lower(trim(s)); }

std::string sql_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out;
}

/// Canonical query text when it parses, else the trimmed input.
std::string canonical_query(const std::string& text) {
  try {
    return print(parse(text));
  } catch (const Error&) {
    return std::string(trim(text));
  }
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

std::vector<std::string> previous_entities(const DialogueState& state) {
  for (auto it = state.turns.rbegin(); it != state.turns.rend(); ++it) {
    if (!it->result_digest) continue;
    auto ents = it->result_digest->value("entities", std::vector<std::string>{});
    if (!ents.empty()) return ents;
  }
  return {};
}

std::string cell_text(const Value& v) {
  if (v.kind() != ValueKind::kArray) return v.to_string();
  std::vector<std::string> items;
  for (const auto& e : v.as_array())
    if (!e.is_null()) items.push_back(e.to_string());
  return join(items, "; ");
}

std::optional<std::size_t> column_named(const ResultSet& rs, std::string_view name) {
  for (std::size_t i = 0; i < rs.columns.size(); ++i)
    if (iequals(rs.columns[i].name, name)) return i;
  return std::nullopt;
}

std::string title_case(const std::string& s) {
  std::string out = s;
  bool start = true;
  for (char& c : out) {
    if (start && std::isalpha(static_cast<unsigned char>(c))) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    start = c == ' ' || c == '-' || c == '&';
  }
  return out;
}

std::string strip_wildcards(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != '%' && c != '_') out += c;
  return std::string(trim(out));
}

// Terminal punctuation unless the text already ends a sentence ("D.C.").
std::string close_sentence(std::string s) {
  if (s.empty() || (s.back() != '.' && s.back() != '!' && s.back() != '?')) s += '.';
  return s;
}

}  // namespace

// --- state -----------------------------------------------------------------------

ojson DialogueState::to_json() const {
  ojson turns_json = ojson::array();
  for (const auto& t : turns) {
    ojson j;
    j["user_utterance"] = t.user_utterance;
    j["parsed_query"] = t.parsed_query ? ojson(*t.parsed_query) : ojson();
    j["agent_utterance"] = t.agent_utterance;
    j["result_digest"] = t.result_digest ? ojson(*t.result_digest) : ojson();
    turns_json.push_back(std::move(j));
  }
  return ojson{{"session_id", session_id}, {"turns", std::move(turns_json)}};
}

DialogueState DialogueState::from_json(const nlohmann::json& j) {
  DialogueState s;
  s.session_id = j.at("session_id").get<std::string>();
  for (const auto& t : j.at("turns")) {
    Turn turn;
    turn.user_utterance = t.at("user_utterance").get<std::string>();
    if (!t.at("parsed_query").is_null()) turn.parsed_query = t.at("parsed_query").get<std::string>();
    turn.agent_utterance = t.at("agent_utterance").get<std::string>();
    if (!t.at("result_digest").is_null()) turn.result_digest = t.at("result_digest");
    s.turns.push_back(std::move(turn));
  }
  return s;
}

void AgentConfig::validate() const {
  if (result_limit < 1) throw Error(ErrorCode::kBadRequest, "result limit must be at least 1");
}

std::string schema_prompt(const Catalog& catalog, std::size_t enum_inline_threshold) {
  std::string out;
  for (const auto& [name, table] : catalog.tables()) {
    out += "CREATE TABLE " + quote_identifier(name) + " (\n";
    const auto& cols = table->schema().columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const Column& c = cols[i];
      std::string type = c.type.to_string();
      std::string note;
      if (c.type.kind == TypeKind::kEnum && c.type.domain->size() > enum_inline_threshold)
        type = c.type.array ? "TEXT[]" : "TEXT";
      if (c.enum_annotation && c.enum_annotation->size() <= enum_inline_threshold) {
        std::vector<std::string> vals;
        for (const auto& v : c.enum_annotation->values()) vals.push_back(quote_string(v));
        note = " -- one of " + join(vals, ", ");
      }
      out += "  " + quote_identifier(c.name) + " " + type + (i + 1 < cols.size() ? "," : "") + note + "\n";
    }
    out += ");\n";
  }
  return out;
}

std::string render_history(const DialogueState& state, std::size_t max_turns) {
  std::size_t start = state.turns.size() > max_turns ? state.turns.size() - max_turns : 0;
  std::string out;
  for (std::size_t i = start; i < state.turns.size(); ++i) {
    const Turn& t = state.turns[i];
    out += "User: " + t.user_utterance + "\n";
    if (t.parsed_query) out += "Target: " + *t.parsed_query + "\n";
    out += "Agent: " + t.agent_utterance + "\n";
  }
  return out;
}

// --- mock backend ----------------------------------------------------------------

MockDialogueBackend::MockDialogueBackend(const nlohmann::json& tables) {
  // value() returns a temporary; keep each table alive across the loop
  const nlohmann::json classifier = tables.value("classifier", nlohmann::json::object());
  const nlohmann::json parser = tables.value("parser", nlohmann::json::object());
  const nlohmann::json relax = tables.value("relax", nlohmann::json::object());
  for (const auto& [k, v] : classifier.items()) classifier_[utterance_key(k)] = v.get<bool>();
  classifier_default_ = tables.value("classifier_default", true);
  for (const auto& [k, v] : parser.items()) parser_[utterance_key(k)] = v.get<std::string>();
  for (const auto& [k, v] : relax.items()) relax_[canonical_query(k)] = v.get<std::string>();
  id_ = "mock-dialogue:" + sha256_hex(tables.dump()).substr(0, 16);
}

bool MockDialogueBackend::needs_knowledge(const DialogueState&, const std::string& utterance) const {
  auto it = classifier_.find(utterance_key(utterance));
  return it == classifier_.end() ? classifier_default_ : it->second;
}

std::string MockDialogueBackend::parse(const DialogueState& state, const std::string& utterance,
                                       const std::string&, const std::string&) const {
  auto it = parser_.find(utterance_key(utterance));
  if (it == parser_.end()) throw Error(ErrorCode::kBackend, "mock parser has no entry for '" + utterance + "'");
  std::string out = it->second;
  auto ents = previous_entities(state);
  if (out.find("{{prev.") != std::string::npos && ents.empty())
    throw Error(ErrorCode::kBackend, "no earlier results to refer to");
  if (!ents.empty()) {
    std::vector<std::string> ilikes;
    for (const auto& e : ents) ilikes.push_back("name ILIKE '" + sql_escape(e) + "'");
    out = replace_all(out, "{{prev.names_ilike}}", join(ilikes, " OR "));
    out = replace_all(out, "{{prev.name}}", sql_escape(ents.front()));
  }
  return out;
}

std::string MockDialogueBackend::relax(const std::string&, const std::vector<std::string>& failed,
                                       const std::string&) const {
  if (failed.empty()) throw Error(ErrorCode::kBackend, "nothing to relax");
  auto it = relax_.find(canonical_query(failed.back()));
  return it == relax_.end() ? failed.back() : it->second;
}

// --- http backend ----------------------------------------------------------------

HttpDialogueBackend::HttpDialogueBackend(CompletionConfig config, std::shared_ptr<Transport> transport,
                                         AgentConfig agent_config)
    : config_(std::move(config)), transport_(std::move(transport)), agent_config_(std::move(agent_config)) {}

std::string HttpDialogueBackend::complete(const std::string& prompt) const {
  return http_complete({ChatMessage{"user", prompt}}, config_, *transport_);
}

std::string HttpDialogueBackend::clean_query_text(const std::string& text) {
  std::string s(trim(text));
  static const std::regex kFence(R"(```(?:sql|suql)?\s*([\s\S]*?)```)", std::regex::icase);
  std::smatch m;
  if (std::regex_search(s, m, kFence)) s = std::string(trim(m[1].str()));
  static const std::regex kLabel(R"(^(?:suql|target|new suql)\s*:\s*)", std::regex::icase);
  s = std::regex_replace(s, kLabel, "");
  return std::string(trim(s));
}

bool HttpDialogueBackend::needs_knowledge(const DialogueState& state, const std::string& utterance) const {
  std::string out = to_lower(trim(complete(render_prompt(
      agent_config_.prompts.needs_knowledge,
      {{"history", render_history(state, agent_config_.history_turns)}, {"utterance", utterance}}))));
  if (out.rfind("yes", 0) == 0) return true;
  if (out.rfind("no", 0) == 0) return false;
  throw Error(ErrorCode::kBackend, "classifier reply is neither yes nor no: " + out);
}

std::string HttpDialogueBackend::parse(const DialogueState& state, const std::string& utterance,
                                       const std::string& schema, const std::string& feedback) const {
  std::string request = utterance;
  if (!feedback.empty()) request += "\n(" + feedback + " Write a corrected query.)";
  return clean_query_text(complete(render_prompt(agent_config_.prompts.parse,
                                                 {{"schema", schema},
                                                  {"history", render_history(state, agent_config_.history_turns)},
                                                  {"utterance", request},
                                                  {"limit", std::to_string(agent_config_.result_limit)}})));
}

std::string HttpDialogueBackend::relax(const std::string& utterance, const std::vector<std::string>& failed,
                                       const std::string& schema) const {
  std::string failed_text;
  for (const auto& f : failed) failed_text += f + "\nThis SQL returned no result.\n";
  return clean_query_text(complete(render_prompt(
      agent_config_.prompts.relax, {{"schema", schema}, {"utterance", utterance}, {"failed_queries", failed_text}})));
}

std::optional<std::string> HttpDialogueBackend::reply(const DialogueState& state, const std::string& utterance,
                                                      const std::string& searched,
                                                      const std::string& results) const {
  return std::string(trim(complete(render_prompt(agent_config_.prompts.reply,
                                                 {{"history", render_history(state, agent_config_.history_turns)},
                                                  {"utterance", utterance},
                                                  {"searched", searched},
                                                  {"results", results}}))));
}

std::optional<std::string> HttpDialogueBackend::extract(const std::string& question, const std::string& results) const {
  return std::string(trim(complete(render_prompt(agent_config_.prompts.extract, {{"question", question}, {"results", results}}))));
}

// --- searched-statement ------------------------------------------------------------

namespace {

struct SearchedParts {
  std::vector<std::string> adjectives;
  std::vector<std::string> phrases;
};

const Column* lookup_column(const Expr& e, const TablePtr& table) {
  const auto* ref = e.as<ColumnRef>();
  if (!ref || !table) return nullptr;
  auto idx = table->schema().find(ref->name);
  return idx ? &table->schema().column(*idx) : nullptr;
}

std::string column_label(const Expr& e) {
  if (const auto* ref = e.as<ColumnRef>()) return ref->name;
  return print(e);
}

std::string literal_text(const Expr& e) {
  if (const auto* lit = e.as<Literal>()) {
    if (lit->value.kind() == ValueKind::kText) return lit->value.as_text();
    return print(e);
  }
  return print(e);
}

bool is_place_column(const std::string& name) {
  std::string n = to_lower(name);
  return n == "location" || n == "city" || n == "area" || n == "neighborhood";
}

std::string article_for(const std::string& word) {
  return !word.empty() && std::string("aeiouAEIOU").find(word.front()) != std::string::npos ? "an" : "a";
}

/// answer(col, question) = 'value' → phrase.
std::string answer_phrase(const std::string& question, const std::string& value) {
  std::string q = to_lower(trim(question));
  while (!q.empty() && (q.back() == '?' || q.back() == ' ')) q.pop_back();
  std::smatch m;
  static const std::regex kWhat(R"(^what is the (.+)$)");
  if (std::regex_match(q, m, kWhat)) return "with " + article_for(value) + " " + value + " " + m[1].str();
  if (iequals(value, "yes")) {
    static const std::vector<std::pair<std::regex, std::string>> kRules = {
        {std::regex(R"(^do you find (?:this|the) \w+ to be (.+)$)"), "that are "},
        {std::regex(R"(^(?:is|are) (?:this|the|these) \w+ (.+)$)"), "that are "},
        {std::regex(R"(^(?:does|do|did) (?:this|the|these) \w+ (.+)$)"), "that "},
        {std::regex(R"(^(?:was|were) (?:this|the|these) \w+ (.+)$)"), "that were "},
    };
    for (const auto& [re, prefix] : kRules)
      if (std::regex_match(q, m, re)) return prefix + m[1].str();
  }
  return "where the answer to \"" + std::string(trim(question)) + "\" is '" + value + "'";
}

std::string cmp_phrase(const std::string& col, CmpOp op, const std::string& value) {
  switch (op) {
    case CmpOp::kEq: return "with " + col + " " + value;
    case CmpOp::kNe: return "with " + col + " other than " + value;
    case CmpOp::kLt: return "with " + col + " below " + value;
    case CmpOp::kLe: return "with " + col + " at most " + value;
    case CmpOp::kGt: return "with " + col + " above " + value;
    case CmpOp::kGe: return "with " + col + " at least " + value;
    case CmpOp::kILike: return "with " + col + " like " + strip_wildcards(value);
  }
  return {};
}

std::string atom_phrase(const Predicate& p, const TablePtr& table, SearchedParts* parts);

std::string nested_phrase(const Predicate& p, const TablePtr& table) {
  if (const auto* a = p.as<AndPred>()) {
    std::vector<std::string> out;
    for (const auto& c : a->children) out.push_back(nested_phrase(c, table));
    return join(out, " and ");
  }
  if (const auto* o = p.as<OrPred>()) {
    std::vector<std::string> out;
    for (const auto& c : o->children) out.push_back(nested_phrase(c, table));
    return "(" + join(out, " or ") + ")";
  }
  return atom_phrase(p, table, nullptr);
}

std::string atom_phrase(const Predicate& p, const TablePtr& table, SearchedParts* parts) {
  if (const auto* any = p.as<AnyEq>()) {
    const Column* col = lookup_column(any->column, table);
    std::string v = literal_text(any->literal);
    if (parts && col && col->enum_domain()) {
      parts->adjectives.push_back(title_case(v));
      return {};
    }
    return "with " + v + " among " + column_label(any->column);
  }
  if (const auto* cmp = p.as<Comparison>()) {
    const Expr* col_side = &cmp->lhs;
    const Expr* val_side = &cmp->rhs;
    CmpOp op = cmp->op;
    if (cmp->lhs.as<Literal>() && !cmp->rhs.as<Literal>()) {
      std::swap(col_side, val_side);
      switch (op) {
        case CmpOp::kLt: op = CmpOp::kGt; break;
        case CmpOp::kLe: op = CmpOp::kGe; break;
        case CmpOp::kGt: op = CmpOp::kLt; break;
        case CmpOp::kGe: op = CmpOp::kLe; break;
        default: break;
      }
    }
    std::string value = literal_text(*val_side);
    if (const auto* ans = col_side->as<AnswerCall>(); ans && op == CmpOp::kEq && val_side->as<Literal>())
      return answer_phrase(ans->question, value);
    if (const auto* ref = col_side->as<ColumnRef>(); ref && val_side->as<Literal>()) {
      if (iequals(ref->name, "name") && (op == CmpOp::kEq || op == CmpOp::kILike)) return "named " + strip_wildcards(value);
      if (is_place_column(ref->name) && op == CmpOp::kEq) return "in " + value;
      return cmp_phrase(ref->name, op, value);
    }
    return "where " + print(p);
  }
  if (const auto* n = p.as<NotPred>()) {
    if (const auto* cmp = n->child->as<Comparison>(); cmp && cmp->op == CmpOp::kEq) {
      if (const auto* ref = cmp->lhs.as<ColumnRef>(); ref && iequals(ref->name, "name") && cmp->rhs.as<Literal>())
        return "other than " + literal_text(cmp->rhs);
    }
    return "not " + nested_phrase(*n->child, table);
  }
  if (const auto* in = p.as<InList>()) {
    std::vector<std::string> vals;
    for (const auto& e : in->items) vals.push_back(literal_text(e));
    return "with " + column_label(in->operand) + " in " + join(vals, ", ");
  }
  if (const auto* ac = p.as<ArrayContains>()) {
    std::vector<std::string> vals;
    for (const auto& e : ac->items) vals.push_back(literal_text(e));
    return "with " + column_label(ac->column) + " including " + join(vals, ", ");
  }
  if (p.as<OrPred>() || p.as<AndPred>()) return nested_phrase(p, table);
  return "where " + print(p);
}

void collect_conjuncts(const Predicate& p, std::vector<const Predicate*>& out) {
  if (const auto* a = p.as<AndPred>()) {
    for (const auto& c : a->children) collect_conjuncts(c, out);
  } else {
    out.push_back(&p);
  }
}

}  // namespace

std::string render_searched(const QueryAst& query, const Catalog& catalog) {
  TablePtr table;
  std::string table_name;
  for (const auto& f : query.from)
    if (!f.is_unnest()) {
      table_name = f.table;
      table = catalog.find(f.table);
      break;
    }
  std::string noun = table_name.empty() ? "rows"
                     : (!table_name.empty() && table_name.back() == 's') ? table_name
                                                                         : "rows of " + table_name;
  SearchedParts parts;
  if (query.where) {
    std::vector<const Predicate*> conjuncts;
    collect_conjuncts(*query.where, conjuncts);
    for (const auto* c : conjuncts) {
      std::string phrase = atom_phrase(*c, table, &parts);
      if (!phrase.empty()) parts.phrases.push_back(std::move(phrase));
    }
  }
  std::string out = "I searched for ";
  if (parts.adjectives.empty() && parts.phrases.empty()) out += "all ";
  for (const auto& a : parts.adjectives) out += a + " ";
  out += noun;
  if (!parts.phrases.empty()) out += " " + join(parts.phrases, ", ");
  if (!query.order_by.empty()) {
    std::vector<std::string> keys;
    for (const auto& o : query.order_by) keys.push_back(print(o.expr) + (o.desc ? " (highest first)" : " (lowest first)"));
    out += ", ordered by " + join(keys, ", ");
  }
  return close_sentence(out);
}

// --- agent -----------------------------------------------------------------------

Agent::Agent(const Database& db, TextRuntime& runtime, std::shared_ptr<const DialogueBackend> backend,
             AgentConfig config, QueryOptions query_options)
    : db_(db),
      runtime_(runtime),
      backend_(std::move(backend)),
      config_(std::move(config)),
      query_options_(std::move(query_options)),
      schema_(schema_prompt(db.catalog(), config_.enum_inline_threshold)) {
  config_.validate();
}

bool Agent::needs_knowledge(const DialogueState& state, const std::string& utterance) const {
  try {
    return backend_->needs_knowledge(state, utterance);
  } catch (const std::exception&) {
    return true;
  }
}

QueryAst Agent::clamp_limit(QueryAst query) const {
  bool aggregate = false;
  for (const auto& item : query.select)
    if (item.expr && contains_aggregate(*item.expr)) aggregate = true;
  if (aggregate) return query;
  auto cap = static_cast<std::int64_t>(config_.result_limit);
  if (!query.limit || *query.limit > cap) query.limit = cap;
  return query;
}

ParseOutcome Agent::parse_utterance(const DialogueState& state, const std::string& utterance) const {
  ParseOutcome out;
  std::string feedback;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string candidate;
    try {
      candidate = backend_->parse(state, utterance, schema_, feedback);
    } catch (const std::exception& e) {
      out.error = std::string("parser backend failed: ") + e.what();
      feedback = out.error;
      continue;
    }
    out.candidates.push_back(candidate);
    try {
      QueryAst q = clamp_limit(parse(candidate));
      bind(q, db_.catalog());
      out.query = std::move(q);
      out.error.clear();
      return out;
    } catch (const Error& e) {
      out.error = std::string(error_code_name(e.code())) + ": " + e.what();
      feedback = "The query `" + candidate + "` failed with " + out.error + ".";
    }
  }
  return out;
}

ResultSet Agent::run(const QueryAst& query, std::string* plan_text) const {
  PlanTree p = plan(bind(query, db_.catalog()), query_options_.planner);
  if (plan_text) *plan_text = explain(p);
  ExecContext ctx{runtime_, db_.indexes(), query_options_.parallelism};
  return execute(p, ctx);
}

RetryOutcome Agent::execute_with_retry(const std::string& question, const QueryAst& query, std::size_t budget) const {
  RetryOutcome out;
  QueryAst current = query;
  std::set<std::string> seen;
  for (;;) {
    std::string text = print(current);
    seen.insert(text);
    out.executed.push_back(text);
    out.final_query = current;
    out.result = run(current, &out.plan_text);
    ++out.attempts;
    if (!out.result.rows.empty()) return out;
    if (out.attempts > budget) break;
    std::string proposal;
    try {
      proposal = backend_->relax(question, out.executed, schema_);
    } catch (const std::exception&) {
      break;
    }
    std::optional<QueryAst> next;
    try {
      QueryAst q = clamp_limit(parse(proposal));
      bind(q, db_.catalog());
      next = std::move(q);
    } catch (const Error&) {
      break;
    }
    if (seen.count(print(*next))) break;  // nothing new to try
    current = std::move(*next);
  }
  out.no_result = true;
  return out;
}

std::string Agent::templated_results(const ResultSet& rs) const {
  auto name_col = column_named(rs, "name");
  auto rating_col = column_named(rs, "rating");
  std::vector<std::string> items;
  for (const auto& row : rs.rows) {
    std::string item;
    if (name_col) {
      item = cell_text(row[*name_col]);
      if (rating_col && !row[*rating_col].is_null()) item += " (rating " + cell_text(row[*rating_col]) + ")";
    } else {
      std::vector<std::string> cells;
      for (const auto& v : row)
        if (!v.is_null()) cells.push_back(cell_text(v));
      item = join(cells, ", ");
    }
    items.push_back(std::move(item));
  }
  return join(items, "; ");
}

std::string Agent::respond(const DialogueState& state, const std::string& utterance, const QueryAst& query,
                           const RetryOutcome& outcome) const {
  std::string searched = render_searched(query, db_.catalog());
  if (outcome.no_result) return searched + " Sorry, I found " + kNoResultsMarker + " matching your request.";
  std::string listing = templated_results(outcome.result);
  std::string fallback = searched + " I found " + std::to_string(outcome.result.rows.size()) +
                         close_sentence((outcome.result.rows.size() == 1 ? " result: " : " results: ") + listing);
  try {
    auto generated = backend_->reply(state, utterance, searched, listing);
    if (generated && !trim(*generated).empty()) return searched + " " + std::string(trim(*generated));
  } catch (const std::exception&) {
  }
  return fallback;
}

nlohmann::json result_digest(const ResultSet& rs, std::size_t max_rows) {
  std::size_t col = column_named(rs, "name").value_or(0);
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : rs.columns) cols.push_back(c.name);
  nlohmann::json ents = nlohmann::json::array();
  for (std::size_t i = 0; i < rs.rows.size() && i < max_rows; ++i)
    if (col < rs.rows[i].size() && !rs.rows[i][col].is_null()) ents.push_back(cell_text(rs.rows[i][col]));
  return nlohmann::json{{"row_count", rs.rows.size()}, {"columns", cols}, {"entities", ents}};
}

ChatResult Agent::chat_turn(DialogueState& state, const std::string& utterance) const {
  ChatResult out;
  out.session_id = state.session_id;
  Turn turn;
  turn.user_utterance = utterance;
  ojson trace;
  trace["utterance"] = utterance;

  bool lookup = needs_knowledge(state, utterance);
  trace["needs_knowledge"] = lookup;
  if (!lookup) {
    std::optional<std::string> generated;
    try {
      generated = backend_->reply(state, utterance, "", "");
    } catch (const std::exception&) {
    }
    out.reply = generated && !trim(*generated).empty()
                    ? std::string(trim(*generated))
                    : "Hello! I can search the database for you. What would you like to find?";
  } else {
    ParseOutcome parsed = parse_utterance(state, utterance);
    trace["parse"] = ojson{{"candidates", parsed.candidates}, {"error", parsed.error}};
    if (!parsed.query) {
      out.reply = "Sorry, I could not turn that request into a database query. Could you rephrase it?";
    } else {
      try {
        RetryOutcome r = execute_with_retry(utterance, *parsed.query, config_.retry_budget);
        out.searched = render_searched(r.final_query, db_.catalog());
        out.reply = respond(state, utterance, r.final_query, r);
        out.suql = print(r.final_query);
        out.results = result_to_json(r.result);
        turn.parsed_query = *out.suql;
        turn.result_digest = result_digest(r.result, config_.result_limit);
        trace["suql"] = *out.suql;
        trace["executed"] = r.executed;
        trace["explain"] = r.plan_text;
        trace["stats"] = r.result.stats.to_json();
        trace["attempts"] = r.attempts;
        trace["no_result"] = r.no_result;
      } catch (const Error& e) {
        trace["error"] = ojson{{"code", error_code_name(e.code())}, {"message", e.what()}};
        out.reply = "Sorry, the search failed (" + std::string(error_code_name(e.code())) + "). Please try again.";
      }
    }
  }
  turn.agent_utterance = out.reply;
  state.turns.push_back(std::move(turn));
  out.trace = std::move(trace);
  return out;
}

// --- sessions ----------------------------------------------------------------------

SessionStore::SessionStore(std::optional<fs::path> snapshot_dir) : dir_(std::move(snapshot_dir)) {
  if (dir_) fs::create_directories(*dir_);
}

std::shared_ptr<SessionStore::Session> SessionStore::get_or_create(const std::optional<std::string>& session_id) {
  std::lock_guard lk(mu_);
  auto snapshot = [&](const std::string& id) { return *dir_ / (id + ".json"); };
  if (session_id) {
    for (char c : *session_id)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
        throw Error(ErrorCode::kBadRequest, "session id may only contain letters, digits, '-' and '_'");
    if (session_id->empty()) throw Error(ErrorCode::kBadRequest, "empty session id");
    auto it = sessions_.find(*session_id);
    if (it != sessions_.end()) return it->second;
    auto s = std::make_shared<Session>();
    s->state.session_id = *session_id;
    if (dir_ && fs::exists(snapshot(*session_id))) {
      std::ifstream in(snapshot(*session_id));
      s->state = DialogueState::from_json(nlohmann::json::parse(in));
    }
    sessions_[*session_id] = s;
    return s;
  }
  std::string id;
  do {
    id = "s" + std::to_string(next_id_++);
  } while (sessions_.count(id) || (dir_ && fs::exists(snapshot(id))));
  auto s = std::make_shared<Session>();
  s->state.session_id = id;
  sessions_[id] = s;
  return s;
}

void SessionStore::save(const Session& session) const {
  if (!dir_) return;
  fs::path p = *dir_ / (session.state.session_id + ".json");
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write session snapshot " + tmp.string());
    out << session.state.to_json().dump(2) << "\n";
  }
  fs::rename(tmp, p);
}

std::size_t SessionStore::size() const {
  std::lock_guard lk(mu_);
  return sessions_.size();
}

ChatResult chat(const Agent& agent, SessionStore& store, const std::optional<std::string>& session_id,
                const std::string& utterance) {
  auto session = store.get_or_create(session_id);
  std::lock_guard lk(session->mu);
  ChatResult r = agent.chat_turn(session->state, utterance);
  store.save(*session);
  return r;
}

}  // namespace suql
