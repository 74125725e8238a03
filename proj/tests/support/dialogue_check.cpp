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

#include "dialogue_check.hpp"

#include "searched_oracle.hpp"
#include "suql/agent.hpp"
#include "suql/database.hpp"
#include "suql/parser.hpp"
#include "suql/strings.hpp"
#include "suql/text_runtime.hpp"

namespace suql::testing {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

std::vector<std::string> check_dialogue(const Fixture& fixture) {
  std::vector<std::string> failures;
  nlohmann::json tables = fixture.json_asset("dialogue");
  Database db(fixture.catalog);
  TextRuntime runtime(MockBackend::from_json(fixture.rules));
  AgentConfig cfg;
  Agent agent(db, runtime, std::make_shared<MockDialogueBackend>(tables), cfg);

  std::vector<std::string> all_names;
  for (const auto& [tname, t] : fixture.catalog.tables()) {
    auto col = t->schema().find("name");
    if (!col) continue;
    for (std::size_t r = 0; r < t->size(); ++r)
      if (!t->row(r)[*col].is_null()) all_names.push_back(t->row(r)[*col].to_string());
  }

  DialogueState state;
  state.session_id = "script";
  std::size_t n = 0;
  for (const auto& step : tables.at("script")) {
    ++n;
    const std::string utterance = step.at("utterance");
    const nlohmann::json& expect = step.at("expect");
    const std::string kind = expect.at("kind");
    auto fail = [&](const std::string& what) {
      failures.push_back("turn " + std::to_string(n) + " (" + utterance + "): " + what);
    };
    ChatResult r = agent.chat_turn(state, utterance);
    if (state.turns.size() != n) fail("turn not appended");
    bool lookup = r.trace.value("needs_knowledge", true);
    std::size_t attempts = r.trace.value("attempts", std::size_t{0});
    bool no_result = r.trace.value("no_result", false);
    if (attempts > cfg.retry_budget + 1) fail("attempts " + std::to_string(attempts) + " exceed budget");

    if (r.suql) {
      // Every executed turn opens with the searched-statement for its final query.
      std::string oracle = oracle_searched(parse(*r.suql), fixture.catalog);
      if (r.searched != oracle) fail("searched '" + r.searched + "' != oracle '" + oracle + "'");
      if (r.reply.rfind(r.searched, 0) != 0) fail("reply does not open with the searched-statement");
    }

    if (kind == "chitchat") {
      if (lookup || r.suql) fail("expected chitchat");
    } else if (kind == "parse_failure") {
      if (!lookup || r.suql) fail("expected parse failure without a query");
      if (!contains(lower(r.reply), "sorry")) fail("parse failure reply does not apologise");
    } else if (kind == "results" || kind == "no_result") {
      if (!r.suql) {
        fail("no query executed");
        continue;
      }
      if (expect.contains("attempts") && attempts != expect["attempts"].get<std::size_t>())
        fail("attempts " + std::to_string(attempts) + " != " + expect["attempts"].dump());
      if (kind == "results") {
        if (no_result) fail("unexpected empty result");
        auto ents = state.turns.back().result_digest.value_or(nlohmann::json::object()).value("entities", nlohmann::json::array());
        if (expect.contains("entities") && ents != expect["entities"])
          fail("entities " + ents.dump() + " != " + expect["entities"].dump());
        for (const auto& e : ents)
          if (!contains(r.reply, e.get<std::string>())) fail("reply omits entity " + e.dump());
        if (expect.contains("searched") && r.searched != expect["searched"].get<std::string>())
          fail("searched '" + r.searched + "'");
      } else {
        if (!no_result) fail("expected an empty result");
        if (!contains(r.reply, kNoResultsMarker)) fail("no-result reply lacks the declaration");
        for (const auto& name : all_names)
          if (contains(r.reply, name)) fail("no-result reply names entity '" + name + "'");
      }
    } else {
      fail("unknown expectation kind " + kind);
    }
  }
  return failures;
}

}  // namespace suql::testing
