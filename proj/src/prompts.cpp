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

#include "suql/prompts.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "suql/error.hpp"

namespace suql {

namespace {

const char* kAnswer = R"(You read short documents and answer a question about them.
Keep the answer brief: a word, a phrase or one sentence.
If the documents do not contain the information, reply exactly: no info
{{ type_hint }}
Documents:
{{ documents }}

Question: {{ question }}
Answer:)";

const char* kFilter = R"(Decide whether a statement about the documents below holds.
Statement: {{ clause }}
The left side of the statement stands for the answer to the question "{{ question }}" over these documents.

Documents:
{{ documents }}

Reply with one word: correct if the statement holds, incorrect otherwise.)";

const char* kClassify = R"(Map the value "{{ value }}" onto the allowed choices that mean the same or nearly the same thing.
Choices:
{{ choices }}
Use only the choices listed. Reply with the matching index numbers, separated by commas (comma separated index numbers), or with nothing if no choice fits.)";

const char* kNeedsKnowledge = R"(A user talks to an assistant that can look things up in a database.
Decide whether the latest user message requires a database lookup to answer well.
Greetings, thanks and general knowledge questions do not.

{{ history }}
User: {{ utterance }}
Lookup needed? Reply Yes or No:)";

const char* kParse = R"(Translate the latest user request into one SUQL query.
SUQL is SQL with two extra functions for free-text columns:
  answer(column, 'question') returns a short answer computed from the text.
  summary(column) returns a summary of the text.
Use answer(...) = 'Yes' to filter on properties only described in free text.
Keep LIMIT at most {{ limit }} for searches.

Schema:
{{ schema }}

Conversation so far:
{{ history }}
User: {{ utterance }}
SUQL:)";

const char* kRelax = R"(The queries below returned no rows for the user request "{{ utterance }}".
Write a less restrictive SUQL query over the same schema that still serves the request,
for example by dropping a condition or merging two free-text conditions into one question.

Schema:
{{ schema }}

Queries that returned nothing:
{{ failed_queries }}
New SUQL:)";

const char* kReply = R"(Write a short, friendly reply to the user using only the results below.
Never mention places or facts that are not in the results.
{{ history }}
User: {{ utterance }}
We searched for: {{ searched }}
Results:
{{ results }}
Reply:)";

const char* kExtract = R"(Give the shortest answer to the question using the database results.
Question: {{ question }}
Results:
{{ results }}
Short answer:)";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read prompt file " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

PromptTemplates PromptTemplates::defaults() {
  return PromptTemplates{kAnswer, kFilter, kClassify, kNeedsKnowledge, kParse, kRelax, kReply, kExtract};
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  PromptTemplates t = defaults();
  std::map<std::string, std::string*> slots{
      {"answer", &t.answer}, {"filter", &t.filter}, {"classify", &t.classify},
      {"needs_knowledge", &t.needs_knowledge}, {"parse", &t.parse}, {"relax", &t.relax},
      {"reply", &t.reply}, {"extract", &t.extract}};
  for (auto& [name, slot] : slots) {
    auto path = dir / (name + ".prompt");
    if (std::filesystem::exists(path)) *slot = read_file(path);
  }
  return t;
}

std::map<std::string, const std::string*> PromptTemplates::named() const {
  return {{"answer", &answer}, {"filter", &filter}, {"classify", &classify},
          {"needs_knowledge", &needs_knowledge}, {"parse", &parse}, {"relax", &relax},
          {"reply", &reply}, {"extract", &extract}};
}

std::string render_prompt(const std::string& tmpl, const std::map<std::string, std::string>& vars) {
  static const std::regex kSlot(R"(\{\{\s*([A-Za-z_][A-Za-z0-9_]*)\s*\}\})");
  std::string out;
  auto begin = std::sregex_iterator(tmpl.begin(), tmpl.end(), kSlot);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out.append(tmpl, last, static_cast<std::size_t>(it->position()) - last);
    auto found = vars.find((*it)[1].str());
    if (found != vars.end()) out += found->second;
    last = static_cast<std::size_t>(it->position() + it->length());
  }
  out.append(tmpl, last);
  return out;
}

}  // namespace suql
