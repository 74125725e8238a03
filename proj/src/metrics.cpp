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

#include "suql/metrics.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "suql/error.hpp"
#include "suql/fixtures.hpp"
#include "suql/parser.hpp"
#include "suql/strings.hpp"

namespace suql {

namespace {

std::string normalized_joined(const std::string& text) { return join(normalize_answer(text), " "); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string first_cell(const ResultSet& rs) {
  if (rs.rows.empty() || rs.rows.front().empty() || rs.rows.front().front().is_null()) return {};
  return rs.rows.front().front().to_string();
}

std::string results_text(const ResultSet& rs) {
  std::string out;
  for (const auto& row : rs.rows) {
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < row.size() && i < rs.columns.size(); ++i)
      cells.push_back(rs.columns[i].name + ": " + row[i].to_string());
    out += join(cells, ", ") + "\n";
  }
  return out;
}

}  // namespace

std::vector<std::string> normalize_answer(const std::string& text) {
  std::string cleaned;
  for (unsigned char c : text) {
    if (c < 0x80 && std::ispunct(c)) continue;
    cleaned += static_cast<char>(std::tolower(c));
  }
  std::vector<std::string> out;
  std::istringstream ss(cleaned);
  std::string tok;
  while (ss >> tok)
    if (tok != "a" && tok != "an" && tok != "the") out.push_back(tok);
  return out;
}

int exact_match(const std::string& pred, const std::string& gold) {
  return normalize_answer(pred) == normalize_answer(gold) ? 1 : 0;
}

double token_f1(const std::string& pred, const std::string& gold) {
  auto p = normalize_answer(pred), g = normalize_answer(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : g) ++counts[t];
  int common = 0;
  for (const auto& t : p)
    if (counts[t] > 0) {
      --counts[t];
      ++common;
    }
  if (common == 0) return 0.0;
  double precision = static_cast<double>(common) / static_cast<double>(p.size());
  double recall = static_cast<double>(common) / static_cast<double>(g.size());
  return 2 * precision * recall / (precision + recall);
}

bool substring_match(const std::string& pred, const std::string& gold) {
  std::string p = normalized_joined(pred), g = normalized_joined(gold);
  if (p.empty() || g.empty()) return p.empty() && g.empty();
  return g.find(p) != std::string::npos || p.find(g) != std::string::npos;
}

std::vector<QAExample> load_examples(const std::filesystem::path& path) {
  std::vector<QAExample> out;
  std::size_t n = 0;
  for (const auto& j : read_jsonl(path)) {
    ++n;
    QAExample ex{j.value("id", "ex" + std::to_string(n)), j.at("question").get<std::string>(),
                 j.at("gold").get<std::string>(), j.value("table", "")};
    if (trim(ex.gold).empty()) throw Error(ErrorCode::kData, "example " + ex.id + " has an empty gold answer");
    out.push_back(std::move(ex));
  }
  return out;
}

BatchReport run_batch(const std::vector<QAExample>& examples, const Agent& agent) {
  BatchReport report;
  for (const auto& ex : examples) {
    ExampleResult r;
    r.example = ex;
    DialogueState fresh;
    ParseOutcome parsed = agent.parse_utterance(fresh, ex.question);
    if (!parsed.query) {
      r.failed = true;
      r.error = parsed.error;
      if (!parsed.candidates.empty()) r.suql = parsed.candidates.back();
    } else {
      try {
        RetryOutcome out = agent.execute_with_retry(ex.question, *parsed.query, agent.config().retry_budget);
        r.suql = print(out.final_query);
        r.attempts = out.attempts;
        std::optional<std::string> extracted;
        if (!out.result.rows.empty()) {
          try {
            extracted = agent.backend().extract(ex.question, results_text(out.result));
          } catch (const std::exception&) {
          }
        }
        r.pred = extracted ? *extracted : first_cell(out.result);
      } catch (const Error& e) {
        r.failed = true;
        r.error = std::string(error_code_name(e.code())) + ": " + e.what();
      }
    }
    if (!r.failed) {
      r.em = exact_match(r.pred, ex.gold);
      r.f1 = token_f1(r.pred, ex.gold);
      r.substring = substring_match(r.pred, ex.gold);
    }
    report.results.push_back(std::move(r));
  }
  double n = static_cast<double>(report.results.size());
  for (const auto& r : report.results) {
    report.em += r.em;
    report.f1 += r.f1;
    report.substring += r.substring ? 1 : 0;
    report.failures += r.failed ? 1 : 0;
  }
  if (n > 0) {
    report.em /= n;
    report.f1 /= n;
    report.substring /= n;
  }
  return report;
}

nlohmann::ordered_json BatchReport::to_json() const {
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["id"] = r.example.id;
    j["question"] = r.example.question;
    j["gold"] = r.example.gold;
    j["table"] = r.example.table;
    j["suql"] = r.suql;
    j["attempts"] = r.attempts;
    j["pred"] = r.pred;
    j["em"] = r.em;
    j["f1"] = r.f1;
    j["substring"] = r.substring;
    j["failed"] = r.failed;
    j["error"] = r.error;
    items.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["summary"] = {{"examples", results.size()}, {"em", em}, {"f1", f1}, {"substring", substring}, {"failures", failures}};
  out["examples"] = std::move(items);
  return out;
}

std::string BatchReport::to_csv() const {
  std::string out = "id,question,gold,pred,suql,attempts,em,f1,substring,failed,error\n";
  for (const auto& r : results) {
    out += csv_field(r.example.id) + "," + csv_field(r.example.question) + "," + csv_field(r.example.gold) + "," +
           csv_field(r.pred) + "," + csv_field(r.suql) + "," + std::to_string(r.attempts) + "," +
           std::to_string(r.em) + "," + fixed(r.f1) + "," + (r.substring ? "1" : "0") + "," + (r.failed ? "1" : "0") +
           "," + csv_field(r.error) + "\n";
  }
  return out;
}

}  // namespace suql
