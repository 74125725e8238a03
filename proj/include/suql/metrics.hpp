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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "suql/agent.hpp"

namespace suql {

/// Lower-case, drop ASCII punctuation, drop the articles a/an/the, split on
/// whitespace (the reading-comprehension convention, in that order).
std::vector<std::string> normalize_answer(const std::string& text);

int exact_match(const std::string& pred, const std::string& gold);
/// Token-multiset F1; 1 when both sides normalize to nothing, 0 when only one does.
double token_f1(const std::string& pred, const std::string& gold);
/// Either normalized string is a contiguous substring of the other. An empty
/// side matches only an empty side.
bool substring_match(const std::string& pred, const std::string& gold);

struct QAExample {
  std::string id;
  std::string question;
  std::string gold;
  std::string table;
};

/// {id?, question, gold, table} per line; gold must be non-empty.
std::vector<QAExample> load_examples(const std::filesystem::path& path);

struct ExampleResult {
  QAExample example;
  std::string suql;
  std::size_t attempts = 0;
  std::string pred;
  int em = 0;
  double f1 = 0;
  bool substring = false;
  bool failed = false;  // parse or execution failure; scored 0
  std::string error;
};

struct BatchReport {
  std::vector<ExampleResult> results;
  double em = 0;
  double f1 = 0;
  double substring = 0;
  std::size_t failures = 0;

  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

/// Parse → execute (with retries) → succinct answer, per example. Failures
/// are recorded on the example and never abort the batch.
BatchReport run_batch(const std::vector<QAExample>& examples, const Agent& agent);

}  // namespace suql
