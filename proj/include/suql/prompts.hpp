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
#include <string>

namespace suql {

/// Prompt templates used by the HTTP backends. Placeholders are written
/// `{{ name }}`. The wording is configuration: a directory of `<name>.prompt`
/// files overrides individual templates.
struct PromptTemplates {
  std::string answer;          // documents, question, type_hint
  std::string filter;          // documents, question, clause
  std::string classify;        // value, choices
  std::string needs_knowledge; // history, utterance
  std::string parse;           // schema, history, utterance
  std::string relax;           // schema, utterance, failed_queries
  std::string reply;           // history, utterance, searched, results
  std::string extract;         // question, results

  static PromptTemplates defaults();
  /// Defaults overridden by any `<name>.prompt` file present in `dir`.
  static PromptTemplates load(const std::filesystem::path& dir);

  /// name -> template, in a fixed order.
  std::map<std::string, const std::string*> named() const;
};

/// Substitutes `{{ key }}` occurrences; unknown keys render empty.
std::string render_prompt(const std::string& tmpl, const std::map<std::string, std::string>& vars);

}  // namespace suql
