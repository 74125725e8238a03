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

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "json.hpp"
#include "suql/ast.hpp"
#include "suql/http_client.hpp"
#include "suql/prompts.hpp"
#include "suql/value.hpp"

namespace suql {

inline constexpr const char* kNoInfo = "no info";

/// The free-text primitives. Implementations must be safe to call from
/// several threads at once.
class AnswererBackend {
 public:
  virtual ~AnswererBackend() = default;
  /// Stable identity used in cache keys (backend kind + model/rules digest).
  virtual std::string id() const = 0;
  virtual std::string answer(const std::vector<std::string>& documents, const std::string& question,
                             const std::string& type_hint) const = 0;
  /// Whether `answer(documents, question) <op> literal` holds.
  virtual bool filter_check(const std::vector<std::string>& documents, const std::string& question, CmpOp op,
                            const std::string& literal, const std::string& type_hint) const = 0;
  /// Indices into domain.values() similar in meaning to `value`.
  virtual std::vector<std::size_t> classify_indices(const std::string& value, const EnumDomain& domain) const = 0;
};

/// Comparison used when the answer text is judged locally: trimmed and
/// case-insensitive for (in)equality; numeric, then date, then text order
/// for < <= > >=; ILIKE pattern matching.
bool compare_answer_text(const std::string& answer, CmpOp op, const std::string& literal);

/// Documents or questions match a pattern by case-insensitive substring, or
/// by case-insensitive regex search when the pattern starts with "re:".
struct MockRule {
  std::string doc_pattern;
  std::string question_pattern;
  std::string response;  // "$1".."$9" expand to doc-regex captures
};

/// Deterministic test double: first matching rule wins; otherwise "no info".
class MockBackend : public AnswererBackend {
 public:
  MockBackend(std::vector<MockRule> rules, std::map<std::string, std::vector<std::string>> synonyms = {});
  /// {"rules": [{"doc", "question", "response"}], "synonyms": {value: [domain values]}}
  static std::shared_ptr<MockBackend> from_json(const nlohmann::json& j);

  std::string id() const override { return id_; }
  std::string answer(const std::vector<std::string>& documents, const std::string& question,
                     const std::string& type_hint) const override;
  bool filter_check(const std::vector<std::string>& documents, const std::string& question, CmpOp op,
                    const std::string& literal, const std::string& type_hint) const override;
  std::vector<std::size_t> classify_indices(const std::string& value, const EnumDomain& domain) const override;

  const std::vector<MockRule>& rules() const { return rules_; }

 private:
  struct Compiled {
    MockRule rule;
    std::optional<std::regex> doc_re;
    std::optional<std::regex> question_re;
  };
  std::vector<Compiled> compiled_;
  std::vector<MockRule> rules_;
  std::map<std::string, std::vector<std::string>> synonyms_;  // lower-case keys
  std::string id_;
};

/// Chat-completion backend driven by the prompt templates.
class HttpBackend : public AnswererBackend {
 public:
  HttpBackend(CompletionConfig config, std::shared_ptr<Transport> transport,
              PromptTemplates prompts = PromptTemplates::defaults());

  std::string id() const override { return "http:" + config_.model; }
  std::string answer(const std::vector<std::string>& documents, const std::string& question,
                     const std::string& type_hint) const override;
  bool filter_check(const std::vector<std::string>& documents, const std::string& question, CmpOp op,
                    const std::string& literal, const std::string& type_hint) const override;
  std::vector<std::size_t> classify_indices(const std::string& value, const EnumDomain& domain) const override;

  /// Parses "2, 5" style classifier output; out-of-range entries are dropped
  /// and reported through `dropped`.
  static std::vector<std::size_t> parse_indices(const std::string& text, std::size_t domain_size,
                                                std::vector<std::string>* dropped = nullptr);
  /// "correct"/"incorrect" verdict; throws Error(kBackend) if neither appears.
  static bool parse_verdict(const std::string& text);

 private:
  std::string complete(const std::string& prompt) const;

  CompletionConfig config_;
  std::shared_ptr<Transport> transport_;
  PromptTemplates prompts_;
};

/// Front door used by the executor: adds a digest-keyed cache (optionally
/// persisted as append-only JSON lines) with single-flight semantics, so
/// identical concurrent calls reach the backend once.
class TextRuntime {
 public:
  explicit TextRuntime(std::shared_ptr<const AnswererBackend> backend,
                       std::optional<std::filesystem::path> cache_file = std::nullopt);

  std::string answer(const std::vector<std::string>& documents, const std::string& question,
                     const std::string& type_hint = {});
  /// Exactly answer(documents, "what is the summary of this document?").
  std::string summary(const std::vector<std::string>& documents);
  bool filter_check(const std::vector<std::string>& documents, const std::string& question, CmpOp op,
                    const std::string& literal, const std::string& type_hint = {});
  /// Domain values similar to `value`; always includes an exact member.
  std::vector<std::string> classify(const std::string& value, const EnumDomain& domain);

  std::size_t backend_calls() const { return backend_calls_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }
  const AnswererBackend& backend() const { return *backend_; }
  std::vector<std::string> take_warnings();

 private:
  std::string cached(const std::string& op, const std::string& key_material,
                     const std::function<std::string()>& compute);

  std::shared_ptr<const AnswererBackend> backend_;
  std::optional<std::filesystem::path> cache_file_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::string, std::string> cache_;
  std::map<std::string, bool> in_flight_;
  std::atomic<std::size_t> backend_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
  std::vector<std::string> warnings_;
};

/// Type hint appended to answer prompts when a cast wraps the answer call.
std::string type_hint_for(const SemanticType& target);

}  // namespace suql
