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

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace suql {

struct HttpResponse {
  int status = 0;  // 0 with timed_out/failed set when no response arrived
  std::string body;
  bool timed_out = false;
  std::string error;
};

/// Minimal POST transport so completions can be tested without sockets.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post_json(const std::string& url, const std::string& body,
                                 const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

/// cpp-httplib implementation (http and https).
std::unique_ptr<Transport> make_http_transport(std::chrono::milliseconds timeout);

struct ChatMessage {
  std::string role;
  std::string content;
};

struct CompletionConfig {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string api_key;
  std::string model;
  int max_attempts = 3;
  std::chrono::milliseconds backoff{500};
  /// Injected for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;

  /// SUQL_LLM_BASE_URL / SUQL_LLM_API_KEY / SUQL_LLM_MODEL.
  static CompletionConfig from_env();
};

/// One chat completion at temperature 0. Retries timeouts, 429 and 5xx with
/// exponential backoff up to max_attempts; 401/403 fail at once with
/// Error(kAuth); exhausted retries raise Error(kTransport); unparseable
/// bodies raise Error(kBackend).
std::string http_complete(const std::vector<ChatMessage>& messages, const CompletionConfig& config,
                          Transport& transport);

}  // namespace suql
