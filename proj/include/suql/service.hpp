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
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "suql/agent.hpp"
#include "suql/error.hpp"
#include "suql/database.hpp"

namespace suql {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path db_dir;
  std::string backend = "mock";  // mock | http
  std::size_t retrieval_k = 20;
  std::size_t result_limit = 3;
  std::size_t parallelism = 1;
  std::size_t max_parallelism = 16;
  std::filesystem::path prompt_dir;  // optional template overrides

  /// Throws Error(kBadRequest) for a port outside [1, 65535], a missing
  /// database directory or an unknown backend mode.
  void validate() const;
};

struct HttpReply {
  int status = 200;
  nlohmann::ordered_json body;
};

/// {code, message[, position]} with the status matching the error class.
HttpReply error_reply(const Error& e);

/// Request handlers as pure functions of (database, sessions, request);
/// the HTTP server is a thin adapter over handle().
class Service {
 public:
  Service(const Database& db, TextRuntime& runtime, const Agent& agent, SessionStore& sessions,
          QueryOptions query_options);

  HttpReply handle(const std::string& method, const std::string& path, const std::string& body);

  HttpReply query(const nlohmann::json& request);
  HttpReply chat(const nlohmann::json& request);
  HttpReply schema() const;
  HttpReply healthz() const;

 private:
  const Database& db_;
  TextRuntime& runtime_;
  const Agent& agent_;
  SessionStore& sessions_;
  QueryOptions query_options_;
};

/// Blocks serving HTTP until `stop` becomes true (polled) or the listener
/// fails. Returns false when the address cannot be bound.
bool serve_http(Service& service, const std::string& host, int port, std::atomic<bool>& stop);

}  // namespace suql
