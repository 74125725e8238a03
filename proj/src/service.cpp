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

#include "suql/service.hpp"

#include <chrono>
#include <thread>

#include "httplib.h"
#include "suql/error.hpp"

namespace suql {

using ojson = nlohmann::ordered_json;

void ServiceConfig::validate() const {
  if (port < 1 || port > 65535) throw Error(ErrorCode::kBadRequest, "port must be in [1, 65535]");
  if (db_dir.empty() || !std::filesystem::is_directory(db_dir))
    throw Error(ErrorCode::kBadRequest, "database directory '" + db_dir.string() + "' does not exist");
  if (backend != "mock" && backend != "http") throw Error(ErrorCode::kBadRequest, "backend must be mock or http");
  if (retrieval_k < 1) throw Error(ErrorCode::kBadRequest, "retrieval k must be at least 1");
  if (result_limit < 1) throw Error(ErrorCode::kBadRequest, "result limit must be at least 1");
  if (parallelism < 1 || parallelism > max_parallelism)
    throw Error(ErrorCode::kBadRequest, "parallelism must be in [1, " + std::to_string(max_parallelism) + "]");
}

HttpReply error_reply(const Error& e) {
  int status = 500;
  switch (e.code()) {
    case ErrorCode::kParse:
    case ErrorCode::kUnsupported:
    case ErrorCode::kBind:
    case ErrorCode::kBadRequest:
    case ErrorCode::kCast: status = 400; break;
    case ErrorCode::kNotFound: status = 404; break;
    case ErrorCode::kBackend:
    case ErrorCode::kAuth:
    case ErrorCode::kTransport: status = 502; break;
    default: status = 500;
  }
  ojson body{{"code", error_code_name(e.code())}, {"message", e.what()}};
  if (e.position()) body["position"] = *e.position();
  return {status, body};
}

Service::Service(const Database& db, TextRuntime& runtime, const Agent& agent, SessionStore& sessions,
                 QueryOptions query_options)
    : db_(db), runtime_(runtime), agent_(agent), sessions_(sessions), query_options_(std::move(query_options)) {}

HttpReply Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  try {
    if (path == "/healthz" && method == "GET") return healthz();
    if (path == "/schema" && method == "GET") return schema();
    if (path == "/query" || path == "/chat") {
      if (method != "POST") throw Error(ErrorCode::kBadRequest, path + " expects POST");
      nlohmann::json request;
      try {
        request = nlohmann::json::parse(body);
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::kBadRequest, "request body is not valid JSON");
      }
      if (!request.is_object()) throw Error(ErrorCode::kBadRequest, "request body must be a JSON object");
      return path == "/query" ? query(request) : chat(request);
    }
    throw Error(ErrorCode::kNotFound, "no route for " + method + " " + path);
  } catch (const Error& e) {
    return error_reply(e);
  } catch (const std::exception& e) {
    return error_reply(Error(ErrorCode::kRuntime, e.what()));
  }
}

HttpReply Service::query(const nlohmann::json& request) {
  if (!request.contains("query") || !request.at("query").is_string())
    throw Error(ErrorCode::kBadRequest, "field 'query' (string) is required");
  QueryOptions opts = query_options_;
  if (request.contains("mode")) opts.mode = request.at("mode").get<std::string>();
  if (request.contains("prune")) opts.planner.prune = request.at("prune").get<bool>();
  QueryOutcome out = run_query(db_, runtime_, request.at("query").get<std::string>(), opts);
  ojson body = result_to_json(out.result);
  if (!out.plan_text.empty()) body["plan"] = out.plan_text;
  return {200, body};
}

HttpReply Service::chat(const nlohmann::json& request) {
  if (!request.contains("utterance") || !request.at("utterance").is_string())
    throw Error(ErrorCode::kBadRequest, "field 'utterance' (string) is required");
  std::optional<std::string> sid;
  if (request.contains("session_id") && !request.at("session_id").is_null()) {
    if (!request.at("session_id").is_string()) throw Error(ErrorCode::kBadRequest, "session_id must be a string");
    sid = request.at("session_id").get<std::string>();
  }
  ChatResult r = suql::chat(agent_, sessions_, sid, request.at("utterance").get<std::string>());
  ojson body;
  body["session_id"] = r.session_id;
  body["reply"] = r.reply;
  body["searched"] = r.searched;
  if (r.suql) body["suql"] = *r.suql;
  if (r.results) body["results"] = *r.results;
  body["trace"] = r.trace;
  return {200, body};
}

HttpReply Service::schema() const { return {200, catalog_schema_json(db_.catalog())}; }

HttpReply Service::healthz() const { return {200, ojson{{"status", "ok"}}}; }

bool serve_http(Service& service, const std::string& host, int port, std::atomic<bool>& stop) {
  httplib::Server server;
  auto adapt = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpReply r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  server.Get("/healthz", adapt);
  server.Get("/schema", adapt);
  server.Post("/query", adapt);
  server.Post("/chat", adapt);
  server.set_error_handler([&service](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    HttpReply r = service.handle(req.method, req.path, req.body);
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  });
  if (!server.bind_to_port(host, port)) return false;
  std::thread watcher([&] {
    while (!stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  server.listen_after_bind();
  stop.store(true);  // releases the watcher if the listener ended on its own
  watcher.join();
  return true;
}

}  // namespace suql
