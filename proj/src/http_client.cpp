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

#include "suql/http_client.hpp"

#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "suql/error.hpp"

namespace suql {

namespace {

class HttplibTransport : public Transport {
 public:
  explicit HttplibTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

  HttpResponse post_json(const std::string& url, const std::string& body,
                         const std::vector<std::pair<std::string, std::string>>& headers) override {
    // Split scheme://host[:port] from the path.
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorCode::kTransport, "malformed URL '" + url + "'");
    auto path_start = url.find('/', scheme_end + 3);
    std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);

    HttpResponse out;
    auto res = client.Post(path, h, body, "application/json");
    if (!res) {
      out.timed_out = res.error() == httplib::Error::Read || res.error() == httplib::Error::Write ||
                      res.error() == httplib::Error::ConnectionTimeout;
      out.error = httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = res->body;
    return out;
  }

 private:
  std::chrono::milliseconds timeout_;
};

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

}  // namespace

std::unique_ptr<Transport> make_http_transport(std::chrono::milliseconds timeout) {
  return std::make_unique<HttplibTransport>(timeout);
}

CompletionConfig CompletionConfig::from_env() {
  CompletionConfig c;
  c.base_url = env_or("SUQL_LLM_BASE_URL", "https://api.openai.com/v1");
  c.api_key = env_or("SUQL_LLM_API_KEY", "");
  c.model = env_or("SUQL_LLM_MODEL", "gpt-4");
  return c;
}

std::string http_complete(const std::vector<ChatMessage>& messages, const CompletionConfig& config,
                          Transport& transport) {
  nlohmann::json req;
  req["model"] = config.model;
  req["temperature"] = 0;
  req["messages"] = nlohmann::json::array();
  for (const auto& m : messages) req["messages"].push_back({{"role", m.role}, {"content", m.content}});

  std::string url = config.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/chat/completions";
  std::vector<std::pair<std::string, std::string>> headers;
  if (!config.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + config.api_key);

  auto sleep = config.sleep ? config.sleep : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  std::string last_problem;
  auto delay = config.backoff;
  int attempts = std::max(1, config.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    HttpResponse res = transport.post_json(url, req.dump(), headers);
    if (res.status == 401 || res.status == 403)
      throw Error(ErrorCode::kAuth, "completion endpoint rejected credentials (HTTP " + std::to_string(res.status) + ")");
    bool transient = res.status == 0 || res.status == 408 || res.status == 429 || res.status >= 500;
    if (!transient) {
      if (res.status != 200)
        throw Error(ErrorCode::kBackend, "completion endpoint returned HTTP " + std::to_string(res.status));
      try {
        auto body = nlohmann::json::parse(res.body);
        return body.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kBackend, std::string("malformed completion response: ") + e.what());
      }
    }
    last_problem = res.status == 0 ? (res.timed_out ? "timeout" : "connection failure: " + res.error)
                                   : "HTTP " + std::to_string(res.status);
    if (attempt < attempts) {
      sleep(delay);
      delay *= 2;
    }
  }
  throw Error(ErrorCode::kTransport,
              "completion failed after " + std::to_string(attempts) + " attempts (" + last_problem + ")");
}

}  // namespace suql
