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

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "httplib.h"
#include "suql/error.hpp"
#include "suql/service.hpp"
#include "test_env.hpp"

using namespace suql;

class ServiceTest : public ::testing::Test {
 protected:
  ServiceTest()
      : env_("restaurants"),
        agent_(*env_.db, *env_.runtime, std::make_shared<MockDialogueBackend>(env_.fixture.json_asset("dialogue"))),
        service_(*env_.db, *env_.runtime, agent_, sessions_, QueryOptions{}) {}

  HttpReply post(const std::string& path, const nlohmann::json& body) { return service_.handle("POST", path, body.dump()); }

  suql::testing::FixtureEnv env_;
  Agent agent_;
  SessionStore sessions_;
  Service service_;
};

TEST_F(ServiceTest, QueryReturnsColumnsRowsAndStats) {
  HttpReply r = post("/query", {{"query", "SELECT 1"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["rows"], nlohmann::json::parse("[[1]]"));
  EXPECT_EQ(r.body["columns"].size(), 1u);
  EXPECT_TRUE(r.body.contains("stats"));

  r = post("/query", {{"query", "SELECT name FROM restaurants WHERE name = 'Daigo'"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["rows"][0][0], "Daigo");
}

TEST_F(ServiceTest, QueryErrorsCarryCodeMessageAndPosition) {
  HttpReply r = post("/query", {{"query", "SELEC 1"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["code"], "parse_error");
  EXPECT_EQ(r.body["position"], 0);
  EXPECT_FALSE(r.body["message"].get<std::string>().empty());

  r = post("/query", {{"query", "SELECT x FROM nowhere"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["code"], "bind_error");

  r = post("/query", {{"q", "SELECT 1"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["code"], "bad_request");
}

TEST_F(ServiceTest, ExplainModeReturnsPlan) {
  HttpReply r = post("/query", {{"query", "EXPLAIN SELECT name FROM restaurants WHERE answer(reviews, 'q') = 'Yes'"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_NE(r.body["plan"].get<std::string>().find("RetrievalPrune"), std::string::npos);
  EXPECT_EQ(env_.runtime->backend_calls(), 0u);
}

TEST_F(ServiceTest, ChatGreetingHasNoQuery) {
  HttpReply r = post("/chat", {{"utterance", "Hi!"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_FALSE(r.body["session_id"].get<std::string>().empty());
  EXPECT_FALSE(r.body.contains("suql"));
  EXPECT_EQ(r.body["searched"], "");
  EXPECT_FALSE(r.body["reply"].get<std::string>().empty());
}

TEST_F(ServiceTest, ChatSearchTurnCarriesQueryAndResults) {
  HttpReply first = post("/chat", {{"utterance", "Hi!"}});
  std::string sid = first.body["session_id"];
  HttpReply r = post("/chat", {{"session_id", sid}, {"utterance", "what are some good-reviewed japanese restaurants in Kansas City?"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["session_id"], sid);
  EXPECT_TRUE(r.body.contains("suql"));
  EXPECT_EQ(r.body["results"]["rows"].size(), 3u);
  std::string reply = r.body["reply"];
  EXPECT_EQ(reply.rfind(r.body["searched"].get<std::string>(), 0), 0u);
  EXPECT_EQ(r.body["trace"]["attempts"], 1);
}

TEST_F(ServiceTest, SchemaListsTablesAndColumns) {
  HttpReply r = service_.handle("GET", "/schema", "");
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body["tables"].size(), 1u);
  EXPECT_EQ(r.body["tables"][0]["name"], "restaurants");
  EXPECT_EQ(r.body["tables"][0]["rows"], 30);
  EXPECT_EQ(r.body["tables"][0]["columns"].size(), 11u);
}

TEST_F(ServiceTest, RoutingErrors) {
  EXPECT_EQ(service_.handle("GET", "/healthz", "").status, 200);
  HttpReply r = service_.handle("GET", "/query", "");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["code"], "bad_request");
  r = service_.handle("POST", "/query", "{nope");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(service_.handle("POST", "/chat", "[1]").status, 400);
  r = service_.handle("GET", "/missing", "");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(r.body["code"], "not_found");
  EXPECT_EQ(post("/chat", {{"utterance", "hi"}, {"session_id", "../x"}}).status, 400);
}

TEST(ErrorReply, StatusByErrorClass) {
  EXPECT_EQ(error_reply(Error(ErrorCode::kCast, "x")).status, 400);
  EXPECT_EQ(error_reply(Error(ErrorCode::kTransport, "x")).status, 502);
  EXPECT_EQ(error_reply(Error(ErrorCode::kIo, "x")).status, 500);
}

TEST(ServiceConfigTest, Validation) {
  suql::testing::TempDir dir;
  ServiceConfig c;
  c.db_dir = dir.path;
  EXPECT_NO_THROW(c.validate());
  c.port = 0;
  EXPECT_THROW(c.validate(), Error);
  c.port = 8080;
  c.backend = "magic";
  EXPECT_THROW(c.validate(), Error);
  c.backend = "mock";
  c.db_dir = dir.path / "absent";
  EXPECT_THROW(c.validate(), Error);
}

TEST_F(ServiceTest, ServesOverHttp) {
  for (int port = 18671; port < 18700; ++port) {
    std::atomic<bool> stop{false}, failed{false};
    std::thread server([&] { failed = !serve_http(service_, "127.0.0.1", port, stop); });
    httplib::Client client("127.0.0.1", port);
    httplib::Result res;
    for (int i = 0; i < 100 && !failed && !(res = client.Get("/healthz")); ++i)
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    if (failed) {  // port taken; try the next one
      server.join();
      continue;
    }
    auto q = client.Post("/query", R"({"query": "SELECT COUNT(*) FROM restaurants"})", "application/json");
    auto missing = client.Get("/nope");
    stop = true;
    server.join();
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    ASSERT_TRUE(q) << httplib::to_string(q.error());
    EXPECT_EQ(q->status, 200);
    EXPECT_EQ(nlohmann::json::parse(q->body)["rows"][0][0], 30);
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
    EXPECT_EQ(nlohmann::json::parse(missing->body)["code"], "not_found");
    return;
  }
  FAIL() << "no free port";
}
