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

#include <chrono>

#include "generators.hpp"
#include "naive_eval.hpp"
#include "suql/error.hpp"
#include "suql/executor.hpp"
#include "suql/parser.hpp"
#include "test_env.hpp"

using namespace suql;
using suql::testing::FixtureEnv;

namespace {

ResultSet run_plan(const Catalog& catalog, TextRuntime& rt, const std::string& text, PlannerConfig cfg = {}) {
  Database db(catalog);
  ExecContext ctx{rt, db.indexes(), 1};
  return execute(plan(bind(parse(text), catalog), cfg), ctx);
}

std::vector<std::string> first_column(const ResultSet& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs.rows) out.push_back(r.at(0).to_string());
  return out;
}

}  // namespace

TEST(Executor, MatchesNaiveEvaluatorOnRandomQueries) {
  suql::testing::Rng rng(4242);
  TextRuntime rt(std::make_shared<MockBackend>(std::vector<MockRule>{}));
  for (int i = 0; i < 300; ++i) {
    TableSchema schema = suql::testing::random_schema(rng);
    auto table = std::make_shared<Table>(suql::testing::random_table(schema, static_cast<std::size_t>(suql::testing::pick(rng, 0, 32)), rng));
    Catalog cat;
    cat.add(table);
    std::string q = suql::testing::random_query(schema, rng);
    ResultSet got = run_plan(cat, rt, q);
    auto want = suql::testing::naive_execute(parse(q), cat);
    ASSERT_TRUE(suql::testing::multiset_equal(got.rows, want))
        << q << "\nexecutor:\n" << suql::testing::describe_rows(got.rows) << "naive:\n" << suql::testing::describe_rows(want);
  }
}

TEST(Executor, FlagBearerGoldens) {
  FixtureEnv env("flagbearers");
  for (const auto& q : env.fixture.queries) {
    env.reset_runtime();
    QueryOutcome out = env.run(q.text);
    ASSERT_EQ(out.result.rows.size(), q.expected.at("rows").size()) << q.id;
    for (std::size_t r = 0; r < out.result.rows.size(); ++r)
      for (std::size_t c = 0; c < out.result.rows[r].size(); ++c)
        EXPECT_EQ(out.result.rows[r][c].to_string(), q.expected["rows"][r][c].get<std::string>()) << q.id;
    std::vector<std::string> cols;
    for (const auto& c : out.result.columns) cols.push_back(c.name);
    EXPECT_EQ(nlohmann::json(cols), q.expected.at("columns")) << q.id;
  }
}

TEST(Executor, StructuredFirstOrderingSavesAnswerCalls) {
  FixtureEnv env("flagbearers");
  // The corpus text lists Gender first; swap the conjuncts so written order
  // puts the answer filter ahead of the structured one.
  const std::string text =
      "SELECT \"Flag Bearer\" FROM table WHERE answer(\"Flag Bearer Info\", 'did this person participate in Men''s "
      "100kg event?') = 'Yes' AND \"Gender\" = 'Male'";
  ASSERT_EQ(env.run(text).result.rows, env.run(env.fixture.queries.at(3).text).result.rows);
  env.reset_runtime();
  QueryOptions on;
  QueryOutcome with = env.run(text, on);
  env.reset_runtime();
  QueryOptions off;
  off.planner.order_conjuncts = false;
  QueryOutcome without = env.run(text, off);
  EXPECT_EQ(with.result.stats.answer_calls, 4u);  // male rows only
  EXPECT_EQ(without.result.stats.answer_calls, 7u);
  EXPECT_EQ(first_column(with.result), first_column(without.result));
}

TEST(Executor, RestaurantGoldens) {
  FixtureEnv env("restaurants");
  for (const auto& q : env.fixture.queries) {
    env.reset_runtime();
    QueryOutcome out = env.run(q.text);
    EXPECT_EQ(nlohmann::json(suql::testing::column_values(out.result, q.expected.at("column"))), q.expected.at("values"))
        << q.id;
  }
}

TEST(Executor, OverloadedEnumEquality) {
  FixtureEnv env("restaurants");
  QueryOutcome coffee = env.run("SELECT name FROM restaurants WHERE 'coffee' = ANY (cuisines)");
  EXPECT_EQ(coffee.result.stats.classify_calls, 1u);
  EXPECT_EQ(first_column(coffee.result), (std::vector<std::string>{"Morning Grind", "Cafe Lumiere", "Steep House"}));
  QueryOutcome cheap = env.run("SELECT name FROM restaurants WHERE price = 'cheap'");
  EXPECT_EQ(cheap.result.stats.classify_calls, 0u);
}

TEST(Executor, LazyLimitStopsEarly) {
  FixtureEnv env("restaurants");
  QueryOptions noprune;
  noprune.planner.prune = false;
  QueryOutcome one = env.run("SELECT name FROM restaurants WHERE answer(popular_dishes, 'does this restaurant serve salmon?') = 'Yes' LIMIT 1", noprune);
  env.reset_runtime();
  QueryOutcome all = env.run("SELECT name FROM restaurants WHERE answer(popular_dishes, 'does this restaurant serve salmon?') = 'Yes'", noprune);
  ASSERT_EQ(one.result.rows.size(), 1u);
  EXPECT_LT(one.result.stats.answer_calls, all.result.stats.answer_calls);
  EXPECT_EQ(all.result.stats.answer_calls, 30u);
  EXPECT_EQ(one.result.rows[0], all.result.rows[0]);
}

TEST(Executor, NullsSortLastBothDirections) {
  auto s = parse_ddl("CREATE TABLE t (n INT);");
  Catalog cat;
  cat.add(std::make_shared<Table>(s, std::vector<Row>{{Value::integer(2)}, {Value::null()}, {Value::integer(1)}}));
  TextRuntime rt(std::make_shared<MockBackend>(std::vector<MockRule>{}));
  EXPECT_EQ(first_column(run_plan(cat, rt, "SELECT n FROM t ORDER BY n")), (std::vector<std::string>{"1", "2", "NULL"}));
  EXPECT_EQ(first_column(run_plan(cat, rt, "SELECT n FROM t ORDER BY n DESC")), (std::vector<std::string>{"2", "1", "NULL"}));
}

TEST(Executor, CastFailureInFilterIsFalseAndCounted) {
  FixtureEnv env("flagbearers");
  QueryOutcome out = env.run(
      "SELECT \"Name\" FROM table WHERE answer(\"Event year Info\", 'is this event held in Rio?')::date > '2000-01-01'");
  EXPECT_TRUE(out.result.rows.empty());
  EXPECT_EQ(out.result.stats.cast_errors, 7u);
  EXPECT_FALSE(out.result.stats.warnings.empty());
}

TEST(Executor, CastFailureInProjectionIsNull) {
  FixtureEnv env("flagbearers");
  QueryOutcome out = env.run("SELECT answer(\"Event year Info\", 'where is this event held?')::date FROM table WHERE \"Name\" = 'XXXI'");
  ASSERT_EQ(out.result.rows.size(), 1u);
  EXPECT_TRUE(out.result.rows[0][0].is_null());
  EXPECT_EQ(out.result.stats.cast_errors, 1u);
}

TEST(Executor, UnnestYieldsElements) {
  FixtureEnv env("restaurants");
  QueryOutcome out = env.run(
      "SELECT single_review FROM restaurants AS r, unnest(reviews) AS single_review WHERE r.name = 'Daigo'");
  auto daigo = env.run("SELECT reviews FROM restaurants WHERE name = 'Daigo'");
  ASSERT_EQ(daigo.result.rows.size(), 1u);
  EXPECT_EQ(out.result.rows.size(), daigo.result.rows[0][0].as_array().size());
}

TEST(Executor, AggregatesOverEmptyInput) {
  FixtureEnv env("restaurants");
  QueryOutcome out = env.run("SELECT COUNT(*), MAX(rating), AVG(rating) FROM restaurants WHERE location = 'Nowhere'");
  ASSERT_EQ(out.result.rows.size(), 1u);
  EXPECT_EQ(out.result.rows[0][0], Value::integer(0));
  EXPECT_TRUE(out.result.rows[0][1].is_null());
  EXPECT_TRUE(out.result.rows[0][2].is_null());
}

TEST(Executor, DateArithmeticAndIntervals) {
  auto s = parse_ddl("CREATE TABLE t (d DATE, dur INTERVAL);");
  Catalog cat;
  cat.add(std::make_shared<Table>(s, std::vector<Row>{{Value::date(Date{2020, 2, 28}), Value::interval(Interval{7200})}}));
  TextRuntime rt(std::make_shared<MockBackend>(std::vector<MockRule>{}));
  ResultSet rs = run_plan(cat, rt, "SELECT d + 2, dur FROM t WHERE dur < '2:13:32'::INTERVAL");
  ASSERT_EQ(rs.rows.size(), 1u);
  EXPECT_EQ(rs.rows[0][0], Value::date(Date{2020, 3, 1}));
}

TEST(Executor, ParallelMatchesSequential) {
  FixtureEnv env("restaurants");
  const std::string q = "SELECT name FROM restaurants WHERE answer(reviews, 'do you find this restaurant to be family-friendly?') = 'Yes'";
  QueryOptions seq, par;
  seq.planner.prune = par.planner.prune = false;
  par.parallelism = 8;
  auto a = env.run(q, seq);
  env.reset_runtime();
  auto b = env.run(q, par);
  EXPECT_EQ(a.result.rows, b.result.rows);
  EXPECT_EQ(a.result.stats.answer_calls, b.result.stats.answer_calls);
}

TEST(Executor, ExplainDoesNotExecute) {
  FixtureEnv env("restaurants");
  QueryOutcome out = env.run("EXPLAIN SELECT name FROM restaurants WHERE answer(reviews, 'q') = 'Yes'");
  EXPECT_TRUE(out.explain_only);
  EXPECT_EQ(env.runtime->backend_calls(), 0u);
  EXPECT_FALSE(out.plan_text.empty());
}

TEST(Executor, ResultWireFormat) {
  FixtureEnv env("restaurants");
  auto j = result_to_json(env.run("SELECT name, rating FROM restaurants WHERE name = 'Daigo'").result);
  EXPECT_EQ(j["columns"][1]["name"], "rating");
  EXPECT_EQ(j["columns"][1]["type"], "NUMERIC(2,1)");
  EXPECT_EQ(j["rows"][0][0], "Daigo");
  EXPECT_TRUE(j["stats"].contains("answer_calls"));
}
