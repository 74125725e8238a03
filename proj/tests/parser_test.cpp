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

#include "generators.hpp"
#include "suql/binder.hpp"
#include "suql/error.hpp"
#include "suql/fixtures.hpp"
#include "suql/lexer.hpp"
#include "suql/parser.hpp"

using namespace suql;

namespace {

Error parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "parsed: " << text;
  return Error(ErrorCode::kRuntime, "");
}

void expect_round_trip(const std::string& text) {
  QueryAst ast = parse(text);
  std::string printed = print(ast);
  QueryAst again = parse(printed);
  EXPECT_TRUE(again == ast) << text << "\n -> " << printed;
  EXPECT_EQ(print(again), printed);
}

}  // namespace

TEST(Lexer, SelectOne) {
  auto toks = tokenize("SELECT 1;");
  ASSERT_EQ(toks.size(), 4u);
  EXPECT_EQ(toks[0].type, TokenType::kIdent);
  EXPECT_TRUE(toks[0].is_keyword("select"));
  EXPECT_EQ(toks[1].type, TokenType::kInt);
  EXPECT_EQ(toks[1].text, "1");
  EXPECT_EQ(toks[2].type, TokenType::kSemi);
  EXPECT_EQ(toks[3].type, TokenType::kEnd);
  EXPECT_EQ(toks[3].pos, 9u);
}

TEST(Lexer, StringsAndIdentifiers) {
  auto toks = tokenize(R"("Event year" = 'Men''s' :: @> <> != <=)");
  EXPECT_EQ(toks[0].type, TokenType::kQuotedIdent);
  EXPECT_EQ(toks[0].text, "Event year");
  EXPECT_EQ(toks[2].type, TokenType::kString);
  EXPECT_EQ(toks[2].text, "Men's");
  EXPECT_EQ(toks[3].type, TokenType::kCast);
  EXPECT_EQ(toks[4].type, TokenType::kContains);
  EXPECT_EQ(toks[5].type, TokenType::kNe);
  EXPECT_EQ(toks[6].type, TokenType::kNe);
  EXPECT_EQ(toks[7].type, TokenType::kLe);
}

TEST(Lexer, UnterminatedStringReportsStart) {
  try {
    tokenize("SELECT 'abc");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(e.position(), 7u);
  }
}

TEST(Parser, FlagBearerQueryShapes) {
  auto fx = load_fixture("flagbearers");
  ASSERT_EQ(fx.queries.size(), 6u);
  for (const auto& q : fx.queries) {
    QueryAst ast = parse(q.text);
    EXPECT_NO_THROW(bind(ast, fx.catalog)) << q.id;
    expect_round_trip(q.text);
  }
}

TEST(Parser, RestaurantTargets) {
  auto fx = load_fixture("restaurants");
  ASSERT_GE(fx.queries.size(), 12u);
  for (const auto& q : fx.queries) {
    EXPECT_NO_THROW(bind(parse(q.text), fx.catalog)) << q.id;
    expect_round_trip(q.text);
  }
}

TEST(Parser, SummaryAndAnswerCalls) {
  QueryAst ast = parse("SELECT summary(reviews), answer(reviews, 'q?') FROM restaurants;");
  ASSERT_EQ(ast.select.size(), 2u);
  EXPECT_TRUE(ast.select[0].expr->as<SummaryCall>());
  const auto* a = ast.select[1].expr->as<AnswerCall>();
  ASSERT_TRUE(a);
  EXPECT_EQ(a->question, "q?");
}

TEST(Parser, CastAndUnnest) {
  QueryAst ast = parse(
      "SELECT MAX(answer(\"Flag Bearer Info\", 'born?')::date) FROM restaurants AS r, unnest(reviews) AS single_review;");
  ASSERT_EQ(ast.from.size(), 2u);
  EXPECT_TRUE(ast.from[1].is_unnest());
  EXPECT_EQ(ast.from[1].alias, "single_review");
  const auto* agg = ast.select[0].expr->as<Aggregate>();
  ASSERT_TRUE(agg);
  EXPECT_EQ(agg->fn, AggFn::kMax);
  EXPECT_TRUE((*agg->arg)->as<CastExpr>());
}

TEST(Parser, FromIsOptional) {
  QueryAst ast = parse("SELECT 1");
  EXPECT_TRUE(ast.from.empty());
  EXPECT_EQ(print(ast), "SELECT 1;");
}

TEST(Parser, UnsupportedConstructsNamed) {
  for (const char* text : {"SELECT a FROM t GROUP BY a", "SELECT a FROM t JOIN u ON a = b",
                           "SELECT a FROM t WHERE a IN (SELECT b FROM u)", "SELECT DISTINCT a FROM t",
                           "SELECT a FROM t WHERE a IS NULL", "INSERT INTO t VALUES (1)"}) {
    Error e = parse_error(text);
    EXPECT_EQ(e.code(), ErrorCode::kUnsupported) << text << ": " << e.what();
  }
}

TEST(Parser, SyntaxErrorsCarryPositions) {
  Error e = parse_error("SELEC \"Club\" FROM t;");
  EXPECT_EQ(e.code(), ErrorCode::kParse);
  EXPECT_EQ(e.position(), 0u);
  Error e2 = parse_error("SELECT a FROM t WHERE a = ;");
  EXPECT_EQ(e2.code(), ErrorCode::kParse);
  EXPECT_EQ(e2.position(), 26u);
}

TEST(Parser, NumericAndNegativeLiterals) {
  QueryAst ast = parse("SELECT a FROM t WHERE a >= -4.5 AND b < 3 LIMIT 2");
  EXPECT_EQ(print(ast), "SELECT a FROM t WHERE a >= -4.5 AND b < 3 LIMIT 2;");
}

TEST(Parser, ReservedWordsAreQuotedWhenPrinted) {
  expect_round_trip("SELECT \"select\", \"Name\" FROM \"table\"");
  EXPECT_EQ(quote_identifier("table"), "\"table\"");
  EXPECT_EQ(quote_identifier("name"), "name");
  EXPECT_EQ(quote_identifier("Name"), "\"Name\"");
}

TEST(Parser, RoundTripPropertyOnRandomQueries) {
  suql::testing::Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    TableSchema s = suql::testing::random_schema(rng);
    std::string q = suql::testing::random_query(s, rng);
    expect_round_trip(q);
  }
}
