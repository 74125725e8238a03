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

#include <cmath>
#include <fstream>

#include "suql/error.hpp"
#include "suql/retrieval.hpp"
#include "test_env.hpp"

using namespace suql;

namespace {

double norm(const std::vector<float>& v) {
  double s = 0;
  for (float f : v) s += static_cast<double>(f) * f;
  return std::sqrt(s);
}

std::vector<std::string> texts_of(const Value& v) {
  std::vector<std::string> out;
  if (v.kind() == ValueKind::kArray)
    for (const auto& e : v.as_array()) out.push_back(e.as_text());
  else if (!v.is_null())
    out.push_back(v.as_text());
  return out;
}

// Σ_c max_t sim(c, t) recomputed from raw cell text, -1 for an empty cell.
long double brute_force_score(const Row& row, const std::vector<std::pair<std::string, std::size_t>>& constraints,
                              const Embedder& e) {
  long double total = 0;
  for (const auto& [question, column] : constraints) {
    auto q = e.embed(question);
    auto texts = texts_of(row[column]);
    if (texts.empty()) {
      total -= 1;
      continue;
    }
    long double best = -1e30L;
    for (const auto& t : texts) {
      auto v = e.embed(t);
      long double s = 0;
      for (std::size_t i = 0; i < v.size(); ++i) s += static_cast<long double>(q[i]) * v[i];
      best = std::max(best, s);
    }
    total += best;
  }
  return total;
}

}  // namespace

TEST(Embedder, TokensLowercasedAlphanumeric) {
  EXPECT_EQ(embed_tokens("Parking's EASY, here!"), (std::vector<std::string>{"parking", "s", "easy", "here"}));
}

TEST(Embedder, UnitNormOrZero) {
  HashingEmbedder e;
  EXPECT_NEAR(norm(e.embed("Parking is easy here.")), 1.0, 1e-6);
  EXPECT_EQ(norm(e.embed("")), 0.0);
  EXPECT_EQ(norm(e.embed("?!, ...")), 0.0);
  EXPECT_EQ(e.embed("same text"), e.embed("same text"));
}

TEST(Embedder, HandComputedSimilarity) {
  HashingEmbedder e(256);
  ASSERT_NE(fnv1a64("a") % 256, fnv1a64("b") % 256);
  double w = 1.0 + std::log(2.0);
  EXPECT_NEAR(sim(e.embed("a a b"), e.embed("a")), w / std::sqrt(w * w + 1.0), 1e-6);
  EXPECT_EQ(fnv1a64(""), 14695981039346656037ull);
}

TEST(Embedder, DimensionMismatchThrows) {
  HashingEmbedder a(8), b(16);
  EXPECT_THROW(sim(a.embed("x"), b.embed("x")), Error);
}

TEST(ColumnIndexTest, NullAndEmptyCellsOwnNoVectors) {
  auto s = parse_ddl("CREATE TABLE t (r FREE_TEXT[]);");
  Table t(s, {{Value::array({Value::text("a"), Value::text("b")})}, {Value::null()}, {Value::array({})}});
  HashingEmbedder e;
  auto idx = ColumnIndex::build(t, 0, e);
  EXPECT_EQ(idx.rows(), 3u);
  EXPECT_EQ(idx.row_size(0), 2u);
  EXPECT_EQ(idx.row_size(1), 0u);
  EXPECT_FALSE(idx.max_sim(1, e.embed("a")));
  ScoredConstraint c{e.embed("a"), &idx};
  EXPECT_EQ(aggregate_score(2, {c, c}), -2.0);
}

TEST(ColumnIndexTest, OnlyFreeTextColumns) {
  auto s = parse_ddl("CREATE TABLE t (r TEXT);");
  Table t(s, {{Value::text("a")}});
  HashingEmbedder e;
  EXPECT_THROW(ColumnIndex::build(t, 0, e), Error);
}

TEST(ColumnIndexTest, SaveLoadRoundTripAndCorruption) {
  suql::testing::FixtureEnv env("restaurants");
  const Table& t = *env.fixture.catalog.get("restaurants");
  HashingEmbedder e;
  auto idx = ColumnIndex::build(t, *t.schema().find("reviews"), e);
  suql::testing::TempDir dir;
  auto path = dir.path / "r.idx";
  idx.save(path);
  EXPECT_TRUE(ColumnIndex::load(path) == idx);

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  std::ofstream(dir.path / "trunc.idx", std::ios::binary) << bytes.substr(0, bytes.size() - 3);
  std::ofstream(dir.path / "magic.idx", std::ios::binary) << "XXXX" + bytes.substr(4);
  std::ofstream(dir.path / "extra.idx", std::ios::binary) << bytes + "!";
  for (const char* name : {"trunc.idx", "magic.idx", "extra.idx"}) {
    try {
      ColumnIndex::load(dir.path / name);
      ADD_FAILURE() << name;
    } catch (const Error& err) {
      EXPECT_EQ(err.code(), ErrorCode::kIntegrity) << name;
    }
  }
}

TEST(Scoring, AggregateScoreMatchesBruteForceOnStressTable) {
  auto fx = load_fixture("stress");
  const Table& t = *fx.catalog.get("venues");
  HashingEmbedder e;
  std::size_t rev = *t.schema().find("reviews"), dish = *t.schema().find("popular_dishes");
  auto ri = ColumnIndex::build(t, rev, e), di = ColumnIndex::build(t, dish, e);
  std::vector<ScoredConstraint> cs{{e.embed("is parking easy?"), &ri}, {e.embed("does this place serve pasta?"), &di}};
  std::vector<std::pair<std::string, std::size_t>> raw{{"is parking easy?", rev}, {"does this place serve pasta?", dish}};
  for (std::size_t r = 0; r < t.size(); ++r)
    ASSERT_NEAR(aggregate_score(r, cs), static_cast<double>(brute_force_score(t.row(r), raw, e)), 1e-9) << r;
}

TEST(Scoring, TopKOrdersByScoreThenRowId) {
  auto s = parse_ddl("CREATE TABLE t (r FREE_TEXT);");
  Table t(s, {{Value::text("cat")}, {Value::text("dog")}, {Value::text("cat")}, {Value::text("cat dog")}});
  HashingEmbedder e;
  auto idx = ColumnIndex::build(t, 0, e);
  std::vector<ScoredConstraint> cs{{e.embed("cat"), &idx}};
  EXPECT_EQ(top_k(cs, 3, {0, 1, 2, 3}), (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_EQ(top_k(cs, 10, {3, 1}), (std::vector<std::size_t>{3, 1}));
}

TEST(Linearize, SkipsNullsAndJoinsArrays) {
  auto s = parse_ddl("CREATE TABLE t (name TEXT, tags TEXT[], n INT);");
  Row row{Value::text("A"), Value::array({Value::text("x"), Value::text("y")}), Value::null()};
  EXPECT_EQ(linearize_row(row, s), "name: A, tags: x; y");
}

TEST(Linearize, SearchRanksMatchingRowFirst) {
  suql::testing::FixtureEnv env("restaurants");
  const Table& t = *env.fixture.catalog.get("restaurants");
  HashingEmbedder e;
  auto rows = linearized_search(t, "Daigo Chicago salmon", 1, e);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(t.row(rows[0])[0], Value::text("Daigo"));
}

TEST(IndexCacheTest, BuildsOncePerColumn) {
  suql::testing::FixtureEnv env("restaurants");
  const Table& t = *env.fixture.catalog.get("restaurants");
  IndexCache cache(std::make_shared<HashingEmbedder>());
  std::size_t rev = *t.schema().find("reviews");
  const ColumnIndex* a = &cache.get(t, rev);
  const ColumnIndex* b = &cache.get(t, rev);
  EXPECT_EQ(a, b);
  EXPECT_EQ(cache.builds(), 1u);
}
