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

#include <fstream>

#include "suql/error.hpp"
#include "suql/fixtures.hpp"
#include "test_env.hpp"

using namespace suql;
namespace fs = std::filesystem;

TEST(Fixtures, AllCorporaLoadWithNeutralProvenance) {
  auto ids = fixture_ids();
  EXPECT_EQ(ids, (std::vector<std::string>{"flagbearers", "hybridqa", "restaurants", "stress"}));
  for (const auto& id : ids) {
    Fixture fx = load_fixture(id);
    EXPECT_FALSE(fx.provenance.empty()) << id;
    EXPECT_FALSE(fx.catalog.tables().empty()) << id;
  }
}

TEST(Fixtures, UnknownIdIsNotFound) {
  try {
    load_fixture("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(Fixtures, TamperedFileFailsIntegrity) {
  suql::testing::TempDir dir;
  fs::copy(default_fixture_dir(), dir.path, fs::copy_options::recursive);
  std::ofstream(dir.path / "flagbearers" / "rows.jsonl", std::ios::app) << "\n";
  try {
    load_fixture("flagbearers", dir.path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIntegrity);
  }
  EXPECT_NO_THROW(load_fixture("restaurants", dir.path));
}

TEST(Fixtures, EveryBundledQueryExecutes) {
  for (const auto& id : fixture_ids()) {
    suql::testing::FixtureEnv env(id);
    for (const auto& q : env.fixture.queries) EXPECT_NO_THROW(env.run(q.text)) << id << " " << q.id;
  }
}

TEST(Fixtures, StressTableIsDeterministicAndShaped) {
  Fixture fx = load_fixture("stress");
  const Table& t = *fx.catalog.get("venues");
  ASSERT_EQ(t.size(), 1000u);
  std::size_t loc = *t.schema().find("location"), rev = *t.schema().find("reviews");
  std::size_t springfield = 0, parking = 0, last = 0;
  for (std::size_t r = 0; r < t.size(); ++r) {
    bool in = t.row(r)[loc] == Value::text("Springfield");
    EXPECT_EQ(in, r % 10 == 3) << r;
    if (!in) continue;
    ++springfield;
    last = r;
    for (const auto& review : t.row(r)[rev].as_array())
      if (review.as_text() == "Parking is easy here.") {
        ++parking;
        EXPECT_EQ(r, 993u);
      }
  }
  EXPECT_EQ(springfield, 100u);
  EXPECT_EQ(last, 993u);
  EXPECT_EQ(parking, 1u);
  auto gen = fx.json_asset("queries").at("generator");
  Table again = make_stress_table(t.schema(), gen.at("rows"), gen.at("seed"));
  EXPECT_EQ(again.rows(), t.rows());
}

TEST(Fixtures, ReadJsonlSkipsBlankLinesAndReportsBadOnes) {
  suql::testing::TempDir dir;
  std::ofstream(dir.path / "a.jsonl") << "{\"a\": 1}\n\n{\"a\": 2}\n";
  EXPECT_EQ(read_jsonl(dir.path / "a.jsonl").size(), 2u);
  std::ofstream(dir.path / "b.jsonl") << "{\"a\": 1}\n{oops\n";
  EXPECT_THROW(read_jsonl(dir.path / "b.jsonl"), Error);
}

TEST(Fixtures, FileDigest) {
  suql::testing::TempDir dir;
  std::ofstream(dir.path / "abc", std::ios::binary) << "abc";
  EXPECT_EQ(file_sha256(dir.path / "abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
