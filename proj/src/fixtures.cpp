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

#include "suql/fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "suql/database.hpp"
#include "suql/error.hpp"
#include "suql/strings.hpp"

namespace suql {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_manifest(const fs::path& root) {
  try {
    return nlohmann::json::parse(slurp(root / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIntegrity, "malformed fixture manifest: " + std::string(e.what()));
  }
}

constexpr const char* kTowns[] = {"Shelbyville", "Ogdenville", "North Haverbrook", "Capital City",
                                  "Brockway",    "Cypress Creek", "Waverly Hills", "Smallville"};
constexpr const char* kAdjectives[] = {"Blue", "Golden", "Rusty", "Little", "Green", "Silver", "Lucky", "Old"};
constexpr const char* kNouns[] = {"Fork", "Spoon", "Kettle", "Lantern", "Table", "Oven", "Anchor", "Garden"};
constexpr const char* kReviews[] = {
    "The service was friendly and quick.",     "Portions are generous for the price.",
    "Parking was a nightmare on weekends.",    "Street parking can be hard to find.",
    "Great place for a quick lunch.",          "The patio is lovely in the summer.",
    "Staff is attentive and kind.",            "It gets noisy after eight.",
    "Desserts are the highlight here.",        "Easy to book a table online.",
    "Prices went up recently.",                "Good for large groups.",
    "The menu changes every season.",          "Bring cash, cards are not accepted.",
};
constexpr const char* kDishes[] = {"Fresh pasta with basil", "Fish and chips", "Grilled cheese",
                                   "Mushroom risotto",       "Beef stew",      "Caesar salad",
                                   "Pasta carbonara",        "Veggie burger"};
constexpr const char* kParkingReview = "Parking is easy here.";

template <std::size_t N>
const char* pick(std::mt19937_64& rng, const char* const (&pool)[N]) {
  return pool[rng() % N];
}

}  // namespace

fs::path Fixture::path(const std::string& key) const {
  if (!entry.contains(key)) throw Error(ErrorCode::kNotFound, "fixture '" + id + "' has no asset '" + key + "'");
  return root / entry.at(key).get<std::string>();
}

nlohmann::json Fixture::json_asset(const std::string& key) const {
  return nlohmann::json::parse(slurp(path(key)));
}

std::string Fixture::text_asset(const std::string& key) const { return slurp(path(key)); }

fs::path default_fixture_dir() {
  if (const char* env = std::getenv("SUQL_FIXTURE_DIR"); env && *env) return env;
  return SUQL_FIXTURE_DIR;
}

std::string file_sha256(const fs::path& path) { return sha256_hex(slurp(path)); }

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::vector<nlohmann::json> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kData, path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> fixture_ids(const fs::path& root) {
  std::vector<std::string> out;
  const nlohmann::json manifest = read_manifest(root);  // items() must not outlive its json
  for (const auto& [id, _] : manifest.at("corpora").items()) out.push_back(id);
  return out;
}

Table make_stress_table(const TableSchema& schema, std::size_t rows, std::uint64_t seed) {
  auto col = [&](const char* name) {
    auto c = schema.find(name);
    if (!c) throw Error(ErrorCode::kSchema, std::string("stress schema lacks column ") + name);
    return *c;
  };
  std::size_t c_id = col("id"), c_name = col("name"), c_loc = col("location"), c_rev = col("reviews"),
              c_dish = col("popular_dishes");
  std::size_t last_springfield = 0;
  for (std::size_t i = 0; i < rows; ++i)
    if (i % 10 == 3) last_springfield = i;

  std::mt19937_64 rng(seed);
  std::vector<Row> out;
  for (std::size_t i = 0; i < rows; ++i) {
    Row row(schema.size());
    row[c_id] = Value::integer(static_cast<std::int64_t>(i));
    row[c_name] = Value::text(std::string(pick(rng, kAdjectives)) + " " + pick(rng, kNouns) + " " + std::to_string(i));
    row[c_loc] = Value::text(i % 10 == 3 ? "Springfield" : pick(rng, kTowns));
    ValueList reviews;
    std::size_t n_reviews = 1 + rng() % 4;
    for (std::size_t k = 0; k < n_reviews; ++k) reviews.push_back(Value::text(pick(rng, kReviews)));
    if (i == last_springfield && rows > 3) reviews.push_back(Value::text(kParkingReview));
    row[c_rev] = Value::array(std::move(reviews));
    ValueList dishes;
    std::size_t n_dishes = rng() % 4;  // zero dishes exercises the empty-row score
    for (std::size_t k = 0; k < n_dishes; ++k) dishes.push_back(Value::text(pick(rng, kDishes)));
    row[c_dish] = Value::array(std::move(dishes));
    out.push_back(std::move(row));
  }
  return Table(schema, std::move(out));
}

Fixture load_fixture(const std::string& id, const fs::path& root) {
  nlohmann::json manifest = read_manifest(root);
  const auto& corpora = manifest.at("corpora");
  if (!corpora.contains(id)) throw Error(ErrorCode::kNotFound, "unknown fixture corpus '" + id + "'");

  Fixture fx;
  fx.id = id;
  fx.root = root;
  fx.entry = corpora.at(id);
  fx.provenance = fx.entry.value("provenance", "");
  for (const auto& [file, digest] : fx.entry.at("files").items()) {
    std::string actual = file_sha256(root / file);
    if (actual != digest.get<std::string>())
      throw Error(ErrorCode::kIntegrity, "fixture file " + file + " digest mismatch (expected " +
                                             digest.get<std::string>() + ", found " + actual + ")");
  }

  fx.schemas = parse_ddl_script(fx.text_asset("schema"));
  if (fx.has("annotations")) apply_annotations(fx.schemas, fx.json_asset("annotations"));

  nlohmann::json queries_doc = fx.has("queries") ? fx.json_asset("queries") : nlohmann::json::object();
  if (fx.entry.value("generated", false)) {
    const auto& gen = queries_doc.at("generator");
    for (const auto& s : fx.schemas)
      fx.catalog.add(std::make_shared<Table>(
          make_stress_table(s, gen.at("rows").get<std::size_t>(), gen.at("seed").get<std::uint64_t>())));
  } else {
    const auto& tables = fx.entry.at("tables");
    for (const auto& s : fx.schemas) {
      if (!tables.contains(s.name())) throw Error(ErrorCode::kIntegrity, "fixture lacks rows for table " + s.name());
      std::ifstream in(root / tables.at(s.name()).get<std::string>(), std::ios::binary);
      fx.catalog.add(std::make_shared<Table>(load_rows(s, in, RowFormat::kJsonLines)));
    }
  }

  for (const auto& q : queries_doc.value("queries", nlohmann::json::array()))
    fx.queries.push_back(FixtureQuery{q.at("id"), q.at("text"), q.value("expected", nlohmann::json())});
  fx.rules = fx.has("rules") ? fx.json_asset("rules") : nlohmann::json::object();
  return fx;
}

}  // namespace suql
