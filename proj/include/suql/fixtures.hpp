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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "suql/catalog.hpp"

namespace suql {

struct FixtureQuery {
  std::string id;
  std::string text;
  nlohmann::json expected;  // null when the corpus pins no golden
};

/// A bundled corpus: catalog, query set and mock rule set, digest-checked
/// against fixtures/manifest.json on load.
struct Fixture {
  std::string id;
  std::string provenance;
  std::filesystem::path root;
  nlohmann::json entry;  // the manifest entry
  Catalog catalog;
  std::vector<TableSchema> schemas;
  std::vector<FixtureQuery> queries;
  nlohmann::json rules;  // MockBackend::from_json input

  bool has(const std::string& key) const { return entry.contains(key); }
  std::filesystem::path path(const std::string& key) const;
  nlohmann::json json_asset(const std::string& key) const;
  std::string text_asset(const std::string& key) const;
};

/// $SUQL_FIXTURE_DIR, else the source-tree fixtures/ directory.
std::filesystem::path default_fixture_dir();

std::vector<std::string> fixture_ids(const std::filesystem::path& root = default_fixture_dir());

/// Throws Error(kNotFound) for an unknown id and Error(kIntegrity) when a
/// file digest differs from the manifest.
Fixture load_fixture(const std::string& id, const std::filesystem::path& root = default_fixture_dir());

/// Deterministic venue table for retrieval budgets: every tenth row (ids
/// 3, 13, ...) is in Springfield and only the last Springfield row has a
/// review saying parking is easy.
Table make_stress_table(const TableSchema& schema, std::size_t rows, std::uint64_t seed);

/// JSON-lines reader shared by fixture and batch inputs.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

std::string file_sha256(const std::filesystem::path& path);

}  // namespace suql
