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

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "suql/catalog.hpp"
#include "suql/executor.hpp"
#include "suql/retrieval.hpp"

namespace suql {

/// A catalog plus its retrieval indexes. The catalog is immutable once
/// constructed; the index cache fills lazily and is internally locked.
class Database {
 public:
  explicit Database(Catalog catalog, std::shared_ptr<const Embedder> embedder = nullptr);

  /// Directory layout: schema.json, <table>.jsonl, <table>.<column>.idx.
  static Database open(const std::filesystem::path& dir, std::shared_ptr<const Embedder> embedder = nullptr);
  /// Writes the directory; builds every FREE_TEXT column index.
  void save(const std::filesystem::path& dir) const;

  const Catalog& catalog() const { return catalog_; }
  IndexCache& indexes() const { return *indexes_; }
  const Embedder& embedder() const { return *embedder_; }

 private:
  Catalog catalog_;
  std::shared_ptr<const Embedder> embedder_;
  std::shared_ptr<IndexCache> indexes_;
};

std::string index_file_name(const std::string& table, const std::string& column);

/// Every CREATE TABLE statement in a script.
std::vector<TableSchema> parse_ddl_script(std::string_view text);

/// {"table.column": {"name": ..., "values": [...]}} enum annotations.
void apply_annotations(std::vector<TableSchema>& schemas, const nlohmann::json& annotations);

struct IngestSpec {
  std::filesystem::path schema;  // .sql DDL script or schema.json
  std::vector<std::filesystem::path> data;  // one file per table, matched by stem (single table: any name)
  std::filesystem::path annotations;        // optional
  std::filesystem::path out_dir;
};

/// Loads, validates and writes a database directory. On failure the output
/// directory is removed and the error rethrown.
void ingest(const IngestSpec& spec);

struct QueryOptions {
  PlannerConfig planner;
  std::size_t parallelism = 1;
  /// "suql" or "linearized" (embedding search over linearized rows; the
  /// query text is then a natural-language request).
  std::string mode = "suql";
  std::size_t linearized_k = 3;
  std::string table;  // linearized mode target (defaults to the only table)
};

struct QueryOutcome {
  std::string suql;        // canonical text of the executed query
  std::string plan_text;   // filled for EXPLAIN
  bool explain_only = false;
  ResultSet result;
};

/// Parse → bind → plan → execute. `EXPLAIN` returns the plan without
/// running it; `EXPLAIN ANALYZE` runs it and returns both.
QueryOutcome run_query(const Database& db, TextRuntime& runtime, std::string_view text, const QueryOptions& options = {});

}  // namespace suql
