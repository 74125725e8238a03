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

#include "suql/database.hpp"

#include <fstream>
#include <sstream>

#include "suql/error.hpp"
#include "suql/lexer.hpp"
#include "suql/parser.hpp"
#include "suql/strings.hpp"

namespace suql {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  out << text;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (unsigned char c : s) out += std::isalnum(c) || c == '-' || c == '_' ? static_cast<char>(c) : '_';
  return out;
}

}  // namespace

std::string index_file_name(const std::string& table, const std::string& column) {
  return sanitize(table) + "." + sanitize(column) + ".idx";
}

Database::Database(Catalog catalog, std::shared_ptr<const Embedder> embedder)
    : catalog_(std::move(catalog)),
      embedder_(embedder ? std::move(embedder) : std::make_shared<HashingEmbedder>()),
      indexes_(std::make_shared<IndexCache>(embedder_)) {}

Database Database::open(const fs::path& dir, std::shared_ptr<const Embedder> embedder) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, "database directory " + dir.string() + " does not exist");
  nlohmann::json schema_doc;
  try {
    schema_doc = nlohmann::json::parse(read_text(dir / "schema.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kData, "malformed schema.json: " + std::string(e.what()));
  }
  Catalog catalog;
  for (const auto& jt : schema_doc.at("tables")) {
    TableSchema schema = schema_from_json(jt);
    std::ifstream rows(dir / (sanitize(schema.name()) + ".jsonl"));
    if (!rows) throw Error(ErrorCode::kIo, "missing rows file for table " + schema.name());
    catalog.add(std::make_shared<Table>(load_rows(schema, rows, RowFormat::kJsonLines)));
  }
  Database db(std::move(catalog), std::move(embedder));
  for (const auto& [name, table] : db.catalog().tables()) {
    for (auto c : table->schema().free_text_columns()) {
      fs::path p = dir / index_file_name(name, table->schema().column(c).name);
      if (!fs::exists(p)) continue;
      ColumnIndex idx = ColumnIndex::load(p);
      if (idx.tag() != db.embedder().tag() || idx.rows() != table->size()) continue;  // stale: rebuilt on use
      db.indexes().put(*table, c, std::move(idx));
    }
  }
  return db;
}

void Database::save(const fs::path& dir) const {
  fs::create_directories(dir);
  nlohmann::ordered_json doc;
  doc["tables"] = nlohmann::ordered_json::array();
  for (const auto& [name, table] : catalog_.tables()) {
    doc["tables"].push_back(schema_to_json(table->schema()));
    write_text(dir / (sanitize(name) + ".jsonl"), table_to_jsonl(*table));
    for (auto c : table->schema().free_text_columns())
      indexes_->get(*table, c).save(dir / index_file_name(name, table->schema().column(c).name));
  }
  write_text(dir / "schema.json", doc.dump(2) + "\n");
}

std::vector<TableSchema> parse_ddl_script(std::string_view text) {
  std::vector<Token> tokens = tokenize(text);
  std::vector<TableSchema> out;
  std::size_t start = 0;
  for (const auto& t : tokens) {
    if (t.type != TokenType::kSemi && t.type != TokenType::kEnd) continue;
    std::string_view stmt = text.substr(start, t.pos - start);
    if (!trim(stmt).empty()) out.push_back(parse_ddl(stmt));
    start = t.pos + 1;
  }
  if (out.empty()) throw Error(ErrorCode::kSchema, "no CREATE TABLE statement found");
  return out;
}

void apply_annotations(std::vector<TableSchema>& schemas, const nlohmann::json& annotations) {
  for (const auto& [key, spec] : annotations.items()) {
    auto dot = key.find('.');
    if (dot == std::string::npos) throw Error(ErrorCode::kSchema, "annotation key '" + key + "' must be table.column");
    std::string table = key.substr(0, dot), column = key.substr(dot + 1);
    bool found = false;
    for (auto& s : schemas) {
      if (s.name() != table) continue;
      s.annotate_enum(column, EnumDomain::make(spec.value("name", column), spec.at("values").get<std::vector<std::string>>()));
      found = true;
    }
    if (!found) throw Error(ErrorCode::kSchema, "annotation for unknown table '" + table + "'");
  }
}

void ingest(const IngestSpec& spec) {
  bool created = !fs::exists(spec.out_dir);
  try {
    std::vector<TableSchema> schemas;
    std::string schema_text = read_text(spec.schema);
    if (spec.schema.extension() == ".json") {
      auto doc = nlohmann::json::parse(schema_text);
      for (const auto& jt : doc.contains("tables") ? doc.at("tables") : nlohmann::json::array({doc}))
        schemas.push_back(schema_from_json(jt));
    } else {
      schemas = parse_ddl_script(schema_text);
    }
    if (!spec.annotations.empty()) apply_annotations(schemas, nlohmann::json::parse(read_text(spec.annotations)));

    Catalog catalog;
    for (const auto& schema : schemas) {
      const fs::path* source = nullptr;
      for (const auto& p : spec.data)
        if (p.stem() == schema.name() || (schemas.size() == 1 && spec.data.size() == 1)) source = &p;
      if (!source) throw Error(ErrorCode::kIo, "no data file for table '" + schema.name() + "'");
      std::ifstream in(*source, std::ios::binary);
      if (!in) throw Error(ErrorCode::kIo, "cannot read data file " + source->string());
      RowFormat fmt = source->extension() == ".csv" ? RowFormat::kCsv : RowFormat::kJsonLines;
      catalog.add(std::make_shared<Table>(load_rows(schema, in, fmt)));
    }
    Database(std::move(catalog)).save(spec.out_dir);
  } catch (...) {
    if (created) {
      std::error_code ec;
      fs::remove_all(spec.out_dir, ec);
    }
    throw;
  }
}

QueryOutcome run_query(const Database& db, TextRuntime& runtime, std::string_view text, const QueryOptions& options) {
  QueryOutcome out;
  ExecContext ctx{runtime, db.indexes(), options.parallelism};
  if (options.mode == "linearized") {
    std::string table_name = options.table;
    if (table_name.empty()) {
      auto names = db.catalog().table_names();
      if (names.size() != 1) throw Error(ErrorCode::kBadRequest, "linearized mode needs a table name");
      table_name = names.front();
    }
    TablePtr table = db.catalog().get(table_name);
    for (const auto& c : table->schema().columns()) out.result.columns.push_back(OutputColumn{c.name, c.type});
    for (auto r : linearized_search(*table, text, options.linearized_k, db.embedder()))
      out.result.rows.push_back(table->row(r));
    out.result.stats.rows_scanned = table->size();
    return out;
  }
  if (options.mode != "suql") throw Error(ErrorCode::kBadRequest, "unknown query mode '" + options.mode + "'");

  Statement stmt = parse_statement(text);
  out.suql = print(stmt.query);
  PlanTree plan = suql::plan(bind(std::move(stmt.query), db.catalog()), options.planner);
  if (stmt.explain) {
    out.plan_text = explain(plan);
    if (!stmt.analyze) {
      out.explain_only = true;
      out.result.columns = plan.query.outputs;
      return out;
    }
  }
  out.result = execute(plan, ctx);
  return out;
}

}  // namespace suql
