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

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "suql/lexer.hpp"
#include "suql/value.hpp"

namespace suql {

struct Column {
  std::string name;
  SemanticType type;
  /// Enum semantics on a TEXT / TEXT[] column without changing its declared
  /// type (e.g. restaurant cuisines).
  EnumDomainPtr enum_annotation;

  /// The domain `=` is overloaded against: the ENUM type's domain or the
  /// annotation, whichever is present.
  EnumDomainPtr enum_domain() const { return type.kind == TypeKind::kEnum ? type.domain : enum_annotation; }
};

class TableSchema {
 public:
  TableSchema() = default;
  /// Throws Error(kSchema) on zero columns or case-insensitive duplicates.
  TableSchema(std::string name, std::vector<Column> columns);

  const std::string& name() const { return name_; }
  const std::vector<Column>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }
  const Column& column(std::size_t i) const { return columns_.at(i); }
  std::optional<std::size_t> find(std::string_view column_name) const;

  /// Attaches an enum domain to a TEXT or TEXT[] column.
  void annotate_enum(std::string_view column_name, EnumDomainPtr domain);

  std::vector<std::size_t> free_text_columns() const;

 private:
  std::string name_;
  std::vector<Column> columns_;
};

using Row = std::vector<Value>;

class Table {
 public:
  Table(TableSchema schema, std::vector<Row> rows);

  const TableSchema& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  /// Row ids are dense from 0 in load order.
  const Row& row(std::size_t row_id) const { return rows_.at(row_id); }

 private:
  TableSchema schema_;
  std::vector<Row> rows_;
};

using TablePtr = std::shared_ptr<const Table>;

/// Immutable snapshot of named tables. Safe for concurrent readers.
class Catalog {
 public:
  void add(TablePtr table);
  TablePtr find(std::string_view name) const;
  TablePtr get(std::string_view name) const;  // throws Error(kBind)
  std::vector<std::string> table_names() const;
  const std::map<std::string, TablePtr>& tables() const { return tables_; }

 private:
  std::map<std::string, TablePtr> tables_;
};

// --- DDL --------------------------------------------------------------------

/// Parses a type name starting at tokens[pos] (INT, NUMERIC(2,1), TEXT[],
/// ENUM ('a', 'b'), ...). Advances pos past it. Throws Error(kSchema) for
/// unknown type keywords.
SemanticType parse_type_spec(const std::vector<Token>& tokens, std::size_t& pos,
                             std::string_view enum_name = "enum");

/// One CREATE TABLE statement of the supported subset.
TableSchema parse_ddl(std::string_view ddl_text);

/// CREATE TABLE text that parse_ddl accepts back.
std::string schema_to_ddl(const TableSchema& schema);

// --- rows -------------------------------------------------------------------

enum class RowFormat { kJsonLines, kCsv };

/// Loads records, coercing cells with cast_value. Missing cells become
/// Null. Array cells are JSON arrays (in CSV, a JSON array in the cell).
/// Throws Error(kData) naming the 0-based row, the column and the raw text.
Table load_rows(const TableSchema& schema, std::istream& source, RowFormat format);

nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j, const SemanticType& type);

/// One JSON object per row, columns in schema order, '\n' terminated.
std::string table_to_jsonl(const Table& table);

// --- schema.json ------------------------------------------------------------

nlohmann::ordered_json schema_to_json(const TableSchema& schema);
TableSchema schema_from_json(const nlohmann::json& j);
nlohmann::ordered_json catalog_schema_json(const Catalog& catalog);

/// Splits a CSV line set honoring double-quote escaping. Exposed for tests.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

}  // namespace suql
