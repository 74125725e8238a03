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

#include "suql/catalog.hpp"

#include <set>
#include <sstream>

#include "suql/error.hpp"
#include "suql/strings.hpp"

namespace suql {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Schema / table / catalog

TableSchema::TableSchema(std::string name, std::vector<Column> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty()) throw Error(ErrorCode::kSchema, "table '" + name_ + "' has no columns");
  std::set<std::string> seen;
  for (const auto& c : columns_) {
    if (!seen.insert(to_lower(c.name)).second)
      throw Error(ErrorCode::kSchema, "duplicate column '" + c.name + "' in table '" + name_ + "'");
    if (c.type.kind == TypeKind::kEnum && (!c.type.domain || c.type.domain->size() == 0))
      throw Error(ErrorCode::kSchema, "enum column '" + c.name + "' has no domain");
  }
}

std::optional<std::size_t> TableSchema::find(std::string_view column_name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == column_name) return i;
  return std::nullopt;
}

void TableSchema::annotate_enum(std::string_view column_name, EnumDomainPtr domain) {
  auto idx = find(column_name);
  if (!idx) throw Error(ErrorCode::kSchema, "no column '" + std::string(column_name) + "' to annotate");
  auto& col = columns_[*idx];
  if (col.type.kind != TypeKind::kText)
    throw Error(ErrorCode::kSchema, "enum annotation needs a TEXT or TEXT[] column, '" + col.name + "' is " +
                                        col.type.to_string());
  col.enum_annotation = std::move(domain);
}

std::vector<std::size_t> TableSchema::free_text_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].type.is_free_text()) out.push_back(i);
  return out;
}

Table::Table(TableSchema schema, std::vector<Row> rows) : schema_(std::move(schema)), rows_(std::move(rows)) {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != schema_.size())
      throw Error(ErrorCode::kData, "row " + std::to_string(r) + " has " + std::to_string(rows_[r].size()) +
                                        " values, expected " + std::to_string(schema_.size()));
    for (std::size_t c = 0; c < schema_.size(); ++c) {
      if (!value_fits(rows_[r][c], schema_.column(c).type))
        throw Error(ErrorCode::kData, "row " + std::to_string(r) + ", column " + schema_.column(c).name +
                                          ": value '" + rows_[r][c].to_string() + "' does not fit " +
                                          schema_.column(c).type.to_string());
    }
  }
}

void Catalog::add(TablePtr table) { tables_[table->schema().name()] = std::move(table); }

TablePtr Catalog::find(std::string_view name) const {
  auto it = tables_.find(std::string(name));
  return it == tables_.end() ? nullptr : it->second;
}

TablePtr Catalog::get(std::string_view name) const {
  auto t = find(name);
  if (!t) throw Error(ErrorCode::kBind, "unknown table '" + std::string(name) + "'");
  return t;
}

std::vector<std::string> Catalog::table_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : tables_) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------
// DDL

namespace {

std::string identifier_name(const Token& t) {
  if (t.type == TokenType::kQuotedIdent) return t.text;
  return to_lower(t.text);
}

[[noreturn]] void ddl_error(const Token& t, const std::string& what) {
  throw Error(ErrorCode::kSchema, what + " at position " + std::to_string(t.pos), t.pos);
}

void expect(const std::vector<Token>& tokens, std::size_t& pos, TokenType type) {
  if (tokens[pos].type != type)
    ddl_error(tokens[pos], "expected " + std::string(token_type_name(type)) + ", found " +
                               std::string(token_type_name(tokens[pos].type)));
  ++pos;
}

int expect_int(const std::vector<Token>& tokens, std::size_t& pos) {
  if (tokens[pos].type != TokenType::kInt) ddl_error(tokens[pos], "expected an integer");
  return std::stoi(tokens[pos++].text);
}

}  // namespace

SemanticType parse_type_spec(const std::vector<Token>& tokens, std::size_t& pos, std::string_view enum_name) {
  const Token& t = tokens[pos];
  if (t.type != TokenType::kIdent) ddl_error(t, "expected a type name");
  std::string kw = to_upper(t.text);
  ++pos;
  SemanticType type;
  auto skip_length = [&] {
    if (tokens[pos].type == TokenType::kLParen) {
      ++pos;
      expect_int(tokens, pos);
      expect(tokens, pos, TokenType::kRParen);
    }
  };
  if (kw == "INT" || kw == "INTEGER" || kw == "BIGINT" || kw == "SMALLINT" || kw == "INT4" || kw == "INT8") {
    type = SemanticType::integer();
  } else if (kw == "FLOAT" || kw == "REAL" || kw == "FLOAT8" || kw == "FLOAT4") {
    type = SemanticType::floating();
  } else if (kw == "DOUBLE") {
    if (tokens[pos].is_keyword("PRECISION")) ++pos;
    type = SemanticType::floating();
  } else if (kw == "NUMERIC" || kw == "DECIMAL" || kw == "NUMBER") {
    type = SemanticType::numeric();
    if (tokens[pos].type == TokenType::kLParen) {
      ++pos;
      type.precision = expect_int(tokens, pos);
      if (tokens[pos].type == TokenType::kComma) {
        ++pos;
        type.scale = expect_int(tokens, pos);
      }
      expect(tokens, pos, TokenType::kRParen);
      if (type.precision < 1 || type.scale < 0 || type.scale > type.precision)
        ddl_error(t, "invalid NUMERIC precision/scale");
    }
  } else if (kw == "BOOLEAN" || kw == "BOOL") {
    type = SemanticType::boolean();
  } else if (kw == "TEXT" || kw == "STRING") {
    type = SemanticType::text();
  } else if (kw == "VARCHAR" || kw == "CHAR") {
    skip_length();
    type = SemanticType::text();
  } else if (kw == "CHARACTER") {
    if (tokens[pos].is_keyword("VARYING")) ++pos;
    skip_length();
    type = SemanticType::text();
  } else if (kw == "DATE") {
    type = SemanticType::date();
  } else if (kw == "TIME") {
    type = SemanticType::time();
  } else if (kw == "INTERVAL") {
    type = SemanticType::interval();
  } else if (kw == "FREE_TEXT") {
    type = SemanticType::free_text();
  } else if (kw == "ENUM") {
    expect(tokens, pos, TokenType::kLParen);
    std::vector<std::string> values;
    if (tokens[pos].type == TokenType::kRParen) ddl_error(tokens[pos], "empty ENUM list");
    while (true) {
      if (tokens[pos].type != TokenType::kString) ddl_error(tokens[pos], "expected an ENUM string literal");
      values.push_back(tokens[pos++].text);
      if (tokens[pos].type == TokenType::kComma) {
        ++pos;
        continue;
      }
      expect(tokens, pos, TokenType::kRParen);
      break;
    }
    type = SemanticType::enumeration(EnumDomain::make(std::string(enum_name), std::move(values)));
  } else {
    ddl_error(t, "unknown type '" + t.text + "'");
  }
  if (tokens[pos].type == TokenType::kLBracket && tokens[pos + 1].type == TokenType::kRBracket) {
    pos += 2;
    type.array = true;
    if (tokens[pos].type == TokenType::kLBracket) ddl_error(tokens[pos], "nested arrays are not supported");
  }
  return type;
}

TableSchema parse_ddl(std::string_view ddl_text) {
  std::vector<Token> tokens = tokenize(ddl_text);
  std::size_t pos = 0;
  if (!tokens[pos].is_keyword("CREATE")) ddl_error(tokens[pos], "expected CREATE TABLE");
  ++pos;
  if (!tokens[pos].is_keyword("TABLE")) ddl_error(tokens[pos], "expected TABLE");
  ++pos;
  if (tokens[pos].type != TokenType::kIdent && tokens[pos].type != TokenType::kQuotedIdent)
    ddl_error(tokens[pos], "expected a table name");
  std::string table_name = identifier_name(tokens[pos++]);
  expect(tokens, pos, TokenType::kLParen);
  std::vector<Column> columns;
  std::set<std::string> seen;
  while (true) {
    const Token& name_tok = tokens[pos];
    if (name_tok.type != TokenType::kIdent && name_tok.type != TokenType::kQuotedIdent)
      ddl_error(name_tok, "expected a column name");
    ++pos;
    Column col;
    col.name = identifier_name(name_tok);
    if (!seen.insert(to_lower(col.name)).second) ddl_error(name_tok, "duplicate column '" + col.name + "'");
    col.type = parse_type_spec(tokens, pos, col.name);
    // Column constraints are accepted and ignored.
    while (tokens[pos].is_keyword("NOT") || tokens[pos].is_keyword("NULL") || tokens[pos].is_keyword("PRIMARY") ||
           tokens[pos].is_keyword("KEY") || tokens[pos].is_keyword("UNIQUE"))
      ++pos;
    columns.push_back(std::move(col));
    if (tokens[pos].type == TokenType::kComma) {
      ++pos;
      continue;
    }
    expect(tokens, pos, TokenType::kRParen);
    break;
  }
  if (tokens[pos].type == TokenType::kSemi) ++pos;
  if (tokens[pos].type != TokenType::kEnd) ddl_error(tokens[pos], "unexpected text after CREATE TABLE");
  return TableSchema(std::move(table_name), std::move(columns));
}

static std::string quote_ident(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string schema_to_ddl(const TableSchema& schema) {
  std::string out = "CREATE TABLE " + quote_ident(schema.name()) + " (";
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (i) out += ", ";
    out += quote_ident(schema.column(i).name) + " " + schema.column(i).type.to_string();
  }
  return out + ");";
}

// ---------------------------------------------------------------------------
// Values <-> JSON

json value_to_json(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kNull: return nullptr;
    case ValueKind::kInt: return v.as_int();
    case ValueKind::kFloat: return v.as_float();
    case ValueKind::kBool: return v.as_bool();
    case ValueKind::kText: return v.as_text();
    case ValueKind::kDate:
    case ValueKind::kTime:
    case ValueKind::kInterval: return v.to_string();
    case ValueKind::kArray: {
      json arr = json::array();
      for (const auto& item : v.as_array()) arr.push_back(value_to_json(item));
      return arr;
    }
  }
  return nullptr;
}

Value value_from_json(const json& j, const SemanticType& type) {
  if (j.is_null()) return Value::null();
  if (type.array) {
    json arr = j;
    if (j.is_string()) {
      arr = json::parse(j.get<std::string>(), nullptr, false);
      if (arr.is_discarded() || !arr.is_array())
        throw Error(ErrorCode::kCast, "expected a JSON array, got '" + j.get<std::string>() + "'");
    }
    if (!arr.is_array()) throw Error(ErrorCode::kCast, "expected a JSON array, got " + j.dump());
    ValueList items;
    SemanticType element = type.element();
    for (const auto& e : arr) items.push_back(value_from_json(e, element));
    return Value::array(std::move(items));
  }
  Value raw;
  if (j.is_string()) raw = Value::text(j.get<std::string>());
  else if (j.is_boolean()) raw = Value::boolean(j.get<bool>());
  else if (j.is_number_integer()) raw = Value::integer(j.get<std::int64_t>());
  else if (j.is_number()) raw = Value::floating(j.get<double>());
  else throw Error(ErrorCode::kCast, "unsupported JSON cell " + j.dump());
  return cast_value(raw, type);
}

// ---------------------------------------------------------------------------
// Row loading

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get(c);
      fields.push_back(std::move(field));
      field.clear();
      if (!(fields.size() == 1 && fields[0].empty())) records.push_back(std::move(fields));
      fields.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (in_quotes) throw Error(ErrorCode::kData, "unterminated quoted CSV field");
  if (any) {
    fields.push_back(std::move(field));
    records.push_back(std::move(fields));
  }
  return records;
}

namespace {

[[noreturn]] void cell_error(std::size_t row, const Column& col, const std::string& raw, const std::string& why) {
  throw Error(ErrorCode::kData,
              "row " + std::to_string(row) + ", column " + col.name + ": cannot load '" + raw + "' (" + why + ")");
}

}  // namespace

Table load_rows(const TableSchema& schema, std::istream& source, RowFormat format) {
  std::vector<Row> rows;
  if (format == RowFormat::kJsonLines) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      json obj = json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object())
        throw Error(ErrorCode::kData, "line " + std::to_string(line_no) + ": not a JSON object");
      std::size_t row_id = rows.size();
      Row row;
      row.reserve(schema.size());
      for (const auto& col : schema.columns()) {
        auto it = obj.find(col.name);
        if (it == obj.end()) {
          row.push_back(Value::null());
          continue;
        }
        try {
          row.push_back(value_from_json(*it, col.type));
        } catch (const Error& e) {
          cell_error(row_id, col, it->is_string() ? it->get<std::string>() : it->dump(), e.what());
        }
      }
      rows.push_back(std::move(row));
    }
  } else {
    auto records = parse_csv(source);
    if (records.empty()) throw Error(ErrorCode::kData, "CSV input has no header row");
    const auto& header = records[0];
    std::vector<std::optional<std::size_t>> mapping(schema.size());
    for (std::size_t h = 0; h < header.size(); ++h) {
      if (auto idx = schema.find(std::string(trim(header[h])))) mapping[*idx] = h;
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
      std::size_t row_id = rows.size();
      Row row;
      for (std::size_t c = 0; c < schema.size(); ++c) {
        const auto& col = schema.column(c);
        if (!mapping[c] || *mapping[c] >= records[r].size() || records[r][*mapping[c]].empty()) {
          row.push_back(Value::null());
          continue;
        }
        const std::string& raw = records[r][*mapping[c]];
        try {
          row.push_back(col.type.array ? value_from_json(json(raw), col.type) : cast_value(Value::text(raw), col.type));
        } catch (const Error& e) {
          cell_error(row_id, col, raw, e.what());
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return Table(schema, std::move(rows));
}

std::string table_to_jsonl(const Table& table) {
  std::string out;
  const auto& schema = table.schema();
  for (const auto& row : table.rows()) {
    ordered_json obj = ordered_json::object();
    for (std::size_t c = 0; c < schema.size(); ++c) obj[schema.column(c).name] = value_to_json(row[c]);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// schema.json

ordered_json schema_to_json(const TableSchema& schema) {
  ordered_json cols = ordered_json::array();
  for (const auto& c : schema.columns()) {
    ordered_json jc;
    jc["name"] = c.name;
    if (c.type.kind == TypeKind::kEnum) {
      jc["type"] = c.type.array ? "ENUM[]" : "ENUM";
      jc["enum"] = c.type.domain->values();
    } else {
      jc["type"] = c.type.to_string();
    }
    if (c.enum_annotation) jc["enum_annotation"] = {{"name", c.enum_annotation->name()}, {"values", c.enum_annotation->values()}};
    jc["free_text"] = c.type.is_free_text();
    cols.push_back(std::move(jc));
  }
  ordered_json out;
  out["name"] = schema.name();
  out["columns"] = std::move(cols);
  return out;
}

TableSchema schema_from_json(const json& j) {
  try {
    std::vector<Column> columns;
    for (const auto& jc : j.at("columns")) {
      Column c;
      c.name = jc.at("name").get<std::string>();
      std::string type = jc.at("type").get<std::string>();
      if (type == "ENUM" || type == "ENUM[]") {
        c.type = SemanticType::enumeration(EnumDomain::make(c.name, jc.at("enum").get<std::vector<std::string>>()));
        c.type.array = type == "ENUM[]";
      } else {
        auto tokens = tokenize(type);
        std::size_t pos = 0;
        c.type = parse_type_spec(tokens, pos, c.name);
        if (tokens[pos].type != TokenType::kEnd) throw Error(ErrorCode::kSchema, "bad type '" + type + "'");
      }
      if (jc.contains("enum_annotation")) {
        const auto& ann = jc.at("enum_annotation");
        c.enum_annotation =
            EnumDomain::make(ann.at("name").get<std::string>(), ann.at("values").get<std::vector<std::string>>());
      }
      columns.push_back(std::move(c));
    }
    return TableSchema(j.at("name").get<std::string>(), std::move(columns));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("malformed schema JSON: ") + e.what());
  }
}

ordered_json catalog_schema_json(const Catalog& catalog) {
  ordered_json tables = ordered_json::array();
  for (const auto& [name, table] : catalog.tables()) {
    ordered_json t = schema_to_json(table->schema());
    t["rows"] = table->size();
    tables.push_back(std::move(t));
  }
  ordered_json out;
  out["tables"] = std::move(tables);
  return out;
}

}  // namespace suql
