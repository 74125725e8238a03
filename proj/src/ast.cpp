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

#include "suql/ast.hpp"

#include <cctype>
#include <set>

#include "suql/strings.hpp"

namespace suql {

std::string_view agg_fn_name(AggFn fn) {
  switch (fn) {
    case AggFn::kMax: return "MAX";
    case AggFn::kMin: return "MIN";
    case AggFn::kCount: return "COUNT";
    case AggFn::kSum: return "SUM";
    case AggFn::kAvg: return "AVG";
  }
  return "?";
}

std::string_view cmp_op_name(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return "=";
    case CmpOp::kNe: return "!=";
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kGt: return ">";
    case CmpOp::kGe: return ">=";
    case CmpOp::kILike: return "ILIKE";
  }
  return "?";
}

// --- constructors -------------------------------------------------------------

Expr make_column(std::string name, std::string qualifier) {
  return Expr{ColumnRef{std::move(qualifier), std::move(name)}};
}
Expr make_literal(Value v) { return Expr{Literal{std::move(v)}}; }
Expr make_answer(Expr target, std::string question) {
  return Expr{AnswerCall{Box<Expr>(std::move(target)), std::move(question)}};
}
Expr make_summary(Expr target) { return Expr{SummaryCall{Box<Expr>(std::move(target))}}; }
Expr make_cast(Expr operand, SemanticType type) { return Expr{CastExpr{Box<Expr>(std::move(operand)), std::move(type)}}; }
Expr make_aggregate(AggFn fn, std::optional<Expr> arg) {
  Aggregate a{fn, std::nullopt};
  if (arg) a.arg = Box<Expr>(std::move(*arg));
  return Expr{std::move(a)};
}
Expr make_arith(ArithOp op, Expr lhs, Expr rhs) {
  return Expr{Arith{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}};
}

Predicate make_and(std::vector<Predicate> children) { return Predicate{AndPred{std::move(children)}}; }
Predicate make_or(std::vector<Predicate> children) { return Predicate{OrPred{std::move(children)}}; }
Predicate make_not(Predicate child) { return Predicate{NotPred{Box<Predicate>(std::move(child))}}; }
Predicate make_cmp(Expr lhs, CmpOp op, Expr rhs) { return Predicate{Comparison{std::move(lhs), op, std::move(rhs)}}; }

// --- equality -----------------------------------------------------------------

bool operator==(const ColumnRef& a, const ColumnRef& b) { return a.qualifier == b.qualifier && a.name == b.name; }
bool operator==(const Literal& a, const Literal& b) { return a.value == b.value; }
bool operator==(const AnswerCall& a, const AnswerCall& b) { return a.target == b.target && a.question == b.question; }
bool operator==(const SummaryCall& a, const SummaryCall& b) { return a.target == b.target; }
bool operator==(const CastExpr& a, const CastExpr& b) { return a.operand == b.operand && a.target == b.target; }
bool operator==(const Aggregate& a, const Aggregate& b) { return a.fn == b.fn && a.arg == b.arg; }
bool operator==(const Arith& a, const Arith& b) { return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs; }
bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }
bool operator==(const Comparison& a, const Comparison& b) { return a.lhs == b.lhs && a.op == b.op && a.rhs == b.rhs; }
bool operator==(const InList& a, const InList& b) { return a.operand == b.operand && a.items == b.items; }
bool operator==(const AnyEq& a, const AnyEq& b) { return a.literal == b.literal && a.column == b.column; }
bool operator==(const ArrayContains& a, const ArrayContains& b) { return a.column == b.column && a.items == b.items; }
bool operator==(const ClassifyMembership& a, const ClassifyMembership& b) {
  return a.literal == b.literal && a.column == b.column && a.array == b.array;
}
bool operator==(const AndPred& a, const AndPred& b) { return a.children == b.children; }
bool operator==(const OrPred& a, const OrPred& b) { return a.children == b.children; }
bool operator==(const NotPred& a, const NotPred& b) { return a.child == b.child; }
bool operator==(const Predicate& a, const Predicate& b) { return a.node == b.node; }
bool operator==(const SelectItem& a, const SelectItem& b) {
  return a.star == b.star && a.star_qualifier == b.star_qualifier && a.expr == b.expr && a.alias == b.alias;
}
bool operator==(const FromItem& a, const FromItem& b) {
  return a.table == b.table && a.unnest_arg == b.unnest_arg && a.alias == b.alias;
}
bool operator==(const OrderItem& a, const OrderItem& b) { return a.expr == b.expr && a.desc == b.desc; }
bool operator==(const QueryAst& a, const QueryAst& b) {
  return a.select == b.select && a.from == b.from && a.where == b.where && a.order_by == b.order_by &&
         a.limit == b.limit;
}

// --- traversal ------------------------------------------------------------------

bool contains_answer(const Expr& e) {
  bool found = false;
  visit_exprs(e, [&](const Expr& x) { found = found || x.as<AnswerCall>() || x.as<SummaryCall>(); });
  return found;
}

bool contains_answer(const Predicate& p) {
  bool found = false;
  visit_exprs(p, [&](const Expr& x) { found = found || x.as<AnswerCall>() || x.as<SummaryCall>(); });
  return found;
}

bool contains_aggregate(const Expr& e) {
  bool found = false;
  visit_exprs(e, [&](const Expr& x) { found = found || x.as<Aggregate>(); });
  return found;
}

// --- printing -----------------------------------------------------------------

namespace {

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> kWords = {
      "all",    "analyze", "and",   "any",    "array",  "as",     "asc",    "between", "by",
      "case",   "create",  "cross", "desc",   "distinct", "else", "end",    "except",  "exists",
      "explain", "false",  "from",  "group",  "having", "ilike",  "in",     "inner",   "intersect",
      "is",     "join",    "left",  "like",   "limit",  "not",    "null",   "offset",  "on",
      "or",     "order",   "right", "select", "table",  "then",   "true",   "union",   "unnest",
      "when",   "where",   "with"};
  return kWords;
}

bool needs_quotes(const std::string& name) {
  if (name.empty()) return true;
  if (!(std::islower(static_cast<unsigned char>(name[0])) || name[0] == '_')) return true;
  for (char c : name) {
    if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return true;
  }
  return reserved_words().count(name) > 0;
}

std::string print_literal(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kNull: return "NULL";
    case ValueKind::kBool: return v.as_bool() ? "TRUE" : "FALSE";
    case ValueKind::kInt: return std::to_string(v.as_int());
    case ValueKind::kFloat: return format_double(v.as_float());
    case ValueKind::kText: return quote_string(v.as_text());
    case ValueKind::kArray: {
      std::string out = "ARRAY[";
      const auto& items = v.as_array();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += print_literal(items[i]);
      }
      return out + "]";
    }
    default: return quote_string(v.to_string());
  }
}

std::string print_expr(const Expr& e);

std::string print_operand(const Expr& e) {
  // Operand of `::` binds tighter than arithmetic.
  if (e.as<Arith>()) return "(" + print_expr(e) + ")";
  return print_expr(e);
}

std::string print_expr(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ColumnRef>) {
          std::string out;
          if (!n.qualifier.empty()) out = quote_identifier(n.qualifier) + ".";
          return out + quote_identifier(n.name);
        } else if constexpr (std::is_same_v<T, Literal>) {
          return print_literal(n.value);
        } else if constexpr (std::is_same_v<T, AnswerCall>) {
          return "answer(" + print_expr(*n.target) + ", " + quote_string(n.question) + ")";
        } else if constexpr (std::is_same_v<T, SummaryCall>) {
          return "summary(" + print_expr(*n.target) + ")";
        } else if constexpr (std::is_same_v<T, CastExpr>) {
          return print_operand(*n.operand) + "::" + n.target.to_string();
        } else if constexpr (std::is_same_v<T, Aggregate>) {
          return std::string(agg_fn_name(n.fn)) + "(" + (n.arg ? print_expr(**n.arg) : std::string("*")) + ")";
        } else {
          std::string rhs = print_expr(*n.rhs);
          if (n.rhs->template as<Arith>()) rhs = "(" + rhs + ")";
          return print_expr(*n.lhs) + (n.op == ArithOp::kAdd ? " + " : " - ") + rhs;
        }
      },
      e.node);
}

std::string print_list(const std::vector<Expr>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(items[i]);
  }
  return out;
}

std::string print_pred(const Predicate& p);

std::string print_child(const Predicate& p, bool parenthesize_and) {
  if (p.as<OrPred>() || (parenthesize_and && p.as<AndPred>())) return "(" + print_pred(p) + ")";
  return print_pred(p);
}

std::string print_pred(const Predicate& p) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comparison>) {
          return print_expr(n.lhs) + " " + std::string(cmp_op_name(n.op)) + " " + print_expr(n.rhs);
        } else if constexpr (std::is_same_v<T, InList>) {
          return print_expr(n.operand) + " IN (" + print_list(n.items) + ")";
        } else if constexpr (std::is_same_v<T, AnyEq>) {
          return print_expr(n.literal) + " = ANY (" + print_expr(n.column) + ")";
        } else if constexpr (std::is_same_v<T, ArrayContains>) {
          return print_expr(n.column) + " @> ARRAY[" + print_list(n.items) + "]";
        } else if constexpr (std::is_same_v<T, ClassifyMembership>) {
          if (n.array) return quote_string(n.literal) + " = ANY (" + print_expr(n.column) + ")";
          return print_expr(n.column) + " = " + quote_string(n.literal);
        } else if constexpr (std::is_same_v<T, AndPred>) {
          std::string out;
          for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i) out += " AND ";
            out += print_child(n.children[i], true);
          }
          return out;
        } else if constexpr (std::is_same_v<T, OrPred>) {
          std::string out;
          for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i) out += " OR ";
            out += print_child(n.children[i], false);
          }
          return out;
        } else {
          return "NOT (" + print_pred(*n.child) + ")";
        }
      },
      p.node);
}

}  // namespace

bool is_reserved_word(const std::string& lower) { return reserved_words().count(lower) > 0; }

std::string quote_identifier(const std::string& name) {
  if (!needs_quotes(name)) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string quote_string(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string print(const Expr& expr) { return print_expr(expr); }
std::string print(const Predicate& pred) { return print_pred(pred); }

std::string print(const QueryAst& ast) {
  std::string out = "SELECT ";
  for (std::size_t i = 0; i < ast.select.size(); ++i) {
    if (i) out += ", ";
    const auto& item = ast.select[i];
    if (item.star) {
      out += item.star_qualifier.empty() ? "*" : quote_identifier(item.star_qualifier) + ".*";
      continue;
    }
    out += print_expr(*item.expr);
    if (!item.alias.empty()) out += " AS " + quote_identifier(item.alias);
  }
  if (!ast.from.empty()) out += " FROM ";
  for (std::size_t i = 0; i < ast.from.size(); ++i) {
    if (i) out += ", ";
    const auto& f = ast.from[i];
    if (f.is_unnest()) out += "unnest(" + print_expr(*f.unnest_arg) + ")";
    else out += quote_identifier(f.table);
    if (!f.alias.empty()) out += " AS " + quote_identifier(f.alias);
  }
  if (ast.where) out += " WHERE " + print_pred(*ast.where);
  if (!ast.order_by.empty()) {
    out += " ORDER BY ";
    for (std::size_t i = 0; i < ast.order_by.size(); ++i) {
      if (i) out += ", ";
      out += print_expr(ast.order_by[i].expr) + (ast.order_by[i].desc ? " DESC" : "");
    }
  }
  if (ast.limit) out += " LIMIT " + std::to_string(*ast.limit);
  return out + ";";
}

}  // namespace suql
