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

#include "suql/binder.hpp"

#include <set>

#include "suql/error.hpp"
#include "suql/strings.hpp"

namespace suql {

namespace {

[[noreturn]] void bind_error(const std::string& msg) { throw Error(ErrorCode::kBind, msg); }

enum class Category { kNull, kNumeric, kTextual, kBoolean, kDate, kTime, kInterval, kArray };

Category category(const SemanticType& t) {
  if (t.array) return Category::kArray;
  switch (t.kind) {
    case TypeKind::kNull: return Category::kNull;
    case TypeKind::kInt:
    case TypeKind::kFloat:
    case TypeKind::kNumeric: return Category::kNumeric;
    case TypeKind::kText:
    case TypeKind::kFreeText:
    case TypeKind::kEnum: return Category::kTextual;
    case TypeKind::kBoolean: return Category::kBoolean;
    case TypeKind::kDate: return Category::kDate;
    case TypeKind::kTime: return Category::kTime;
    case TypeKind::kInterval: return Category::kInterval;
  }
  return Category::kNull;
}

SemanticType literal_type(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kInt: return SemanticType::integer();
    case ValueKind::kFloat: return SemanticType::floating();
    case ValueKind::kBool: return SemanticType::boolean();
    case ValueKind::kText: return SemanticType::text();
    case ValueKind::kDate: return SemanticType::date();
    case ValueKind::kTime: return SemanticType::time();
    case ValueKind::kInterval: return SemanticType::interval();
    default: return SemanticType::null_type();
  }
}

class Binder {
 public:
  explicit Binder(const Catalog& catalog) : catalog_(catalog) {}

  BoundQuery run(QueryAst ast) {
    BoundQuery out;
    bind_from(ast, out);
    sources_ = &out.sources;

    std::vector<SelectItem> expanded;
    for (auto& item : ast.select) {
      if (!item.star) {
        expanded.push_back(std::move(item));
        continue;
      }
      bool matched = false;
      for (std::size_t s = 0; s < out.sources.size(); ++s) {
        const BoundSource& src = out.sources[s];
        if (!item.star_qualifier.empty() && src.alias != item.star_qualifier) continue;
        matched = true;
        if (src.is_unnest()) {
          expanded.push_back(SelectItem{false, {}, make_column(src.alias, src.alias), src.alias});
          continue;
        }
        for (const auto& col : src.table->schema().columns())
          expanded.push_back(SelectItem{false, {}, make_column(col.name, src.alias), col.name});
      }
      if (!matched) bind_error("unknown table alias '" + item.star_qualifier + "' in " + item.star_qualifier + ".*");
    }
    ast.select = std::move(expanded);

    for (auto& item : ast.select) {
      bind_expr(*item.expr);
      if (contains_aggregate(*item.expr)) out.aggregate = true;
    }
    if (out.aggregate) {
      for (const auto& item : ast.select)
        if (!aggregate_only(*item.expr))
          bind_error("column '" + print(*item.expr) + "' must appear inside an aggregate function");
      if (!ast.order_by.empty()) bind_error("ORDER BY is not supported together with aggregates");
    }
    for (const auto& item : ast.select) {
      out.outputs.push_back(OutputColumn{item.alias.empty() ? output_name(*item.expr) : item.alias, item.expr->type});
      if (item.expr->type.array && contains_answer(*item.expr))
        bind_error("answer() result cannot be an array");
    }

    if (ast.where) {
      bool has_agg = false;
      visit_exprs(*ast.where, [&](const Expr& e) { has_agg = has_agg || e.as<Aggregate>(); });
      if (has_agg) bind_error("aggregate functions are not allowed in WHERE");
      bind_pred(*ast.where);
    }

    for (auto& ord : ast.order_by) {
      if (const auto* ref = ord.expr.as<ColumnRef>(); ref && ref->qualifier.empty() && !resolves(ref->name)) {
        for (const auto& item : ast.select) {
          if (!item.alias.empty() && item.alias == ref->name) {
            ord.expr = *item.expr;
            break;
          }
        }
      }
      bind_expr(ord.expr);
      if (contains_aggregate(ord.expr)) bind_error("aggregate functions are not allowed in ORDER BY");
      if (ord.expr.type.array) bind_error("cannot ORDER BY an array expression");
    }
    out.ast = std::move(ast);
    return out;
  }

 private:
  void bind_from(QueryAst& ast, BoundQuery& out) {
    std::set<std::string> aliases;
    for (auto& item : ast.from) {
      BoundSource src;
      if (item.is_unnest()) {
        sources_ = &out.sources;
        Expr& arg = *item.unnest_arg;
        bind_expr(arg);
        const auto* ref = arg.as<ColumnRef>();
        if (!ref || ref->column < 0) bind_error("unnest() argument must be an array column of an earlier FROM item");
        if (!arg.type.array) bind_error("unnest() argument '" + ref->name + "' is not an array");
        src.alias = item.alias;
        src.unnest_of = ref->source;
        src.unnest_column = ref->column;
        src.element_type = arg.type.element();
      } else {
        src.table = catalog_.get(item.table);
        src.alias = item.alias.empty() ? item.table : item.alias;
      }
      if (!aliases.insert(src.alias).second) bind_error("table alias '" + src.alias + "' specified more than once");
      out.sources.push_back(std::move(src));
    }
  }

  bool resolves(const std::string& name) const {
    for (const auto& src : *sources_) {
      if (src.is_unnest() ? src.alias == name : src.table->schema().find(name).has_value()) return true;
    }
    return false;
  }

  void bind_column(Expr& e, ColumnRef& ref) {
    int found_source = -1, found_column = -1;
    SemanticType type;
    int matches = 0;
    for (std::size_t s = 0; s < sources_->size(); ++s) {
      const BoundSource& src = (*sources_)[s];
      if (!ref.qualifier.empty() && src.alias != ref.qualifier) continue;
      if (src.is_unnest()) {
        if (src.alias == ref.name) {
          ++matches;
          found_source = static_cast<int>(s);
          found_column = -1;
          type = src.element_type;
        }
        continue;
      }
      if (auto idx = src.table->schema().find(ref.name)) {
        ++matches;
        found_source = static_cast<int>(s);
        found_column = static_cast<int>(*idx);
        type = src.table->schema().column(*idx).type;
      }
    }
    std::string shown = ref.qualifier.empty() ? quote_identifier(ref.name)
                                              : quote_identifier(ref.qualifier) + "." + quote_identifier(ref.name);
    if (matches == 0) {
      if (!ref.qualifier.empty()) {
        bool alias_known = false;
        for (const auto& src : *sources_) alias_known = alias_known || src.alias == ref.qualifier;
        if (!alias_known) bind_error("unknown table alias '" + ref.qualifier + "'");
      }
      bind_error("unknown column " + shown);
    }
    if (matches > 1) bind_error("column reference " + shown + " is ambiguous");
    ref.source = found_source;
    ref.column = found_column;
    e.type = type;
  }

  void bind_expr(Expr& e) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ColumnRef>) {
            bind_column(e, n);
          } else if constexpr (std::is_same_v<T, Literal>) {
            e.type = literal_type(n.value);
          } else if constexpr (std::is_same_v<T, AnswerCall> || std::is_same_v<T, SummaryCall>) {
            bind_expr(*n.target);
            if (!n.target->type.is_free_text())
              bind_error(std::string(std::is_same_v<T, AnswerCall> ? "answer" : "summary") + "() target '" +
                         print(*n.target) + "' has type " + n.target->type.to_string() +
                         "; only FREE_TEXT or FREE_TEXT[] columns are allowed");
            e.type = SemanticType::text();
          } else if constexpr (std::is_same_v<T, CastExpr>) {
            bind_expr(*n.operand);
            if (n.operand->type.array && !n.target.array)
              bind_error("cannot cast array expression '" + print(*n.operand) + "' to " + n.target.to_string());
            e.type = n.target;
          } else if constexpr (std::is_same_v<T, Aggregate>) {
            if (!n.arg) {
              e.type = SemanticType::integer();
              return;
            }
            bind_expr(**n.arg);
            const SemanticType& at = (*n.arg)->type;
            if (at.array) bind_error(std::string(agg_fn_name(n.fn)) + "() over an array expression");
            switch (n.fn) {
              case AggFn::kCount: e.type = SemanticType::integer(); break;
              case AggFn::kMax:
              case AggFn::kMin: e.type = at.kind == TypeKind::kEnum ? SemanticType::text() : at; break;
              case AggFn::kSum:
                if (category(at) == Category::kInterval) {
                  e.type = SemanticType::interval();
                  break;
                }
                if (category(at) != Category::kNumeric) bind_error("SUM() needs a numeric argument, got " + at.to_string());
                e.type = at.kind == TypeKind::kInt ? SemanticType::integer() : SemanticType::floating();
                break;
              case AggFn::kAvg:
                if (category(at) != Category::kNumeric) bind_error("AVG() needs a numeric argument, got " + at.to_string());
                e.type = SemanticType::floating();
                break;
            }
          } else if constexpr (std::is_same_v<T, Arith>) {
            bind_expr(*n.lhs);
            bind_expr(*n.rhs);
            e.type = arith_type(n);
          }
        },
        e.node);
  }

  SemanticType arith_type(Arith& n) {
    const SemanticType& l = n.lhs->type;
    const SemanticType& r = n.rhs->type;
    Category lc = category(l), rc = category(r);
    std::string op = n.op == ArithOp::kAdd ? "+" : "-";
    if (lc == Category::kNull || rc == Category::kNull) return lc == Category::kNull ? r : l;
    if (lc == Category::kNumeric && rc == Category::kNumeric)
      return l.kind == TypeKind::kInt && r.kind == TypeKind::kInt ? SemanticType::integer() : SemanticType::floating();
    if (lc == Category::kInterval && rc == Category::kInterval) return SemanticType::interval();
    if (lc == Category::kTime && rc == Category::kTime && n.op == ArithOp::kSub) return SemanticType::interval();
    if (lc == Category::kDate && rc == Category::kDate && n.op == ArithOp::kSub) return SemanticType::integer();
    if (lc == Category::kDate && r.kind == TypeKind::kInt) return SemanticType::date();
    bind_error("operator " + op + " is not defined for " + l.to_string() + " and " + r.to_string());
  }

  /// True when every column reference sits inside an aggregate.
  static bool aggregate_only(const Expr& e) {
    if (e.as<Aggregate>() || e.as<Literal>()) return true;
    if (e.as<ColumnRef>()) return false;
    bool ok = true;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, AnswerCall> || std::is_same_v<T, SummaryCall>) ok = aggregate_only(*n.target);
          else if constexpr (std::is_same_v<T, CastExpr>) ok = aggregate_only(*n.operand);
          else if constexpr (std::is_same_v<T, Arith>) ok = aggregate_only(*n.lhs) && aggregate_only(*n.rhs);
        },
        e.node);
    return ok;
  }

  /// Coerces a literal to `target` so comparisons are kind-homogeneous at
  /// run time (`"Event year" IN ('2016')` against INT).
  static void coerce_literal(Expr& lit, const SemanticType& target) {
    auto* l = lit.as<Literal>();
    if (!l || l->value.is_null()) return;
    SemanticType t = target.element();
    Category want = category(t);
    Category have = category(lit.type);
    if (want == have || want == Category::kNull) return;
    try {
      if (want == Category::kNumeric) {
        if (l->value.kind() == ValueKind::kText) {
          try {
            l->value = cast_value(l->value, SemanticType::integer());
          } catch (const Error&) {
            l->value = cast_value(l->value, SemanticType::floating());
          }
        }
      } else if (want == Category::kTextual) {
        return;  // leave non-text literals alone; the category check reports them
      } else if (l->value.kind() == ValueKind::kText) {
        l->value = cast_value(l->value, t.kind == TypeKind::kEnum ? SemanticType::text() : t);
      } else {
        return;
      }
    } catch (const Error&) {
      bind_error("cannot coerce literal " + print(lit) + " to " + t.to_string());
    }
    lit.type = literal_type(l->value);
  }

  static void check_comparable(const Expr& a, const Expr& b, const std::string& context) {
    Category ca = category(a.type), cb = category(b.type);
    if (ca == Category::kArray || cb == Category::kArray)
      bind_error(context + ": cannot compare array expression (use = ANY(...) or @>)");
    if (ca == Category::kNull || cb == Category::kNull || ca == cb) return;
    bind_error(context + ": type mismatch between " + a.type.to_string() + " and " + b.type.to_string());
  }

  void bind_pred(Predicate& p) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Comparison>) {
            bind_expr(n.lhs);
            bind_expr(n.rhs);
            coerce_literal(n.rhs, n.lhs.type);
            coerce_literal(n.lhs, n.rhs.type);
            std::string ctx = "in '" + print(p) + "'";
            check_comparable(n.lhs, n.rhs, ctx);
            if (n.op == CmpOp::kILike &&
                (category(n.lhs.type) != Category::kTextual || category(n.rhs.type) != Category::kTextual))
              bind_error(ctx + ": ILIKE requires text operands");
          } else if constexpr (std::is_same_v<T, InList>) {
            bind_expr(n.operand);
            for (auto& item : n.items) {
              if (!std::holds_alternative<Literal>(item.node)) bind_error("IN list items must be literals");
              bind_expr(item);
              coerce_literal(item, n.operand.type);
              check_comparable(n.operand, item, "in IN list");
            }
          } else if constexpr (std::is_same_v<T, AnyEq>) {
            if (!std::holds_alternative<Literal>(n.literal.node)) bind_error("left side of = ANY(...) must be a literal");
            bind_expr(n.literal);
            bind_expr(n.column);
            if (!n.column.type.array) bind_error("ANY(...) needs an array column, got " + n.column.type.to_string());
            coerce_literal(n.literal, n.column.type);
            check_comparable(n.literal, Expr{Literal{}, n.column.type.element()}, "in = ANY(...)");
          } else if constexpr (std::is_same_v<T, ArrayContains>) {
            bind_expr(n.column);
            if (!n.column.type.array) bind_error("@> needs an array column, got " + n.column.type.to_string());
            Expr elem{Literal{}, n.column.type.element()};
            for (auto& item : n.items) {
              if (!std::holds_alternative<Literal>(item.node)) bind_error("ARRAY[...] items must be literals");
              bind_expr(item);
              coerce_literal(item, n.column.type);
              check_comparable(item, elem, "in @> ARRAY[...]");
            }
          } else if constexpr (std::is_same_v<T, ClassifyMembership>) {
            bind_expr(n.column);
          } else if constexpr (std::is_same_v<T, AndPred> || std::is_same_v<T, OrPred>) {
            for (auto& c : n.children) bind_pred(c);
          } else if constexpr (std::is_same_v<T, NotPred>) {
            bind_pred(*n.child);
          }
        },
        p.node);
  }

  const Catalog& catalog_;
  std::vector<BoundSource>* sources_ = nullptr;
};

}  // namespace

std::string output_name(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ColumnRef>) return n.name;
        else if constexpr (std::is_same_v<T, AnswerCall>) return "answer";
        else if constexpr (std::is_same_v<T, SummaryCall>) return "summary";
        else if constexpr (std::is_same_v<T, CastExpr>) return output_name(*n.operand);
        else if constexpr (std::is_same_v<T, Aggregate>) return to_lower(std::string(agg_fn_name(n.fn)));
        else return "?column?";
      },
      e.node);
}

BoundQuery bind(QueryAst ast, const Catalog& catalog) { return Binder(catalog).run(std::move(ast)); }

}  // namespace suql
