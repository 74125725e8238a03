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

#include "naive_eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>

namespace suql::testing {

namespace {

struct Scope {
  const Table* table;
};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::size_t column_index(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.schema().size(); ++i)
    if (lower(t.schema().column(i).name) == lower(name)) return i;
  throw std::runtime_error("naive: unknown column " + name);
}

std::string iso(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

// -1 / 0 / 1, or nullopt when the pair is not comparable (Null included).
std::optional<int> cmp(const Value& a, const Value& b) {
  auto sign = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
  if (a.is_null() || b.is_null()) return std::nullopt;
  bool an = a.kind() == ValueKind::kInt || a.kind() == ValueKind::kFloat;
  bool bn = b.kind() == ValueKind::kInt || b.kind() == ValueKind::kFloat;
  if (an && bn) {
    double x = a.kind() == ValueKind::kInt ? static_cast<double>(a.as_int()) : a.as_float();
    double y = b.kind() == ValueKind::kInt ? static_cast<double>(b.as_int()) : b.as_float();
    return sign(x, y);
  }
  if (a.kind() == ValueKind::kDate && b.kind() == ValueKind::kText) return sign(iso(a.as_date()), b.as_text());
  if (a.kind() == ValueKind::kText && b.kind() == ValueKind::kDate) return sign(a.as_text(), iso(b.as_date()));
  if (a.kind() == ValueKind::kDate && b.kind() == ValueKind::kDate) return sign(iso(a.as_date()), iso(b.as_date()));
  if (a.kind() == ValueKind::kText && b.kind() == ValueKind::kText) return sign(a.as_text(), b.as_text());
  if (a.kind() == ValueKind::kBool && b.kind() == ValueKind::kBool) return sign(a.as_bool(), b.as_bool());
  return std::nullopt;
}

bool like(const std::string& s, std::size_t i, const std::string& p, std::size_t j) {
  if (j == p.size()) return i == s.size();
  if (p[j] == '%') {
    for (std::size_t k = i; k <= s.size(); ++k)
      if (like(s, k, p, j + 1)) return true;
    return false;
  }
  if (i == s.size()) return false;
  bool same = p[j] == '_' || std::tolower(static_cast<unsigned char>(s[i])) == std::tolower(static_cast<unsigned char>(p[j]));
  return same && like(s, i + 1, p, j + 1);
}

Value value_of(const Expr& e, const Table& t, const Row& row) {
  if (const auto* ref = e.as<ColumnRef>()) return row[column_index(t, ref->name)];
  if (const auto* lit = e.as<Literal>()) return lit->value;
  throw std::runtime_error("naive: unsupported expression");
}

bool test(const Predicate& p, const Table& t, const Row& row) {
  if (const auto* a = p.as<AndPred>())
    return std::all_of(a->children.begin(), a->children.end(), [&](const Predicate& c) { return test(c, t, row); });
  if (const auto* o = p.as<OrPred>())
    return std::any_of(o->children.begin(), o->children.end(), [&](const Predicate& c) { return test(c, t, row); });
  if (const auto* n = p.as<NotPred>()) return !test(*n->child, t, row);
  if (const auto* c = p.as<Comparison>()) {
    Value l = value_of(c->lhs, t, row), r = value_of(c->rhs, t, row);
    if (c->op == CmpOp::kILike)
      return l.kind() == ValueKind::kText && r.kind() == ValueKind::kText && like(l.as_text(), 0, r.as_text(), 0);
    auto o = cmp(l, r);
    if (!o) return false;
    switch (c->op) {
      case CmpOp::kEq: return *o == 0;
      case CmpOp::kNe: return *o != 0;
      case CmpOp::kLt: return *o < 0;
      case CmpOp::kLe: return *o <= 0;
      case CmpOp::kGt: return *o > 0;
      case CmpOp::kGe: return *o >= 0;
      default: return false;
    }
  }
  if (const auto* in = p.as<InList>()) {
    Value v = value_of(in->operand, t, row);
    for (const auto& item : in->items) {
      auto o = cmp(v, value_of(item, t, row));
      if (o && *o == 0) return true;
    }
    return false;
  }
  if (const auto* any = p.as<AnyEq>()) {
    Value lit = value_of(any->literal, t, row), arr = value_of(any->column, t, row);
    if (arr.kind() != ValueKind::kArray) return false;
    for (const auto& e : arr.as_array())
      if (auto o = cmp(lit, e); o && *o == 0) return true;
    return false;
  }
  if (const auto* has = p.as<ArrayContains>()) {
    Value arr = value_of(has->column, t, row);
    if (arr.kind() != ValueKind::kArray) return false;
    for (const auto& item : has->items) {
      Value want = value_of(item, t, row);
      bool found = false;
      for (const auto& e : arr.as_array())
        if (auto o = cmp(want, e); o && *o == 0) found = true;
      if (!found) return false;
    }
    return true;
  }
  throw std::runtime_error("naive: unsupported predicate");
}

Value aggregate(const Aggregate& agg, const Table& t, const std::vector<const Row*>& rows) {
  if (!agg.arg) return Value::integer(static_cast<std::int64_t>(rows.size()));
  std::vector<Value> vals;
  for (const Row* r : rows) {
    Value v = value_of(**agg.arg, t, *r);
    if (!v.is_null()) vals.push_back(v);
  }
  if (agg.fn == AggFn::kCount) return Value::integer(static_cast<std::int64_t>(vals.size()));
  if (vals.empty()) return Value::null();
  switch (agg.fn) {
    case AggFn::kMax:
    case AggFn::kMin: {
      Value best = vals[0];
      for (const auto& v : vals) {
        int o = *cmp(v, best);
        if (agg.fn == AggFn::kMax ? o > 0 : o < 0) best = v;
      }
      return best;
    }
    case AggFn::kSum: {
      if (vals[0].kind() == ValueKind::kInt) {
        std::int64_t s = 0;
        for (const auto& v : vals) s += v.as_int();
        return Value::integer(s);
      }
      double s = 0;
      for (const auto& v : vals) s += v.as_float();
      return Value::floating(s);
    }
    case AggFn::kAvg: {
      double s = 0;
      for (const auto& v : vals) s += v.kind() == ValueKind::kInt ? static_cast<double>(v.as_int()) : v.as_float();
      return Value::floating(s / static_cast<double>(vals.size()));
    }
    default: return Value::null();
  }
}

std::string cell_key(const Value& v) {
  return std::to_string(static_cast<int>(v.kind())) + ":" + v.to_string();
}

std::string row_key(const Row& r) {
  std::string k;
  for (const auto& v : r) k += cell_key(v) + "\x1f";
  return k;
}

}  // namespace

std::vector<Row> naive_execute(const QueryAst& query, const Catalog& catalog) {
  if (query.from.size() != 1 || query.from[0].is_unnest()) throw std::runtime_error("naive: single table only");
  TablePtr tp = catalog.get(query.from[0].table);
  const Table& t = *tp;

  std::vector<const Row*> kept;
  for (const auto& row : t.rows())
    if (!query.where || test(*query.where, t, row)) kept.push_back(&row);

  bool is_agg = false;
  for (const auto& item : query.select)
    if (item.expr && item.expr->as<Aggregate>()) is_agg = true;
  if (is_agg) {
    Row out;
    for (const auto& item : query.select) out.push_back(aggregate(*item.expr->as<Aggregate>(), t, kept));
    return {out};
  }

  if (!query.order_by.empty()) {
    std::stable_sort(kept.begin(), kept.end(), [&](const Row* a, const Row* b) {
      for (const auto& o : query.order_by) {
        Value x = value_of(o.expr, t, *a), y = value_of(o.expr, t, *b);
        if (x.is_null() && y.is_null()) continue;
        if (x.is_null()) return false;  // Nulls last either way
        if (y.is_null()) return true;
        int c = *cmp(x, y);
        if (c != 0) return o.desc ? c > 0 : c < 0;
      }
      return false;
    });
  }
  if (query.limit && kept.size() > static_cast<std::size_t>(*query.limit)) kept.resize(static_cast<std::size_t>(*query.limit));

  std::vector<Row> out;
  for (const Row* r : kept) {
    Row projected;
    for (const auto& item : query.select) {
      if (item.star) {
        projected.insert(projected.end(), r->begin(), r->end());
      } else {
        projected.push_back(value_of(*item.expr, t, *r));
      }
    }
    out.push_back(std::move(projected));
  }
  return out;
}

bool multiset_equal(const std::vector<Row>& a, const std::vector<Row>& b) {
  if (a.size() != b.size()) return false;
  std::map<std::string, int> counts;
  for (const auto& r : a) ++counts[row_key(r)];
  for (const auto& r : b)
    if (--counts[row_key(r)] < 0) return false;
  return true;
}

std::string describe_rows(const std::vector<Row>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += "  (";
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? ", " : "") + cell_key(r[i]);
    out += ")\n";
  }
  return out.empty() ? "  <empty>\n" : out;
}

}  // namespace suql::testing
