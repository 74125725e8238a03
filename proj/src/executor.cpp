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

#include "suql/executor.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "suql/error.hpp"
#include "suql/strings.hpp"

namespace suql {

Date civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

nlohmann::ordered_json ExecStats::to_json() const {
  nlohmann::ordered_json j;
  j["rows_scanned"] = rows_scanned;
  j["answer_calls"] = answer_calls;
  j["classify_calls"] = classify_calls;
  j["retrieval_pruned"] = retrieval_pruned;
  j["cast_errors"] = cast_errors;
  j["warnings"] = warnings;
  return j;
}

namespace {

using Tuple = std::vector<std::size_t>;

CmpOp flip(CmpOp op) {
  switch (op) {
    case CmpOp::kLt: return CmpOp::kGt;
    case CmpOp::kLe: return CmpOp::kGe;
    case CmpOp::kGt: return CmpOp::kLt;
    case CmpOp::kGe: return CmpOp::kLe;
    default: return op;
  }
}

bool holds(std::strong_ordering ord, CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return ord == 0;
    case CmpOp::kNe: return ord != 0;
    case CmpOp::kLt: return ord < 0;
    case CmpOp::kLe: return ord <= 0;
    case CmpOp::kGt: return ord > 0;
    case CmpOp::kGe: return ord >= 0;
    case CmpOp::kILike: return false;
  }
  return false;
}

std::vector<std::string> documents_of(const Value& v) {
  std::vector<std::string> docs;
  if (v.is_null()) return docs;
  if (v.kind() == ValueKind::kArray) {
    for (const auto& e : v.as_array())
      if (!e.is_null()) docs.push_back(e.to_string());
  } else {
    docs.push_back(v.to_string());
  }
  return docs;
}

Value arith(ArithOp op, const Value& l, const Value& r) {
  if (l.is_null() || r.is_null()) return Value::null();
  bool sub = op == ArithOp::kSub;
  if (l.kind() == ValueKind::kInt && r.kind() == ValueKind::kInt)
    return Value::integer(sub ? l.as_int() - r.as_int() : l.as_int() + r.as_int());
  if (l.is_numeric() && r.is_numeric())
    return Value::floating(sub ? l.as_number() - r.as_number() : l.as_number() + r.as_number());
  if (l.kind() == ValueKind::kInterval && r.kind() == ValueKind::kInterval)
    return Value::interval(Interval{sub ? l.as_interval().seconds - r.as_interval().seconds
                                        : l.as_interval().seconds + r.as_interval().seconds});
  if (l.kind() == ValueKind::kDate && r.kind() == ValueKind::kDate && sub)
    return Value::integer(days_from_civil(l.as_date()) - days_from_civil(r.as_date()));
  if (l.kind() == ValueKind::kDate && r.kind() == ValueKind::kInt) {
    std::int64_t d = days_from_civil(l.as_date()) + (sub ? -r.as_int() : r.as_int());
    return Value::date(civil_from_days(d));
  }
  if (l.kind() == ValueKind::kTime && r.kind() == ValueKind::kTime && sub)
    return Value::interval(Interval{static_cast<std::int64_t>(l.as_time().seconds) - r.as_time().seconds});
  throw Error(ErrorCode::kRuntime, "cannot apply " + std::string(sub ? "-" : "+") + " to " + l.to_string() +
                                       " and " + r.to_string());
}

class Run {
 public:
  Run(const PlanTree& plan, ExecContext& ctx) : plan_(plan), q_(plan.query), ctx_(ctx) {}

  ResultSet go() {
    ResultSet rs;
    rs.columns = q_.outputs;
    build_shortlists(rs.stats);

    std::vector<Tuple> tuples;
    Tuple cur(q_.sources.size(), 0);
    enumerate(0, cur, tuples);

    std::size_t limit = plan_.lazy_limit ? static_cast<std::size_t>(*q_.ast.limit)
                                         : std::numeric_limits<std::size_t>::max();
    std::vector<Tuple> accepted;
    std::size_t scanned = 0;
    std::size_t batch = std::max<std::size_t>(1, ctx_.parallelism);
    for (std::size_t start = 0; start < tuples.size() && accepted.size() < limit; start += batch) {
      std::size_t end = std::min(tuples.size(), start + batch);
      std::vector<char> verdict(end - start, 0);
      if (end - start == 1) {
        verdict[0] = accept(tuples[start]);
      } else {
        std::vector<std::thread> workers;
        std::exception_ptr failure;
        std::mutex failure_mu;
        for (std::size_t i = start; i < end; ++i) {
          workers.emplace_back([&, i] {
            try {
              verdict[i - start] = accept(tuples[i]);
            } catch (...) {
              std::lock_guard lk(failure_mu);
              if (!failure) failure = std::current_exception();
            }
          });
        }
        for (auto& w : workers) w.join();
        if (failure) std::rethrow_exception(failure);
      }
      scanned += end - start;
      for (std::size_t i = start; i < end && accepted.size() < limit; ++i)
        if (verdict[i - start]) accepted.push_back(tuples[i]);
    }
    rs.stats.rows_scanned = scanned;

    if (q_.aggregate) {
      Row row;
      for (const auto& item : q_.ast.select) row.push_back(project_safely([&] { return eval_aggregate(*item.expr, accepted); }));
      rs.rows.push_back(std::move(row));
    } else {
      if (!q_.ast.order_by.empty()) sort_tuples(accepted);
      if (q_.ast.limit && accepted.size() > static_cast<std::size_t>(*q_.ast.limit))
        accepted.resize(static_cast<std::size_t>(*q_.ast.limit));
      for (const auto& t : accepted) {
        Row row;
        for (const auto& item : q_.ast.select) row.push_back(project_safely([&] { return eval(*item.expr, t); }));
        rs.rows.push_back(std::move(row));
      }
    }
    rs.stats.answer_calls = answer_calls_.load();
    rs.stats.classify_calls = classify_calls_.load();
    rs.stats.cast_errors = cast_errors_.load();
    for (auto& w : warnings_) rs.stats.warnings.push_back(std::move(w));
    for (auto& w : ctx_.runtime.take_warnings()) rs.stats.warnings.push_back(std::move(w));
    return rs;
  }

 private:
  // --- scanning -----------------------------------------------------------------

  const Value& base_cell(std::size_t source, std::size_t column, const Tuple& t) const {
    return q_.sources[source].table->row(t[source])[column];
  }

  /// Number of elements an unnest source yields for the current outer rows.
  std::size_t unnest_size(const BoundSource& src, const Tuple& t) const {
    const Value& cell = base_cell(static_cast<std::size_t>(src.unnest_of), static_cast<std::size_t>(src.unnest_column), t);
    return cell.kind() == ValueKind::kArray ? cell.as_array().size() : 0;
  }

  void enumerate(std::size_t depth, Tuple& cur, std::vector<Tuple>& out) const {
    if (depth == q_.sources.size()) {
      out.push_back(cur);
      return;
    }
    const BoundSource& src = q_.sources[depth];
    std::size_t n = src.is_unnest() ? unnest_size(src, cur) : src.table->size();
    for (std::size_t i = 0; i < n; ++i) {
      cur[depth] = i;
      enumerate(depth + 1, cur, out);
    }
  }

  Value cell(const ColumnRef& ref, const Tuple& t) const {
    auto s = static_cast<std::size_t>(ref.source);
    const BoundSource& src = q_.sources[s];
    if (!src.is_unnest()) return base_cell(s, static_cast<std::size_t>(ref.column), t);
    const Value& arr = base_cell(static_cast<std::size_t>(src.unnest_of), static_cast<std::size_t>(src.unnest_column), t);
    return arr.as_array().at(t[s]);
  }

  /// Identifies the rows an expression reads, for memo keys.
  std::string row_key(const Expr& e, const Tuple& t) const {
    std::string key;
    visit_exprs(e, [&](const Expr& x) {
      if (const auto* ref = x.as<ColumnRef>()) {
        auto s = static_cast<std::size_t>(ref->source);
        key += std::to_string(s) + ":" + std::to_string(t[s]) + ":" + std::to_string(ref->column);
        if (q_.sources[s].is_unnest()) key += "@" + std::to_string(t[static_cast<std::size_t>(q_.sources[s].unnest_of)]);
        key += ";";
      }
    });
    return key + print(e);
  }

  // --- retrieval ---------------------------------------------------------------

  void build_shortlists(ExecStats& stats) {
    shortlists_.resize(plan_.dnf.size());
    for (std::size_t i = 0; i < plan_.dnf.size(); ++i) {
      const AndList& conj = plan_.dnf[i];
      if (!conj.prune) continue;
      const Table& table = *q_.sources.front().table;
      std::vector<std::size_t> candidates;
      for (std::size_t r = 0; r < table.size(); ++r) {
        Tuple t{r};
        bool ok = true;
        for (const auto& atom : conj.atoms) {
          if (!conj.prune->prefilter || atom.cost == CostClass::kAnswer) continue;
          if (!eval_literal(atom, t)) {
            ok = false;
            break;
          }
        }
        if (ok) candidates.push_back(r);
      }
      std::vector<ScoredConstraint> constraints;
      for (const auto& c : conj.prune->constraints)
        constraints.push_back(ScoredConstraint{ctx_.indexes.embedder().embed(c.question),
                                               &ctx_.indexes.get(table, static_cast<std::size_t>(c.column))});
      auto best = top_k(constraints, conj.prune->k, candidates);
      shortlists_[i] = std::unordered_set<std::size_t>(best.begin(), best.end());
      stats.retrieval_pruned = true;
    }
  }

  // --- filtering -----------------------------------------------------------------

  bool accept(const Tuple& t) {
    if (plan_.fallback) return eval_tree(*plan_.fallback, t);
    if (plan_.dnf.empty()) return true;
    for (std::size_t i = 0; i < plan_.dnf.size(); ++i) {
      if (shortlists_[i] && !shortlists_[i]->count(t[0])) continue;
      bool all = true;
      for (const auto& atom : plan_.dnf[i].atoms) {
        if (!eval_literal(atom, t)) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  }

  bool eval_literal(const PlanAtom& atom, const Tuple& t) {
    bool v = eval_atom(atom.pred, t);
    return atom.negated ? !v : v;
  }

  bool eval_tree(const Predicate& p, const Tuple& t) {
    if (const auto* a = p.as<AndPred>()) {
      for (const auto& c : a->children)
        if (!eval_tree(c, t)) return false;
      return true;
    }
    if (const auto* o = p.as<OrPred>()) {
      for (const auto& c : o->children)
        if (eval_tree(c, t)) return true;
      return false;
    }
    if (const auto* n = p.as<NotPred>()) return !eval_tree(*n->child, t);
    return eval_atom(p, t);
  }

  /// Atom truth value. A cast failure makes the atom false (counted).
  bool eval_atom(const Predicate& p, const Tuple& t) {
    try {
      return eval_atom_raw(p, t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCast) throw;
      ++cast_errors_;
      warn("filter " + print(p) + ": " + e.what());
      return false;
    }
  }

  bool eval_atom_raw(const Predicate& p, const Tuple& t) {
    if (const auto* c = p.as<Comparison>()) {
      if (auto fast = answer_filter(*c, t)) return *fast;
      Value l = eval(c->lhs, t), r = eval(c->rhs, t);
      if (c->op == CmpOp::kILike) {
        if (l.kind() != ValueKind::kText || r.kind() != ValueKind::kText) return false;
        return ilike_match(l.as_text(), r.as_text());
      }
      auto ord = compare_values(l, r);
      return ord && holds(*ord, c->op);
    }
    if (const auto* in = p.as<InList>()) {
      Value v = eval(in->operand, t);
      for (const auto& item : in->items) {
        auto ord = compare_values(v, eval(item, t));
        if (ord && *ord == 0) return true;
      }
      return false;
    }
    if (const auto* any = p.as<AnyEq>()) {
      Value lit = eval(any->literal, t);
      Value arr = eval(any->column, t);
      if (arr.kind() != ValueKind::kArray) return false;
      for (const auto& e : arr.as_array()) {
        auto ord = compare_values(lit, e);
        if (ord && *ord == 0) return true;
      }
      return false;
    }
    if (const auto* has = p.as<ArrayContains>()) {
      Value arr = eval(has->column, t);
      if (arr.kind() != ValueKind::kArray) return false;
      for (const auto& item : has->items) {
        Value want = eval(item, t);
        bool found = false;
        for (const auto& e : arr.as_array()) {
          auto ord = compare_values(want, e);
          if (ord && *ord == 0) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
      return true;
    }
    if (const auto* cm = p.as<ClassifyMembership>()) {
      const auto& similar = classify(cm->literal, *cm->domain);
      Value v = eval(cm->column, t);
      auto member = [&](const Value& x) {
        if (x.kind() != ValueKind::kText) return false;
        return std::any_of(similar.begin(), similar.end(), [&](const std::string& s) { return iequals(s, x.as_text()); });
      };
      if (v.kind() == ValueKind::kArray) return std::any_of(v.as_array().begin(), v.as_array().end(), member);
      return member(v);
    }
    return eval_tree(p, t);
  }

  /// `answer(x, q) <op> 'literal'` goes to filter verification as a whole.
  std::optional<bool> answer_filter(const Comparison& c, const Tuple& t) {
    const AnswerCall* call = c.lhs.as<AnswerCall>();
    const Expr* other = &c.rhs;
    CmpOp op = c.op;
    if (!call) {
      if (c.op == CmpOp::kILike) return std::nullopt;
      call = c.rhs.as<AnswerCall>();
      other = &c.lhs;
      op = flip(c.op);
    }
    if (!call) return std::nullopt;
    const auto* lit = other->as<Literal>();
    if (!lit || lit->value.kind() != ValueKind::kText) return std::nullopt;
    std::string key = "F" + row_key(*call->target, t) + '\x1f' + call->question + '\x1f' +
                      std::string(cmp_op_name(op)) + '\x1f' + lit->value.as_text();
    {
      std::lock_guard lk(mu_);
      if (auto it = filter_memo_.find(key); it != filter_memo_.end()) return it->second;
    }
    auto docs = documents_of(eval(*call->target, t));
    ++answer_calls_;
    bool verdict = ctx_.runtime.filter_check(docs, call->question, op, lit->value.as_text());
    std::lock_guard lk(mu_);
    filter_memo_.emplace(key, verdict);
    return verdict;
  }

  const std::vector<std::string>& classify(const std::string& literal, const EnumDomain& domain) {
    std::string key = domain.name() + '\x1f' + literal;
    {
      std::lock_guard lk(mu_);
      if (auto it = classify_memo_.find(key); it != classify_memo_.end()) return it->second;
    }
    auto values = ctx_.runtime.classify(literal, domain);
    std::lock_guard lk(mu_);
    auto [it, inserted] = classify_memo_.emplace(key, std::move(values));
    if (inserted) ++classify_calls_;
    return it->second;
  }

  // --- expressions -----------------------------------------------------------------

  Value eval(const Expr& e, const Tuple& t, const std::string& hint = {}) {
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ColumnRef>) {
            return cell(n, t);
          } else if constexpr (std::is_same_v<T, Literal>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, AnswerCall>) {
            return answer(*n.target, n.question, hint, t);
          } else if constexpr (std::is_same_v<T, SummaryCall>) {
            return answer(*n.target, kSummaryQuestion, hint, t);
          } else if constexpr (std::is_same_v<T, CastExpr>) {
            return cast_value(eval(*n.operand, t, type_hint_for(n.target)), n.target);
          } else if constexpr (std::is_same_v<T, Arith>) {
            return arith(n.op, eval(*n.lhs, t), eval(*n.rhs, t));
          } else {
            throw Error(ErrorCode::kRuntime, "aggregate outside an aggregate query");
          }
        },
        e.node);
  }

  Value answer(const Expr& target, const std::string& question, const std::string& hint, const Tuple& t) {
    std::string key = "A" + row_key(target, t) + '\x1f' + question + '\x1f' + hint;
    {
      std::lock_guard lk(mu_);
      if (auto it = answer_memo_.find(key); it != answer_memo_.end()) return Value::text(it->second);
    }
    auto docs = documents_of(eval(target, t));
    ++answer_calls_;
    std::string text = ctx_.runtime.answer(docs, question, hint);
    std::lock_guard lk(mu_);
    answer_memo_.emplace(key, text);
    return Value::text(text);
  }

  template <class F>
  Value project_safely(F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCast) throw;
      ++cast_errors_;
      warn(std::string("projection value set to NULL: ") + e.what());
      return Value::null();
    }
  }

  Value eval_aggregate(const Expr& e, const std::vector<Tuple>& rows) {
    if (const auto* agg = e.as<Aggregate>()) return reduce(*agg, rows);
    if (const auto* lit = e.as<Literal>()) return lit->value;
    if (const auto* c = e.as<CastExpr>()) return cast_value(eval_aggregate(*c->operand, rows), c->target);
    if (const auto* a = e.as<Arith>()) return arith(a->op, eval_aggregate(*a->lhs, rows), eval_aggregate(*a->rhs, rows));
    if (const auto* call = e.as<AnswerCall>()) {
      Value v = eval_aggregate(*call->target, rows);
      ++answer_calls_;
      return Value::text(ctx_.runtime.answer(documents_of(v), call->question));
    }
    throw Error(ErrorCode::kRuntime, "unsupported expression in aggregate query: " + print(e));
  }

  Value reduce(const Aggregate& agg, const std::vector<Tuple>& rows) {
    if (!agg.arg) return Value::integer(static_cast<std::int64_t>(rows.size()));
    std::vector<Value> vals;
    for (const auto& t : rows) {
      Value v = project_safely([&] { return eval(**agg.arg, t); });
      if (!v.is_null()) vals.push_back(std::move(v));
    }
    switch (agg.fn) {
      case AggFn::kCount: return Value::integer(static_cast<std::int64_t>(vals.size()));
      case AggFn::kMax:
      case AggFn::kMin: {
        if (vals.empty()) return Value::null();
        Value best = vals.front();
        for (std::size_t i = 1; i < vals.size(); ++i) {
          auto ord = compare_values(vals[i], best);
          if (!ord) throw Error(ErrorCode::kRuntime, "incomparable values in " + std::string(agg_fn_name(agg.fn)));
          if (agg.fn == AggFn::kMax ? *ord > 0 : *ord < 0) best = vals[i];
        }
        return best;
      }
      case AggFn::kSum: {
        if (vals.empty()) return Value::null();
        Value acc = vals.front();
        for (std::size_t i = 1; i < vals.size(); ++i) acc = arith(ArithOp::kAdd, acc, vals[i]);
        return acc;
      }
      case AggFn::kAvg: {
        if (vals.empty()) return Value::null();
        double sum = 0;
        for (const auto& v : vals) sum += v.as_number();
        return Value::floating(sum / static_cast<double>(vals.size()));
      }
    }
    return Value::null();
  }

  void sort_tuples(std::vector<Tuple>& tuples) {
    const auto& order = q_.ast.order_by;
    std::vector<std::pair<std::vector<Value>, std::size_t>> keyed;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      std::vector<Value> keys;
      for (const auto& o : order) keys.push_back(project_safely([&] { return eval(o.expr, tuples[i]); }));
      keyed.emplace_back(std::move(keys), i);
    }
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
      for (std::size_t k = 0; k < order.size(); ++k) {
        const Value& x = a.first[k];
        const Value& y = b.first[k];
        if (x.is_null() || y.is_null()) {
          if (x.is_null() == y.is_null()) continue;
          return y.is_null();  // Nulls last
        }
        auto ord = compare_values(x, y);
        if (!ord) throw Error(ErrorCode::kRuntime, "ORDER BY keys " + x.to_string() + " and " + y.to_string() + " are not comparable");
        if (*ord == 0) continue;
        return order[k].desc ? *ord > 0 : *ord < 0;
      }
      return false;
    });
    std::vector<Tuple> sorted;
    for (const auto& [keys, idx] : keyed) sorted.push_back(tuples[idx]);
    tuples = std::move(sorted);
  }

  void warn(std::string w) {
    std::lock_guard lk(mu_);
    if (warnings_.size() < 50) warnings_.push_back(std::move(w));
  }

  const PlanTree& plan_;
  const BoundQuery& q_;
  ExecContext& ctx_;
  std::vector<std::optional<std::unordered_set<std::size_t>>> shortlists_;
  std::mutex mu_;
  std::unordered_map<std::string, bool> filter_memo_;
  std::unordered_map<std::string, std::string> answer_memo_;
  std::unordered_map<std::string, std::vector<std::string>> classify_memo_;
  std::atomic<std::size_t> answer_calls_{0};
  std::atomic<std::size_t> classify_calls_{0};
  std::atomic<std::size_t> cast_errors_{0};
  std::vector<std::string> warnings_;
};

}  // namespace

ResultSet execute(const PlanTree& plan, ExecContext& ctx) { return Run(plan, ctx).go(); }

nlohmann::ordered_json result_to_json(const ResultSet& rs) {
  nlohmann::ordered_json j;
  j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : rs.columns) j["columns"].push_back({{"name", c.name}, {"type", c.type.to_string()}});
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rs.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& v : row) r.push_back(nlohmann::ordered_json(value_to_json(v)));
    j["rows"].push_back(std::move(r));
  }
  j["stats"] = rs.stats.to_json();
  return j;
}

std::string format_table(const ResultSet& rs) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  for (const auto& c : rs.columns) width.push_back(c.name.size());
  for (const auto& row : rs.rows) {
    std::vector<std::string> r;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string s = row[i].is_null() ? "NULL" : row[i].to_string();
      std::replace(s.begin(), s.end(), '\n', ' ');
      if (s.size() > 80) s = s.substr(0, 77) + "...";
      width[i] = std::max(width[i], s.size());
      r.push_back(std::move(s));
    }
    cells.push_back(std::move(r));
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << " | ";
      os << r[i] << std::string(width[i] - r[i].size(), ' ');
    }
    os << '\n';
  };
  std::vector<std::string> header;
  for (const auto& c : rs.columns) header.push_back(c.name);
  emit(header);
  for (std::size_t i = 0; i < width.size(); ++i) os << (i ? "-+-" : "") << std::string(width[i], '-');
  os << '\n';
  for (const auto& r : cells) emit(r);
  os << "(" << rs.rows.size() << " row" << (rs.rows.size() == 1 ? "" : "s") << ")\n";
  return os.str();
}

}  // namespace suql
