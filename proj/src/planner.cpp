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

#include "suql/planner.hpp"

#include <algorithm>
#include <sstream>

#include "suql/error.hpp"
#include "suql/strings.hpp"

namespace suql {

std::string_view cost_class_name(CostClass c) {
  switch (c) {
    case CostClass::kStructured: return "STRUCTURED";
    case CostClass::kEnumOverload: return "ENUM_OVERLOAD";
    case CostClass::kAnswer: return "ANSWER";
  }
  return "?";
}

// --- desugar ------------------------------------------------------------------

namespace {

void desugar_in_place(Expr& e) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AnswerCall> || std::is_same_v<T, SummaryCall>) desugar_in_place(*n.target);
        else if constexpr (std::is_same_v<T, CastExpr>) desugar_in_place(*n.operand);
        else if constexpr (std::is_same_v<T, Aggregate>) {
          if (n.arg) desugar_in_place(**n.arg);
        } else if constexpr (std::is_same_v<T, Arith>) {
          desugar_in_place(*n.lhs);
          desugar_in_place(*n.rhs);
        }
      },
      e.node);
  if (auto* s = e.as<SummaryCall>()) {
    Expr target = *s->target;
    e.node = AnswerCall{Box<Expr>(std::move(target)), kSummaryQuestion};
  }
}

/// Applies `f` to every expression directly held by a predicate tree.
template <class F>
void for_each_top_expr(Predicate& p, F&& f) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comparison>) {
          f(n.lhs);
          f(n.rhs);
        } else if constexpr (std::is_same_v<T, InList>) {
          f(n.operand);
          for (auto& i : n.items) f(i);
        } else if constexpr (std::is_same_v<T, AnyEq>) {
          f(n.literal);
          f(n.column);
        } else if constexpr (std::is_same_v<T, ArrayContains>) {
          f(n.column);
          for (auto& i : n.items) f(i);
        } else if constexpr (std::is_same_v<T, ClassifyMembership>) {
          f(n.column);
        } else if constexpr (std::is_same_v<T, AndPred> || std::is_same_v<T, OrPred>) {
          for (auto& c : n.children) for_each_top_expr(c, f);
        } else if constexpr (std::is_same_v<T, NotPred>) {
          for_each_top_expr(*n.child, f);
        }
      },
      p.node);
}

}  // namespace

Expr desugar(Expr e) {
  desugar_in_place(e);
  return e;
}

void desugar(QueryAst& ast) {
  for (auto& item : ast.select)
    if (item.expr) desugar_in_place(*item.expr);
  if (ast.where) for_each_top_expr(*ast.where, [](Expr& e) { desugar_in_place(e); });
  for (auto& o : ast.order_by) desugar_in_place(o.expr);
}

// --- enum overloading ---------------------------------------------------------------

namespace {

EnumDomainPtr domain_of(const BoundQuery& q, const Expr& e) {
  const auto* ref = e.as<ColumnRef>();
  if (!ref || ref->source < 0 || ref->column < 0) return nullptr;
  const BoundSource& src = q.sources.at(static_cast<std::size_t>(ref->source));
  if (src.is_unnest()) return nullptr;
  return src.table->schema().column(static_cast<std::size_t>(ref->column)).enum_domain();
}

const std::string* text_literal(const Expr& e) {
  const auto* lit = e.as<Literal>();
  if (!lit || lit->value.kind() != ValueKind::kText) return nullptr;
  return &lit->value.as_text();
}

void rewrite_pred(const BoundQuery& q, Predicate& p) {
  if (auto* cmp = p.as<Comparison>()) {
    if (cmp->op != CmpOp::kEq) return;
    Expr* lit_side = text_literal(cmp->rhs) ? &cmp->rhs : text_literal(cmp->lhs) ? &cmp->lhs : nullptr;
    if (!lit_side) return;
    Expr& col_side = lit_side == &cmp->rhs ? cmp->lhs : cmp->rhs;
    EnumDomainPtr domain = domain_of(q, col_side);
    if (!domain || col_side.type.array) return;
    std::string lit = *text_literal(*lit_side);
    if (auto idx = domain->find(lit)) {
      lit_side->as<Literal>()->value = Value::text(domain->values()[*idx]);
      return;
    }
    Expr column = col_side;
    p.node = ClassifyMembership{std::move(lit), std::move(column), domain, false};
    return;
  }
  if (auto* any = p.as<AnyEq>()) {
    const std::string* lit = text_literal(any->literal);
    EnumDomainPtr domain = domain_of(q, any->column);
    if (!lit || !domain) return;
    if (auto idx = domain->find(*lit)) {
      any->literal.as<Literal>()->value = Value::text(domain->values()[*idx]);
      return;
    }
    std::string literal = *lit;
    Expr column = any->column;
    p.node = ClassifyMembership{std::move(literal), std::move(column), domain, true};
    return;
  }
  if (auto* a = p.as<AndPred>()) {
    for (auto& c : a->children) rewrite_pred(q, c);
  } else if (auto* o = p.as<OrPred>()) {
    for (auto& c : o->children) rewrite_pred(q, c);
  } else if (auto* n = p.as<NotPred>()) {
    rewrite_pred(q, *n->child);
  }
}

}  // namespace

void rewrite_enum_eq(BoundQuery& q) {
  if (q.ast.where) rewrite_pred(q, *q.ast.where);
}

// --- normal forms -------------------------------------------------------------------

namespace {

Predicate nnf(const Predicate& p, bool negate) {
  if (const auto* n = p.as<NotPred>()) return nnf(*n->child, !negate);
  const auto* a = p.as<AndPred>();
  const auto* o = p.as<OrPred>();
  if (!a && !o) return negate ? make_not(p) : p;
  const auto& children = a ? a->children : o->children;
  bool conj = (a != nullptr) != negate;
  std::vector<Predicate> out;
  for (const auto& c : children) {
    Predicate child = nnf(c, negate);
    // Flatten same-kind nesting.
    if (conj && child.as<AndPred>()) {
      for (auto& g : child.as<AndPred>()->children) out.push_back(std::move(g));
    } else if (!conj && child.as<OrPred>()) {
      for (auto& g : child.as<OrPred>()->children) out.push_back(std::move(g));
    } else {
      out.push_back(std::move(child));
    }
  }
  if (out.size() == 1) return std::move(out.front());
  return conj ? make_and(std::move(out)) : make_or(std::move(out));
}

struct CapExceeded {};

using Dnf = std::vector<std::vector<PlanAtom>>;

Dnf dnf_of(const Predicate& p, std::size_t cap) {
  if (const auto* n = p.as<NotPred>()) {
    PlanAtom atom{*n->child, true, classify_cost(*n->child), 0};
    return Dnf{{std::move(atom)}};
  }
  if (const auto* o = p.as<OrPred>()) {
    Dnf out;
    for (const auto& c : o->children) {
      Dnf part = dnf_of(c, cap);
      for (auto& conj : part) out.push_back(std::move(conj));
      if (out.size() > cap) throw CapExceeded{};
    }
    return out;
  }
  if (const auto* a = p.as<AndPred>()) {
    Dnf out{{}};
    for (const auto& c : a->children) {
      Dnf part = dnf_of(c, cap);
      if (out.size() * part.size() > cap) throw CapExceeded{};
      Dnf next;
      next.reserve(out.size() * part.size());
      for (const auto& left : out) {
        for (const auto& right : part) {
          std::vector<PlanAtom> conj = left;
          conj.insert(conj.end(), right.begin(), right.end());
          next.push_back(std::move(conj));
        }
      }
      out = std::move(next);
    }
    return out;
  }
  return Dnf{{PlanAtom{p, false, classify_cost(p), 0}}};
}

}  // namespace

Predicate to_nnf(const Predicate& p) { return nnf(p, false); }

std::optional<std::vector<std::vector<PlanAtom>>> to_dnf(const Predicate& p, std::size_t cap) {
  try {
    Dnf out = dnf_of(to_nnf(p), cap);
    for (auto& conj : out)
      for (std::size_t i = 0; i < conj.size(); ++i) conj[i].id = static_cast<int>(i);
    return out;
  } catch (const CapExceeded&) {
    return std::nullopt;
  }
}

CostClass classify_cost(const Predicate& atom) {
  if (contains_answer(atom)) return CostClass::kAnswer;
  if (atom.as<ClassifyMembership>()) return CostClass::kEnumOverload;
  return CostClass::kStructured;
}

std::vector<PlanAtom> order_conjuncts(std::vector<PlanAtom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const PlanAtom& a, const PlanAtom& b) { return a.cost < b.cost; });
  return atoms;
}

// --- retrieval ------------------------------------------------------------------------

namespace {

const AnswerCall* answer_of(const Expr& e) {
  const Expr* cur = &e;
  while (const auto* c = cur->as<CastExpr>()) cur = &*c->operand;
  return cur->as<AnswerCall>();
}

}  // namespace

const AnswerCall* answer_in_atom(const Predicate& atom) {
  if (const auto* c = atom.as<Comparison>()) {
    if (const auto* a = answer_of(c->lhs)) return a;
    return answer_of(c->rhs);
  }
  if (const auto* in = atom.as<InList>()) return answer_of(in->operand);
  return nullptr;
}

void attach_retrieval(PlanTree& plan) {
  const BoundQuery& q = plan.query;
  bool single_base = q.sources.size() == 1 && !q.sources.front().is_unnest();
  for (auto& conj : plan.dnf) {
    PruneSpec spec;
    spec.k = plan.config.retrieval_k;
    spec.prefilter = plan.config.order_conjuncts;
    for (const auto& atom : conj.atoms) {
      if (atom.cost != CostClass::kAnswer) continue;
      const AnswerCall* call = atom.negated ? nullptr : answer_in_atom(atom.pred);
      const ColumnRef* ref = call ? call->target->as<ColumnRef>() : nullptr;
      if (!single_base || !ref || ref->column < 0 || !call->target->type.is_free_text()) {
        conj.full_scan = true;
        continue;
      }
      spec.constraints.push_back(PruneConstraint{call->question, atom.id, ref->column});
    }
    if (!spec.constraints.empty()) conj.prune = std::move(spec);
  }
}

// --- plan -------------------------------------------------------------------------------

PlanTree plan(BoundQuery q, const PlannerConfig& config) {
  PlanTree out;
  out.config = config;
  desugar(q.ast);
  rewrite_enum_eq(q);
  if (q.ast.where) {
    if (auto dnf = to_dnf(*q.ast.where, config.dnf_cap)) {
      for (auto& atoms : *dnf) {
        AndList conj;
        conj.atoms = config.order_conjuncts ? order_conjuncts(std::move(atoms)) : std::move(atoms);
        out.dnf.push_back(std::move(conj));
      }
    } else {
      out.fallback = to_nnf(*q.ast.where);
    }
  }
  out.lazy_limit = q.ast.limit.has_value() && q.ast.order_by.empty() && !q.aggregate;
  out.query = std::move(q);
  if (config.prune) attach_retrieval(out);
  return out;
}

// --- explain --------------------------------------------------------------------------

std::string explain(const PlanTree& plan) {
  const BoundQuery& q = plan.query;
  std::ostringstream os;
  int depth = 0;
  auto line = [&](const std::string& s) { os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << s << '\n'; };

  std::vector<std::string> items;
  for (std::size_t i = 0; i < q.ast.select.size(); ++i) {
    std::string s = print(*q.ast.select[i].expr);
    if (!q.ast.select[i].alias.empty() && q.ast.select[i].alias != output_name(*q.ast.select[i].expr))
      s += " AS " + quote_identifier(q.ast.select[i].alias);
    items.push_back(std::move(s));
  }
  if (q.aggregate) {
    line("Aggregate: " + join(items, ", "));
  } else {
    line("Project: " + join(items, ", "));
  }
  ++depth;
  if (q.ast.limit) {
    line("Limit: " + std::to_string(*q.ast.limit) + (plan.lazy_limit ? " (lazy)" : " (after full evaluation)"));
    ++depth;
  }
  if (!q.ast.order_by.empty()) {
    std::vector<std::string> keys;
    for (const auto& o : q.ast.order_by) keys.push_back(print(o.expr) + (o.desc ? " DESC" : " ASC"));
    line("Sort: " + join(keys, ", "));
    ++depth;
  }
  if (plan.fallback) {
    line("Filter (unnormalized, DNF cap " + std::to_string(plan.config.dnf_cap) + " exceeded): " + print(*plan.fallback));
    ++depth;
  } else if (!plan.dnf.empty()) {
    line("Filter: DNF with " + std::to_string(plan.dnf.size()) + " AND-list" + (plan.dnf.size() == 1 ? "" : "s"));
    ++depth;
    for (std::size_t i = 0; i < plan.dnf.size(); ++i) {
      const AndList& conj = plan.dnf[i];
      line("AND-list " + std::to_string(i + 1) + (conj.full_scan ? " [full-scan answer filter]" : ""));
      ++depth;
      if (conj.prune) {
        std::vector<std::string> cs;
        const TableSchema& schema = q.sources.front().table->schema();
        for (const auto& c : conj.prune->constraints)
          cs.push_back(quote_string(c.question) + " ON " +
                       quote_identifier(schema.column(static_cast<std::size_t>(c.column)).name));
        line("RetrievalPrune k=" + std::to_string(conj.prune->k) + (conj.prune->prefilter ? "" : " (no prefilter)") +
             ": " + join(cs, "; "));
      }
      for (const auto& atom : conj.atoms) {
        std::string text = print(atom.pred);
        if (atom.negated) text = "NOT (" + text + ")";
        line("[" + std::string(cost_class_name(atom.cost)) + "] " + text);
      }
      --depth;
    }
  }
  for (std::size_t s = 0; s < q.sources.size(); ++s) {
    const BoundSource& src = q.sources[s];
    if (src.is_unnest()) {
      const BoundSource& base = q.sources[static_cast<std::size_t>(src.unnest_of)];
      line("Unnest: " + quote_identifier(base.alias) + "." +
           quote_identifier(base.table->schema().column(static_cast<std::size_t>(src.unnest_column)).name) + " AS " +
           quote_identifier(src.alias));
    } else {
      std::string s_line = "Scan: " + quote_identifier(src.table->schema().name());
      if (src.alias != src.table->schema().name()) s_line += " AS " + quote_identifier(src.alias);
      line(s_line + " (" + std::to_string(src.table->size()) + " rows)");
    }
  }
  return os.str();
}

}  // namespace suql
