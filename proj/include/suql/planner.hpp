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

#include <optional>
#include <string>
#include <vector>

#include "suql/binder.hpp"

namespace suql {

inline constexpr const char* kSummaryQuestion = "what is the summary of this document?";

enum class CostClass { kStructured = 0, kEnumOverload = 1, kAnswer = 2 };
std::string_view cost_class_name(CostClass c);

/// A DNF literal: an atomic predicate, possibly negated.
struct PlanAtom {
  Predicate pred;
  bool negated = false;
  CostClass cost = CostClass::kStructured;
  int id = 0;  // position in the pre-ordering AND-list; stable across ordering
};

struct PruneConstraint {
  std::string question;
  int atom_id = 0;
  int column = 0;  // column of the (single) base table
};

struct PruneSpec {
  std::vector<PruneConstraint> constraints;
  std::size_t k = 20;
  /// Shortlist only rows passing the group's structured atoms. Tied to
  /// conjunct ordering: with ordering off, every row is a candidate.
  bool prefilter = true;
};

struct AndList {
  std::vector<PlanAtom> atoms;
  std::optional<PruneSpec> prune;
  /// Holds an answer filter that retrieval cannot shortlist (negated, or
  /// over an unnest element / cross join). Legal but unpruned.
  bool full_scan = false;
};

struct PlannerConfig {
  std::size_t retrieval_k = 20;
  std::size_t dnf_cap = 64;
  bool order_conjuncts = true;
  bool prune = true;
};

struct PlanTree {
  BoundQuery query;  // desugared and enum-rewritten
  /// Disjunction of AND-lists. Empty with no fallback means "no WHERE".
  std::vector<AndList> dnf;
  /// Set when DNF expansion exceeded the cap: evaluate this tree instead.
  std::optional<Predicate> fallback;
  bool lazy_limit = false;
  PlannerConfig config;

  bool has_filter() const { return !dnf.empty() || fallback.has_value(); }
};

// Individual passes, exposed for tests.

/// summary(t) -> answer(t, kSummaryQuestion) everywhere in the query.
void desugar(QueryAst& ast);
Expr desugar(Expr e);

/// Replaces `lit = enum_col` / `lit = ANY(enum_array)` by ClassifyMembership
/// when lit is not a domain member; member literals are canonicalized.
void rewrite_enum_eq(BoundQuery& q);

/// Negation normal form: NOT only directly above atoms.
Predicate to_nnf(const Predicate& p);

/// Disjunctive normal form as AND-lists of (atom, negated). Returns nullopt
/// when more than `cap` AND-lists would be produced.
std::optional<std::vector<std::vector<PlanAtom>>> to_dnf(const Predicate& p, std::size_t cap = 64);

CostClass classify_cost(const Predicate& atom);

/// Stable sort by cost class.
std::vector<PlanAtom> order_conjuncts(std::vector<PlanAtom> atoms);

void attach_retrieval(PlanTree& plan);

PlanTree plan(BoundQuery q, const PlannerConfig& config = {});

/// Indented plan text with cost classes and prune nodes.
std::string explain(const PlanTree& plan);

/// The AnswerCall inside an answer atom, if the atom is a comparison whose
/// side is an (optionally cast) answer call.
const AnswerCall* answer_in_atom(const Predicate& atom);

}  // namespace suql
