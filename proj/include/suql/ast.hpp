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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "suql/value.hpp"

namespace suql {

/// Owning pointer with value semantics: copies deep-copy, equality compares
/// the pointees.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Expr;
struct Predicate;

enum class AggFn { kMax, kMin, kCount, kSum, kAvg };
enum class CmpOp { kEq, kNe, kLt, kLe, kGt, kGe, kILike };
enum class ArithOp { kAdd, kSub };

std::string_view agg_fn_name(AggFn fn);
std::string_view cmp_op_name(CmpOp op);

/// Column reference. `source`/`column` are filled by bind(): `source` is the
/// FROM item index, `column` the table column index (-1 for an unnest
/// element).
struct ColumnRef {
  std::string qualifier;
  std::string name;
  int source = -1;
  int column = -1;
};

struct Literal {
  Value value;
};

struct AnswerCall {
  Box<Expr> target;
  std::string question;
};

struct SummaryCall {
  Box<Expr> target;
};

struct CastExpr {
  Box<Expr> operand;
  SemanticType target;
};

/// `arg` is empty for COUNT(*).
struct Aggregate {
  AggFn fn;
  std::optional<Box<Expr>> arg;
};

struct Arith {
  ArithOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
};

struct Expr {
  std::variant<ColumnRef, Literal, AnswerCall, SummaryCall, CastExpr, Aggregate, Arith> node;
  /// Result type, set by bind().
  SemanticType type = SemanticType::null_type();

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }
  template <class T>
  T* as() { return std::get_if<T>(&node); }
};

Expr make_column(std::string name, std::string qualifier = {});
Expr make_literal(Value v);
Expr make_answer(Expr target, std::string question);
Expr make_summary(Expr target);
Expr make_cast(Expr operand, SemanticType type);
Expr make_aggregate(AggFn fn, std::optional<Expr> arg);
Expr make_arith(ArithOp op, Expr lhs, Expr rhs);

// --- predicates ---------------------------------------------------------------

struct Comparison {
  Expr lhs;
  CmpOp op;
  Expr rhs;
};

struct InList {
  Expr operand;
  std::vector<Expr> items;
};

/// `'lit' = ANY (col)`.
struct AnyEq {
  Expr literal;
  Expr column;
};

/// `col @> ARRAY['a', 'b']`.
struct ArrayContains {
  Expr column;
  std::vector<Expr> items;
};

/// Overloaded enum equality produced by the planner: satisfied when the
/// cell (scalar) or any element (array) is in classify(literal, domain).
struct ClassifyMembership {
  std::string literal;
  Expr column;
  EnumDomainPtr domain;
  bool array = false;
};

struct AndPred {
  std::vector<Predicate> children;
};

struct OrPred {
  std::vector<Predicate> children;
};

struct NotPred {
  Box<Predicate> child;
};

struct Predicate {
  std::variant<Comparison, InList, AnyEq, ArrayContains, ClassifyMembership, AndPred, OrPred, NotPred> node;

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }
  template <class T>
  T* as() { return std::get_if<T>(&node); }
  bool is_atom() const { return !as<AndPred>() && !as<OrPred>() && !as<NotPred>(); }
};

Predicate make_and(std::vector<Predicate> children);
Predicate make_or(std::vector<Predicate> children);
Predicate make_not(Predicate child);
Predicate make_cmp(Expr lhs, CmpOp op, Expr rhs);

// --- query --------------------------------------------------------------------

struct SelectItem {
  bool star = false;
  std::string star_qualifier;  // `r.*`
  std::optional<Expr> expr;
  std::string alias;
};

struct FromItem {
  /// Base table, or `unnest(col) AS alias` over an earlier item.
  std::string table;
  std::optional<Expr> unnest_arg;
  std::string alias;
  bool is_unnest() const { return unnest_arg.has_value(); }
};

struct OrderItem {
  Expr expr;
  bool desc = false;
};

struct QueryAst {
  std::vector<SelectItem> select;
  std::vector<FromItem> from;
  std::optional<Predicate> where;
  std::vector<OrderItem> order_by;
  std::optional<std::int64_t> limit;
};

struct Statement {
  bool explain = false;
  bool analyze = false;
  QueryAst query;
};

// Structural (syntax-level) equality; bind annotations are ignored.
bool operator==(const ColumnRef&, const ColumnRef&);
bool operator==(const Literal&, const Literal&);
bool operator==(const AnswerCall&, const AnswerCall&);
bool operator==(const SummaryCall&, const SummaryCall&);
bool operator==(const CastExpr&, const CastExpr&);
bool operator==(const Aggregate&, const Aggregate&);
bool operator==(const Arith&, const Arith&);
bool operator==(const Expr&, const Expr&);
bool operator==(const Comparison&, const Comparison&);
bool operator==(const InList&, const InList&);
bool operator==(const AnyEq&, const AnyEq&);
bool operator==(const ArrayContains&, const ArrayContains&);
bool operator==(const ClassifyMembership&, const ClassifyMembership&);
bool operator==(const AndPred&, const AndPred&);
bool operator==(const OrPred&, const OrPred&);
bool operator==(const NotPred&, const NotPred&);
bool operator==(const Predicate&, const Predicate&);
bool operator==(const SelectItem&, const SelectItem&);
bool operator==(const FromItem&, const FromItem&);
bool operator==(const OrderItem&, const OrderItem&);
bool operator==(const QueryAst&, const QueryAst&);

// --- printing -----------------------------------------------------------------

/// Canonical SUQL text: upper-case keywords, single spaces, identifiers
/// quoted only when needed, trailing semicolon.
std::string print(const QueryAst& ast);
std::string print(const Expr& expr);
std::string print(const Predicate& pred);
std::string quote_identifier(const std::string& name);
/// Words that cannot appear as bare identifiers (lower-case input).
bool is_reserved_word(const std::string& lower);
std::string quote_string(const std::string& s);

// --- traversal ------------------------------------------------------------------

bool contains_answer(const Expr& e);
bool contains_answer(const Predicate& p);
bool contains_aggregate(const Expr& e);

/// Pre-order visit of every expression nested in `e` (including e).
template <class F>
void visit_exprs(const Expr& e, F&& f);
template <class F>
void visit_exprs(const Predicate& p, F&& f);

}  // namespace suql

#include "suql/ast_visit.inl"
