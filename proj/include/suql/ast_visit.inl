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

namespace suql {

template <class F>
void visit_exprs(const Expr& e, F&& f) {
  f(e);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AnswerCall> || std::is_same_v<T, SummaryCall>) {
          visit_exprs(*n.target, f);
        } else if constexpr (std::is_same_v<T, CastExpr>) {
          visit_exprs(*n.operand, f);
        } else if constexpr (std::is_same_v<T, Aggregate>) {
          if (n.arg) visit_exprs(**n.arg, f);
        } else if constexpr (std::is_same_v<T, Arith>) {
          visit_exprs(*n.lhs, f);
          visit_exprs(*n.rhs, f);
        }
      },
      e.node);
}

template <class F>
void visit_exprs(const Predicate& p, F&& f) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comparison>) {
          visit_exprs(n.lhs, f);
          visit_exprs(n.rhs, f);
        } else if constexpr (std::is_same_v<T, InList>) {
          visit_exprs(n.operand, f);
          for (const auto& i : n.items) visit_exprs(i, f);
        } else if constexpr (std::is_same_v<T, AnyEq>) {
          visit_exprs(n.literal, f);
          visit_exprs(n.column, f);
        } else if constexpr (std::is_same_v<T, ArrayContains>) {
          visit_exprs(n.column, f);
          for (const auto& i : n.items) visit_exprs(i, f);
        } else if constexpr (std::is_same_v<T, ClassifyMembership>) {
          visit_exprs(n.column, f);
        } else if constexpr (std::is_same_v<T, AndPred> || std::is_same_v<T, OrPred>) {
          for (const auto& c : n.children) visit_exprs(c, f);
        } else if constexpr (std::is_same_v<T, NotPred>) {
          visit_exprs(*n.child, f);
        }
      },
      p.node);
}

}  // namespace suql
