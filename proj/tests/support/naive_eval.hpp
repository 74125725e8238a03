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

#include <string>
#include <vector>

#include "suql/ast.hpp"
#include "suql/catalog.hpp"

namespace suql::testing {

/// Reference evaluator for structured single-table queries. It works on the
/// unbound AST, resolves names itself and applies its own coercions, so it
/// shares nothing with the binder, planner or executor beyond the parser.
/// Supported: SELECT * / columns / COUNT MAX MIN SUM AVG; WHERE with
/// comparisons, ILIKE, IN, = ANY, @>, AND, OR, NOT; ORDER BY; LIMIT.
std::vector<Row> naive_execute(const QueryAst& query, const Catalog& catalog);

/// Order-insensitive row comparison (exact Value equality per cell).
bool multiset_equal(const std::vector<Row>& a, const std::vector<Row>& b);

std::string describe_rows(const std::vector<Row>& rows);

}  // namespace suql::testing
