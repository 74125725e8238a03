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

namespace suql {

/// One FROM item after binding. An unnest source exposes a single column
/// named after its alias whose type is the element type of the array.
struct BoundSource {
  std::string alias;
  TablePtr table;               // base table (null for unnest)
  int unnest_of = -1;           // source index whose array is unnested
  int unnest_column = -1;       // column index in that source
  SemanticType element_type;    // unnest element type
  bool is_unnest() const { return unnest_of >= 0; }
};

struct OutputColumn {
  std::string name;
  SemanticType type;
};

struct BoundQuery {
  /// Star items expanded, ORDER BY aliases resolved, literals coerced, every
  /// Expr::type and ColumnRef::{source,column} filled in.
  QueryAst ast;
  std::vector<BoundSource> sources;
  std::vector<OutputColumn> outputs;
  bool aggregate = false;
};

/// Resolves names and type-checks. Throws Error(kBind) for unknown or
/// ambiguous names and type errors (e.g. answer() over a non-free-text
/// column).
BoundQuery bind(QueryAst ast, const Catalog& catalog);

/// Default output name of a projection expression.
std::string output_name(const Expr& e);

}  // namespace suql
