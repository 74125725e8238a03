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

#include <string_view>

#include "suql/ast.hpp"

namespace suql {

/// Parses one SELECT statement of the supported subset. Throws
/// Error(kParse) with a position inside `text`, or Error(kUnsupported)
/// naming the construct (GROUP BY, JOIN, subqueries, ...).
QueryAst parse(std::string_view text);

/// Like parse(), additionally accepting a leading `EXPLAIN [ANALYZE]`.
Statement parse_statement(std::string_view text);

}  // namespace suql
