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

#include "json.hpp"
#include "suql/planner.hpp"
#include "suql/retrieval.hpp"
#include "suql/text_runtime.hpp"

namespace suql {

struct ExecStats {
  std::size_t rows_scanned = 0;
  /// Runtime invocations for answer()/filter verification after per-query
  /// memoization (runtime-level cache hits still count).
  std::size_t answer_calls = 0;
  std::size_t classify_calls = 0;
  bool retrieval_pruned = false;
  std::size_t cast_errors = 0;
  std::vector<std::string> warnings;

  nlohmann::ordered_json to_json() const;
};

struct ResultSet {
  std::vector<OutputColumn> columns;
  std::vector<Row> rows;
  ExecStats stats;
};

struct ExecContext {
  TextRuntime& runtime;
  IndexCache& indexes;
  /// Concurrent filter evaluations per scan batch; 1 = sequential.
  std::size_t parallelism = 1;
};

/// Runs a plan. Rows come out in scan order (base-table row id order, then
/// unnest element order) unless ORDER BY is given; the sort is stable and
/// puts Nulls last in both directions.
ResultSet execute(const PlanTree& plan, ExecContext& ctx);

/// Wire form: {columns: [{name, type}], rows: [[...]], stats}.
nlohmann::ordered_json result_to_json(const ResultSet& rs);

/// Plain-text table for terminals.
std::string format_table(const ResultSet& rs);

/// Date helpers for date arithmetic.
Date civil_from_days(std::int64_t days);

}  // namespace suql
