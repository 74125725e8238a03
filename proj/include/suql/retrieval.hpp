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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "suql/catalog.hpp"

namespace suql {

/// Maps text to a unit vector (or the zero vector for text without tokens).
class Embedder {
 public:
  virtual ~Embedder() = default;
  /// Changes whenever embeddings would change; stored in index files.
  virtual std::string tag() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::vector<float> embed(std::string_view text) const = 0;
};

/// Hashed bag of words: lower-cased alphanumeric tokens, FNV-1a 64 bucket
/// hashing, per-bucket weight sum of (1 + ln tf), L2-normalized.
class HashingEmbedder : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dim = 256) : dim_(dim) {}
  std::string tag() const override { return "hashbow-v1-d" + std::to_string(dim_); }
  std::size_t dim() const override { return dim_; }
  std::vector<float> embed(std::string_view text) const override;

 private:
  std::size_t dim_;
};

std::vector<std::string> embed_tokens(std::string_view text);
std::uint64_t fnv1a64(std::string_view s);

/// Dot product (cosine for unit vectors). Throws Error(kRuntime) on a
/// dimension mismatch.
double sim(std::span<const float> a, std::span<const float> b);

/// Per-row element embeddings of one FREE_TEXT / FREE_TEXT[] column. Null
/// cells and empty arrays own zero vectors.
class ColumnIndex {
 public:
  static ColumnIndex build(const Table& table, std::size_t column, const Embedder& embedder);

  /// Binary layout (little-endian):
  ///   "SUQLIDX1" | u32 dim | u32 tag_len | tag bytes | u64 rows | u64 vectors
  ///   | u64 offsets[rows + 1] | f32 data[vectors * dim]
  void save(const std::filesystem::path& path) const;
  static ColumnIndex load(const std::filesystem::path& path);

  const std::string& tag() const { return tag_; }
  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t vector_count() const { return data_.size() / (dim_ ? dim_ : 1); }
  std::size_t row_size(std::size_t row) const { return offsets_.at(row + 1) - offsets_.at(row); }
  std::span<const float> vector(std::size_t row, std::size_t element) const;
  /// max over the row's elements of sim(query, element); nullopt if none.
  std::optional<double> max_sim(std::size_t row, std::span<const float> query) const;

  friend bool operator==(const ColumnIndex&, const ColumnIndex&) = default;

 private:
  std::string tag_;
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<float> data_;
};

/// One retrieval constraint: the question c, embedded, scored against one
/// column's index.
struct ScoredConstraint {
  std::vector<float> query;
  const ColumnIndex* index = nullptr;
};

/// Σ_c max_t sim(c, t). A row with no elements in a constraint's column
/// contributes -1 for that constraint (so an empty row scores -|C|).
double aggregate_score(std::size_t row, const std::vector<ScoredConstraint>& constraints);

/// Candidates sorted by aggregate_score descending, ties by ascending row
/// id, truncated to k.
std::vector<std::size_t> top_k(const std::vector<ScoredConstraint>& constraints, std::size_t k,
                               const std::vector<std::size_t>& candidates);

/// "col: value" fragments in schema order joined by ", "; array elements
/// joined by "; "; Null cells omitted.
std::string linearize_row(const Row& row, const TableSchema& schema);

/// Linearization baseline: embed `query` and return the top-k rows by
/// similarity to their linearized text.
std::vector<std::size_t> linearized_search(const Table& table, std::string_view query, std::size_t k,
                                           const Embedder& embedder);

/// Thread-safe column-index cache. Indexes are built on first use unless
/// preloaded (e.g. from a database directory).
class IndexCache {
 public:
  explicit IndexCache(std::shared_ptr<const Embedder> embedder) : embedder_(std::move(embedder)) {}

  const Embedder& embedder() const { return *embedder_; }
  const ColumnIndex& get(const Table& table, std::size_t column);
  void put(const Table& table, std::size_t column, ColumnIndex index);
  std::size_t builds() const { return builds_; }

 private:
  std::shared_ptr<const Embedder> embedder_;
  std::mutex mu_;
  std::map<std::pair<const Table*, std::size_t>, std::unique_ptr<ColumnIndex>> indexes_;
  std::size_t builds_ = 0;
};

}  // namespace suql
