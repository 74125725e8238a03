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

#include "suql/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "suql/error.hpp"
#include "suql/strings.hpp"

namespace suql {

namespace {

constexpr char kMagic[8] = {'S', 'U', 'Q', 'L', 'I', 'D', 'X', '1'};

bool token_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

template <class T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw Error(ErrorCode::kIntegrity, "index file truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += sizeof(T);
  return static_cast<T>(v);
}

std::vector<std::string> cell_texts(const Value& v) {
  std::vector<std::string> out;
  if (v.is_null()) return out;
  if (v.kind() == ValueKind::kArray) {
    for (const auto& e : v.as_array())
      if (!e.is_null()) out.push_back(e.to_string());
  } else {
    out.push_back(v.to_string());
  }
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::string> embed_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (token_char(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<float> HashingEmbedder::embed(std::string_view text) const {
  std::map<std::string, int> tf;
  for (auto& t : embed_tokens(text)) ++tf[t];
  std::vector<double> acc(dim_, 0.0);
  for (const auto& [tok, n] : tf) acc[fnv1a64(tok) % dim_] += 1.0 + std::log(static_cast<double>(n));
  double norm = std::sqrt(std::inner_product(acc.begin(), acc.end(), acc.begin(), 0.0));
  std::vector<float> out(dim_, 0.0f);
  if (norm > 0)
    for (std::size_t i = 0; i < dim_; ++i) out[i] = static_cast<float>(acc[i] / norm);
  return out;
}

double sim(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kRuntime,
                "embedding dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

// --- column index ---------------------------------------------------------------

ColumnIndex ColumnIndex::build(const Table& table, std::size_t column, const Embedder& embedder) {
  const Column& col = table.schema().column(column);
  if (!col.type.is_free_text())
    throw Error(ErrorCode::kSchema, "column " + col.name + " is not FREE_TEXT; only free-text columns are indexed");
  ColumnIndex idx;
  idx.tag_ = embedder.tag();
  idx.dim_ = embedder.dim();
  idx.offsets_.push_back(0);
  for (const auto& row : table.rows()) {
    for (const auto& text : cell_texts(row[column])) {
      auto v = embedder.embed(text);
      if (v.size() != idx.dim_) throw Error(ErrorCode::kRuntime, "embedder returned a vector of the wrong size");
      idx.data_.insert(idx.data_.end(), v.begin(), v.end());
    }
    idx.offsets_.push_back(idx.data_.size() / idx.dim_);
  }
  return idx;
}

void ColumnIndex::save(const std::filesystem::path& path) const {
  std::string out(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim_));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tag_.size()));
  out += tag_;
  put_le<std::uint64_t>(out, rows());
  put_le<std::uint64_t>(out, vector_count());
  for (auto o : offsets_) put_le<std::uint64_t>(out, o);
  for (float f : data_) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof bits);
    put_le<std::uint32_t>(out, bits);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write index file " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::kIo, "failed writing index file " + path.string());
}

ColumnIndex ColumnIndex::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot read index file " + path.string());
  std::string in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (in.size() < sizeof(kMagic) || std::memcmp(in.data(), kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorCode::kIntegrity, "not an index file: " + path.string());
  std::size_t pos = sizeof(kMagic);
  ColumnIndex idx;
  idx.dim_ = get_le<std::uint32_t>(in, pos);
  auto tag_len = get_le<std::uint32_t>(in, pos);
  if (pos + tag_len > in.size()) throw Error(ErrorCode::kIntegrity, "index file truncated");
  idx.tag_ = in.substr(pos, tag_len);
  pos += tag_len;
  auto rows = get_le<std::uint64_t>(in, pos);
  auto vectors = get_le<std::uint64_t>(in, pos);
  for (std::uint64_t i = 0; i <= rows; ++i) idx.offsets_.push_back(get_le<std::uint64_t>(in, pos));
  if (idx.offsets_.back() != vectors) throw Error(ErrorCode::kIntegrity, "index offset table inconsistent");
  idx.data_.reserve(vectors * idx.dim_);
  for (std::uint64_t i = 0; i < vectors * idx.dim_; ++i) {
    auto bits = get_le<std::uint32_t>(in, pos);
    float v;
    std::memcpy(&v, &bits, sizeof v);
    idx.data_.push_back(v);
  }
  if (pos != in.size()) throw Error(ErrorCode::kIntegrity, "trailing bytes in index file " + path.string());
  return idx;
}

std::span<const float> ColumnIndex::vector(std::size_t row, std::size_t element) const {
  std::size_t i = offsets_.at(row) + element;
  if (i >= offsets_.at(row + 1)) throw Error(ErrorCode::kRuntime, "index element out of range");
  return {data_.data() + i * dim_, dim_};
}

std::optional<double> ColumnIndex::max_sim(std::size_t row, std::span<const float> query) const {
  std::optional<double> best;
  for (std::size_t e = 0; e < row_size(row); ++e) {
    double s = sim(query, vector(row, e));
    if (!best || s > *best) best = s;
  }
  return best;
}

// --- scoring --------------------------------------------------------------------

double aggregate_score(std::size_t row, const std::vector<ScoredConstraint>& constraints) {
  double total = 0;
  for (const auto& c : constraints) {
    if (!c.index) throw Error(ErrorCode::kRuntime, "retrieval constraint without an index");
    total += c.index->max_sim(row, c.query).value_or(-1.0);
  }
  return total;
}

std::vector<std::size_t> top_k(const std::vector<ScoredConstraint>& constraints, std::size_t k,
                               const std::vector<std::size_t>& candidates) {
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(candidates.size());
  for (auto r : candidates) scored.emplace_back(aggregate_score(r, constraints), r);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].second);
  return out;
}

std::string linearize_row(const Row& row, const TableSchema& schema) {
  std::vector<std::string> parts;
  for (std::size_t c = 0; c < schema.size() && c < row.size(); ++c) {
    const Value& v = row[c];
    if (v.is_null()) continue;
    std::string text;
    if (v.kind() == ValueKind::kArray) {
      std::vector<std::string> items;
      for (const auto& e : v.as_array())
        if (!e.is_null()) items.push_back(e.to_string());
      text = join(items, "; ");
    } else {
      text = v.to_string();
    }
    parts.push_back(schema.column(c).name + ": " + text);
  }
  return join(parts, ", ");
}

std::vector<std::size_t> linearized_search(const Table& table, std::string_view query, std::size_t k,
                                           const Embedder& embedder) {
  auto q = embedder.embed(query);
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t r = 0; r < table.size(); ++r)
    scored.emplace_back(sim(q, embedder.embed(linearize_row(table.row(r), table.schema()))), r);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].second);
  return out;
}

// --- cache ------------------------------------------------------------------------

const ColumnIndex& IndexCache::get(const Table& table, std::size_t column) {
  std::lock_guard lk(mu_);
  auto key = std::make_pair(&table, column);
  auto it = indexes_.find(key);
  if (it != indexes_.end() && it->second->tag() == embedder_->tag()) return *it->second;
  auto idx = std::make_unique<ColumnIndex>(ColumnIndex::build(table, column, *embedder_));
  ++builds_;
  auto& slot = indexes_[key];
  slot = std::move(idx);
  return *slot;
}

void IndexCache::put(const Table& table, std::size_t column, ColumnIndex index) {
  std::lock_guard lk(mu_);
  indexes_[{&table, column}] = std::make_unique<ColumnIndex>(std::move(index));
}

}  // namespace suql
