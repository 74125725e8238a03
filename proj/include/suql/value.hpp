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

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace suql {

/// A named, ordered set of permitted values. Order is stable: classifier
/// prompts reference values by their index.
class EnumDomain {
 public:
  /// Throws Error(kSchema) on an empty list or case-folded duplicates.
  static std::shared_ptr<const EnumDomain> make(std::string name, std::vector<std::string> values);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Index of `value` under ASCII case-folding.
  std::optional<std::size_t> find(std::string_view value) const;
  bool contains(std::string_view value) const { return find(value).has_value(); }

 private:
  EnumDomain(std::string name, std::vector<std::string> values)
      : name_(std::move(name)), values_(std::move(values)) {}

  std::string name_;
  std::vector<std::string> values_;
};

using EnumDomainPtr = std::shared_ptr<const EnumDomain>;

enum class TypeKind {
  kNull,  // type of a bare NULL literal; never a column type
  kInt,
  kFloat,
  kNumeric,
  kBoolean,
  kText,
  kDate,
  kTime,
  kInterval,
  kFreeText,
  kEnum,
};

/// Column / expression type. Arrays are a flag on the element kind, which
/// makes nested arrays unrepresentable.
struct SemanticType {
  TypeKind kind = TypeKind::kText;
  bool array = false;
  int precision = 0;  // NUMERIC(p,s); 0 means unconstrained
  int scale = 0;
  EnumDomainPtr domain;  // set iff kind == kEnum

  static SemanticType null_type() { return {TypeKind::kNull}; }
  static SemanticType integer() { return {TypeKind::kInt}; }
  static SemanticType floating() { return {TypeKind::kFloat}; }
  static SemanticType numeric(int p = 0, int s = 0) { return {TypeKind::kNumeric, false, p, s}; }
  static SemanticType boolean() { return {TypeKind::kBoolean}; }
  static SemanticType text() { return {TypeKind::kText}; }
  static SemanticType date() { return {TypeKind::kDate}; }
  static SemanticType time() { return {TypeKind::kTime}; }
  static SemanticType interval() { return {TypeKind::kInterval}; }
  static SemanticType free_text() { return {TypeKind::kFreeText}; }
  static SemanticType enumeration(EnumDomainPtr d);
  static SemanticType array_of(SemanticType element);

  SemanticType element() const {
    SemanticType e = *this;
    e.array = false;
    return e;
  }

  bool is_numeric() const {
    return !array && (kind == TypeKind::kInt || kind == TypeKind::kFloat || kind == TypeKind::kNumeric);
  }
  bool is_textual() const {
    return !array && (kind == TypeKind::kText || kind == TypeKind::kFreeText || kind == TypeKind::kEnum);
  }
  /// Legal first argument of answer()/summary().
  bool is_free_text() const { return kind == TypeKind::kFreeText; }

  /// Canonical SQL spelling: INT, NUMERIC(2,1), TEXT[], FREE_TEXT, ENUM('a', 'b').
  std::string to_string() const;

  friend bool operator==(const SemanticType& a, const SemanticType& b);
};

struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;
  auto operator<=>(const Date&) const = default;
};

struct TimeOfDay {
  std::int32_t seconds = 0;  // since midnight
  auto operator<=>(const TimeOfDay&) const = default;
};

struct Interval {
  std::int64_t seconds = 0;
  auto operator<=>(const Interval&) const = default;
};

enum class ValueKind { kNull, kInt, kFloat, kBool, kText, kDate, kTime, kInterval, kArray };

class Value;
using ValueList = std::vector<Value>;

/// A typed cell value. Text covers TEXT, FREE_TEXT and ENUM cells; the
/// column's SemanticType carries the distinction.
class Value {
 public:
  Value() = default;
  static Value null() { return Value(); }
  static Value integer(std::int64_t v) { return Value(Storage(v)); }
  static Value floating(double v) { return Value(Storage(v)); }
  static Value boolean(bool v) { return Value(Storage(v)); }
  static Value text(std::string v) { return Value(Storage(std::move(v))); }
  static Value date(Date v) { return Value(Storage(v)); }
  static Value time(TimeOfDay v) { return Value(Storage(v)); }
  static Value interval(Interval v) { return Value(Storage(v)); }
  static Value array(ValueList items) { return Value(Storage(std::move(items))); }

  ValueKind kind() const { return static_cast<ValueKind>(data_.index()); }
  bool is_null() const { return kind() == ValueKind::kNull; }
  bool is_numeric() const { return kind() == ValueKind::kInt || kind() == ValueKind::kFloat; }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  double as_float() const { return std::get<double>(data_); }
  /// Int or Float widened to double.
  double as_number() const;
  bool as_bool() const { return std::get<bool>(data_); }
  const std::string& as_text() const { return std::get<std::string>(data_); }
  Date as_date() const { return std::get<Date>(data_); }
  TimeOfDay as_time() const { return std::get<TimeOfDay>(data_); }
  Interval as_interval() const { return std::get<Interval>(data_); }
  const ValueList& as_array() const { return std::get<ValueList>(data_); }

  /// Display form: text verbatim, ISO dates, H:MM:SS intervals, `{a,b}` arrays.
  std::string to_string() const;

  /// Strict equality: same kind and same payload (Int 1 != Float 1.0).
  friend bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }

 private:
  using Storage = std::variant<std::monostate, std::int64_t, double, bool, std::string, Date,
                               TimeOfDay, Interval, ValueList>;
  explicit Value(Storage s) : data_(std::move(s)) {}
  Storage data_;
};

/// SQL-style three-way comparison. Returns nullopt when either side is
/// Null or the kinds are incomparable. Int and Float compare numerically.
std::optional<std::strong_ordering> compare_values(const Value& a, const Value& b);

/// Total order used by sorting and multiset checks: Null first, then by
/// kind, then payload.
bool value_less(const Value& a, const Value& b);

/// Casts `v` to `target`; Null casts to Null. Throws Error(kCast).
Value cast_value(const Value& v, const SemanticType& target);

/// Whether a value of kind `k` is a direct inhabitant of `t` (no cast needed).
bool value_fits(const Value& v, const SemanticType& t);

// Calendar helpers.
bool is_valid_date(int year, int month, int day);
/// ISO-8601 `YYYY-MM-DD`, `D Month YYYY`, `Month D, YYYY` (full or
/// three-letter month names, case-insensitive).
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);
/// `H:MM:SS` with optional sign; hours unbounded.
std::optional<Interval> parse_interval(std::string_view text);
std::string format_interval(Interval iv);
/// `HH:MM` or `HH:MM:SS`, within one day.
std::optional<TimeOfDay> parse_time(std::string_view text);
std::string format_time(TimeOfDay t);
/// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t days_from_civil(Date d);

/// Shortest round-tripping decimal form; integral values keep a ".0".
std::string format_double(double v);

}  // namespace suql
