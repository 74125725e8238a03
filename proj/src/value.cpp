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

#include "suql/value.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "suql/error.hpp"
#include "suql/strings.hpp"

namespace suql {

// ---------------------------------------------------------------------------
// EnumDomain / SemanticType

std::shared_ptr<const EnumDomain> EnumDomain::make(std::string name, std::vector<std::string> values) {
  if (values.empty()) throw Error(ErrorCode::kSchema, "enum domain '" + name + "' is empty");
  std::set<std::string> seen;
  for (const auto& v : values) {
    if (v.empty()) throw Error(ErrorCode::kSchema, "enum domain '" + name + "' has an empty value");
    if (!seen.insert(to_lower(v)).second)
      throw Error(ErrorCode::kSchema, "enum domain '" + name + "' repeats value '" + v + "'");
  }
  return std::shared_ptr<const EnumDomain>(new EnumDomain(std::move(name), std::move(values)));
}

std::optional<std::size_t> EnumDomain::find(std::string_view value) const {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (iequals(values_[i], value)) return i;
  return std::nullopt;
}

SemanticType SemanticType::enumeration(EnumDomainPtr d) {
  SemanticType t{TypeKind::kEnum};
  t.domain = std::move(d);
  return t;
}

SemanticType SemanticType::array_of(SemanticType element) {
  element.array = true;
  return element;
}

static std::string quote_sql(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string SemanticType::to_string() const {
  std::string base;
  switch (kind) {
    case TypeKind::kNull: base = "NULL"; break;
    case TypeKind::kInt: base = "INT"; break;
    case TypeKind::kFloat: base = "FLOAT"; break;
    case TypeKind::kNumeric:
      base = precision > 0 ? "NUMERIC(" + std::to_string(precision) + "," + std::to_string(scale) + ")"
                           : "NUMERIC";
      break;
    case TypeKind::kBoolean: base = "BOOLEAN"; break;
    case TypeKind::kText: base = "TEXT"; break;
    case TypeKind::kDate: base = "DATE"; break;
    case TypeKind::kTime: base = "TIME"; break;
    case TypeKind::kInterval: base = "INTERVAL"; break;
    case TypeKind::kFreeText: base = "FREE_TEXT"; break;
    case TypeKind::kEnum: {
      base = "ENUM (";
      if (domain) {
        for (std::size_t i = 0; i < domain->size(); ++i) {
          if (i) base += ", ";
          base += quote_sql(domain->values()[i]);
        }
      }
      base += ")";
      break;
    }
  }
  return array ? base + "[]" : base;
}

bool operator==(const SemanticType& a, const SemanticType& b) {
  if (a.kind != b.kind || a.array != b.array || a.precision != b.precision || a.scale != b.scale)
    return false;
  if (a.kind != TypeKind::kEnum) return true;
  if (a.domain == b.domain) return true;
  return a.domain && b.domain && a.domain->values() == b.domain->values();
}

// ---------------------------------------------------------------------------
// Calendar

static bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

bool is_valid_date(int year, int month, int day) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1) return false;
  int max = kDays[month - 1] + (month == 2 && is_leap(year) ? 1 : 0);
  return day <= max;
}

std::int64_t days_from_civil(Date d) {
  // Howard Hinnant's days_from_civil.
  std::int64_t y = d.year - (d.month <= 2 ? 1 : 0);
  std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  std::int64_t yoe = y - era * 400;
  std::int64_t mp = (d.month + 9) % 12;
  std::int64_t doy = (153 * mp + 2) / 5 + d.day - 1;
  std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

namespace {

constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

std::optional<int> month_from_name(std::string_view word) {
  std::string w = to_lower(word);
  if (!w.empty() && w.back() == '.') w.pop_back();
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    if (w == kMonthNames[i]) return static_cast<int>(i + 1);
    if (w.size() == 3 && kMonthNames[i].substr(0, 3) == w) return static_cast<int>(i + 1);
    if (w == "sept" && i == 8) return 9;
  }
  return std::nullopt;
}

std::optional<int> parse_uint(std::string_view s, std::size_t min_len = 1, std::size_t max_len = 9) {
  if (s.size() < min_len || s.size() > max_len) return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == ',' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != ',' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<Date> make_date(int y, int m, int d) {
  if (!is_valid_date(y, m, d)) return std::nullopt;
  return Date{y, m, d};
}

std::string two_digits(std::int64_t v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  // ISO-8601 date, optionally followed by a time part we ignore.
  if (text.size() >= 10 && text[4] == '-' && text[7] == '-') {
    auto y = parse_uint(text.substr(0, 4), 4, 4);
    auto m = parse_uint(text.substr(5, 2), 2, 2);
    auto d = parse_uint(text.substr(8, 2), 2, 2);
    if (y && m && d && (text.size() == 10 || text[10] == 'T' || text[10] == ' '))
      return make_date(*y, *m, *d);
    return std::nullopt;
  }
  auto words = split_words(text);
  if (words.size() != 3) return std::nullopt;
  // D Month YYYY
  if (auto d = parse_uint(words[0], 1, 2)) {
    auto m = month_from_name(words[1]);
    auto y = parse_uint(words[2], 1, 4);
    if (m && y) return make_date(*y, *m, *d);
    return std::nullopt;
  }
  // Month D, YYYY
  if (auto m = month_from_name(words[0])) {
    auto d = parse_uint(words[1], 1, 2);
    auto y = parse_uint(words[2], 1, 4);
    if (d && y) return make_date(*y, *m, *d);
  }
  return std::nullopt;
}

std::string format_date(Date d) {
  std::string y = std::to_string(d.year);
  while (y.size() < 4) y = "0" + y;
  return y + "-" + two_digits(d.month) + "-" + two_digits(d.day);
}

std::optional<Interval> parse_interval(std::string_view text) {
  text = trim(text);
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.remove_prefix(1);
  }
  auto c1 = text.find(':');
  if (c1 == std::string_view::npos) return std::nullopt;
  auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) return std::nullopt;
  auto h = parse_uint(text.substr(0, c1), 1, 6);
  auto m = parse_uint(text.substr(c1 + 1, c2 - c1 - 1), 2, 2);
  auto s = parse_uint(text.substr(c2 + 1), 2, 2);
  if (!h || !m || !s || *m > 59 || *s > 59) return std::nullopt;
  std::int64_t total = static_cast<std::int64_t>(*h) * 3600 + *m * 60 + *s;
  return Interval{negative ? -total : total};
}

std::string format_interval(Interval iv) {
  std::int64_t s = iv.seconds;
  std::string sign;
  if (s < 0) {
    sign = "-";
    s = -s;
  }
  return sign + std::to_string(s / 3600) + ":" + two_digits((s / 60) % 60) + ":" + two_digits(s % 60);
}

std::optional<TimeOfDay> parse_time(std::string_view text) {
  text = trim(text);
  auto c1 = text.find(':');
  if (c1 == std::string_view::npos) return std::nullopt;
  auto c2 = text.find(':', c1 + 1);
  auto h = parse_uint(text.substr(0, c1), 1, 2);
  auto m = parse_uint(text.substr(c1 + 1, c2 == std::string_view::npos ? std::string_view::npos : c2 - c1 - 1), 2, 2);
  std::optional<int> s = 0;
  if (c2 != std::string_view::npos) s = parse_uint(text.substr(c2 + 1), 2, 2);
  if (!h || !m || !s || *h > 23 || *m > 59 || *s > 59) return std::nullopt;
  return TimeOfDay{*h * 3600 + *m * 60 + *s};
}

std::string format_time(TimeOfDay t) {
  return two_digits(t.seconds / 3600) + ":" + two_digits((t.seconds / 60) % 60) + ":" +
         two_digits(t.seconds % 60);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

// ---------------------------------------------------------------------------
// Value

double Value::as_number() const {
  if (kind() == ValueKind::kInt) return static_cast<double>(as_int());
  return as_float();
}

std::string Value::to_string() const {
  switch (kind()) {
    case ValueKind::kNull: return "NULL";
    case ValueKind::kInt: return std::to_string(as_int());
    case ValueKind::kFloat: {
      // Integral floats display without the trailing ".0" (4.0 -> 4).
      double v = as_float();
      if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
        return std::to_string(static_cast<std::int64_t>(v));
      }
      return format_double(v);
    }
    case ValueKind::kBool: return as_bool() ? "true" : "false";
    case ValueKind::kText: return as_text();
    case ValueKind::kDate: return format_date(as_date());
    case ValueKind::kTime: return format_time(as_time());
    case ValueKind::kInterval: return format_interval(as_interval());
    case ValueKind::kArray: {
      std::string out = "{";
      const auto& items = as_array();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i].to_string();
      }
      return out + "}";
    }
  }
  return {};
}

std::optional<std::strong_ordering> compare_values(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return std::nullopt;
  if (a.is_numeric() && b.is_numeric()) {
    if (a.kind() == ValueKind::kInt && b.kind() == ValueKind::kInt) return a.as_int() <=> b.as_int();
    double x = a.as_number(), y = b.as_number();
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    if (x == y) return std::strong_ordering::equal;
    return std::nullopt;  // NaN
  }
  if (a.kind() != b.kind()) return std::nullopt;
  switch (a.kind()) {
    case ValueKind::kBool: return a.as_bool() <=> b.as_bool();
    case ValueKind::kText: {
      int c = a.as_text().compare(b.as_text());
      return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    case ValueKind::kDate: return a.as_date() <=> b.as_date();
    case ValueKind::kTime: return a.as_time() <=> b.as_time();
    case ValueKind::kInterval: return a.as_interval() <=> b.as_interval();
    case ValueKind::kArray: {
      const auto& x = a.as_array();
      const auto& y = b.as_array();
      for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        auto c = compare_values(x[i], y[i]);
        if (!c) return std::nullopt;
        if (*c != std::strong_ordering::equal) return c;
      }
      return x.size() <=> y.size();
    }
    default: return std::nullopt;
  }
}

bool value_less(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.is_null()) return false;
  if (a.kind() == ValueKind::kFloat) {
    // NaN sorts after every number so the order stays strict-weak.
    double x = a.as_float(), y = b.as_float();
    if (std::isnan(x) || std::isnan(y)) return !std::isnan(x) && std::isnan(y);
    return x < y;
  }
  if (a.kind() == ValueKind::kArray) {
    const auto& x = a.as_array();
    const auto& y = b.as_array();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), value_less);
  }
  auto c = compare_values(a, b);
  return c && *c == std::strong_ordering::less;
}

// ---------------------------------------------------------------------------
// Casting

namespace {

[[noreturn]] void cast_fail(const Value& v, const SemanticType& t, std::string_view why = {}) {
  std::string msg = "cannot cast '" + v.to_string() + "' to " + t.to_string();
  if (!why.empty()) msg += ": " + std::string(why);
  throw Error(ErrorCode::kCast, msg);
}

std::optional<std::int64_t> parse_int64(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double to_double(const Value& v, const SemanticType& t) {
  switch (v.kind()) {
    case ValueKind::kInt: return static_cast<double>(v.as_int());
    case ValueKind::kFloat: return v.as_float();
    case ValueKind::kBool: return v.as_bool() ? 1.0 : 0.0;
    case ValueKind::kText:
      if (auto d = parse_double(v.as_text())) return *d;
      cast_fail(v, t, "not a number");
    default: cast_fail(v, t);
  }
}

Value cast_scalar(const Value& v, const SemanticType& t) {
  switch (t.kind) {
    case TypeKind::kNull: cast_fail(v, t);
    case TypeKind::kInt: {
      if (v.kind() == ValueKind::kInt) return v;
      if (v.kind() == ValueKind::kText) {
        if (auto i = parse_int64(v.as_text())) return Value::integer(*i);
        cast_fail(v, t, "not an integer");
      }
      double d = to_double(v, t);
      double r = std::round(d);
      if (!std::isfinite(r) || r < -9.2233720368547758e18 || r >= 9.2233720368547758e18)
        cast_fail(v, t, "out of range");
      return Value::integer(static_cast<std::int64_t>(r));
    }
    case TypeKind::kFloat:
      if (v.kind() == ValueKind::kFloat) return v;
      return Value::floating(to_double(v, t));
    case TypeKind::kNumeric: {
      double d = to_double(v, t);
      if (t.precision > 0) {
        double factor = std::pow(10.0, t.scale);
        d = std::round(d * factor) / factor;
        double bound = std::pow(10.0, t.precision - t.scale);
        if (std::fabs(d) >= bound) cast_fail(v, t, "numeric field overflow");
      }
      return Value::floating(d);
    }
    case TypeKind::kBoolean: {
      if (v.kind() == ValueKind::kBool) return v;
      if (v.kind() == ValueKind::kInt && (v.as_int() == 0 || v.as_int() == 1))
        return Value::boolean(v.as_int() == 1);
      if (v.kind() == ValueKind::kText) {
        std::string s = to_lower(trim(v.as_text()));
        if (s == "true" || s == "t" || s == "yes" || s == "y" || s == "1") return Value::boolean(true);
        if (s == "false" || s == "f" || s == "no" || s == "n" || s == "0") return Value::boolean(false);
      }
      cast_fail(v, t);
    }
    case TypeKind::kText:
    case TypeKind::kFreeText:
      if (v.kind() == ValueKind::kText) return v;
      if (v.kind() == ValueKind::kArray) cast_fail(v, t);
      return Value::text(v.to_string());
    case TypeKind::kEnum: {
      std::string s = v.kind() == ValueKind::kText ? v.as_text() : v.to_string();
      if (t.domain) {
        if (auto idx = t.domain->find(trim(s))) return Value::text(t.domain->values()[*idx]);
      }
      cast_fail(v, t, "not a permitted value");
    }
    case TypeKind::kDate:
      if (v.kind() == ValueKind::kDate) return v;
      if (v.kind() == ValueKind::kText) {
        if (auto d = parse_date(v.as_text())) return Value::date(*d);
      }
      cast_fail(v, t);
    case TypeKind::kTime:
      if (v.kind() == ValueKind::kTime) return v;
      if (v.kind() == ValueKind::kText) {
        if (auto tm = parse_time(v.as_text())) return Value::time(*tm);
      }
      cast_fail(v, t);
    case TypeKind::kInterval:
      if (v.kind() == ValueKind::kInterval) return v;
      if (v.kind() == ValueKind::kTime) return Value::interval(Interval{v.as_time().seconds});
      if (v.kind() == ValueKind::kText) {
        if (auto iv = parse_interval(v.as_text())) return Value::interval(*iv);
      }
      cast_fail(v, t);
  }
  cast_fail(v, t);
}

}  // namespace

Value cast_value(const Value& v, const SemanticType& target) {
  if (v.is_null()) return v;
  if (target.array) {
    if (v.kind() != ValueKind::kArray) cast_fail(v, target, "not an array");
    ValueList out;
    out.reserve(v.as_array().size());
    SemanticType element = target.element();
    for (const auto& item : v.as_array()) out.push_back(cast_value(item, element));
    return Value::array(std::move(out));
  }
  if (v.kind() == ValueKind::kArray) cast_fail(v, target, "array to scalar");
  return cast_scalar(v, target);
}

bool value_fits(const Value& v, const SemanticType& t) {
  if (v.is_null()) return true;
  if (t.array) {
    if (v.kind() != ValueKind::kArray) return false;
    SemanticType e = t.element();
    for (const auto& item : v.as_array())
      if (!value_fits(item, e)) return false;
    return true;
  }
  switch (t.kind) {
    case TypeKind::kInt: return v.kind() == ValueKind::kInt;
    case TypeKind::kFloat:
    case TypeKind::kNumeric: return v.kind() == ValueKind::kFloat;
    case TypeKind::kBoolean: return v.kind() == ValueKind::kBool;
    case TypeKind::kText:
    case TypeKind::kFreeText: return v.kind() == ValueKind::kText;
    case TypeKind::kEnum: return v.kind() == ValueKind::kText && t.domain && t.domain->contains(v.as_text());
    case TypeKind::kDate: return v.kind() == ValueKind::kDate;
    case TypeKind::kTime: return v.kind() == ValueKind::kTime;
    case TypeKind::kInterval: return v.kind() == ValueKind::kInterval;
    case TypeKind::kNull: return false;
  }
  return false;
}

}  // namespace suql
