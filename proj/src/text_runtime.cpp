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

#include "suql/text_runtime.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <set>

#include "suql/error.hpp"
#include "suql/planner.hpp"
#include "suql/strings.hpp"

namespace suql {

namespace {

std::optional<double> parse_number(std::string_view s) {
  std::string cleaned;
  for (char c : s)
    if (c != ',') cleaned += c;
  if (cleaned.empty()) return std::nullopt;
  double d = 0;
  auto [ptr, ec] = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), d);
  if (ec != std::errc() || ptr != cleaned.data() + cleaned.size()) return std::nullopt;
  return d;
}

bool holds(std::strong_ordering ord, CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return ord == 0;
    case CmpOp::kNe: return ord != 0;
    case CmpOp::kLt: return ord < 0;
    case CmpOp::kLe: return ord <= 0;
    case CmpOp::kGt: return ord > 0;
    case CmpOp::kGe: return ord >= 0;
    case CmpOp::kILike: return false;
  }
  return false;
}

std::strong_ordering order_double(double a, double b) {
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string numbered(const std::vector<std::string>& items, int base) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i)
    out += "[" + std::to_string(static_cast<int>(i) + base) + "] " + items[i] + "\n";
  return out;
}

bool all_blank(const std::vector<std::string>& docs) {
  return std::all_of(docs.begin(), docs.end(), [](const std::string& d) { return trim(d).empty(); });
}

std::string op_text(CmpOp op) { return std::string(cmp_op_name(op)); }

}  // namespace

bool compare_answer_text(const std::string& answer, CmpOp op, const std::string& literal) {
  std::string a(trim(answer)), l(trim(literal));
  switch (op) {
    case CmpOp::kEq: return iequals(a, l);
    case CmpOp::kNe: return !iequals(a, l);
    case CmpOp::kILike: return ilike_match(a, l);
    default: break;
  }
  if (auto x = parse_number(a), y = parse_number(l); x && y) return holds(order_double(*x, *y), op);
  if (auto x = parse_date(a), y = parse_date(l); x && y) return holds(*x <=> *y, op);
  return holds(to_lower(a) <=> to_lower(l), op);
}

// --- mock ---------------------------------------------------------------------

namespace {

bool pattern_match(const std::string& pattern, const std::optional<std::regex>& re, const std::string& text,
                   std::smatch* captures) {
  if (re) {
    if (captures) return std::regex_search(text, *captures, *re);
    return std::regex_search(text, *re);
  }
  return pattern.empty() || icontains(text, pattern);
}

std::optional<std::regex> compile_pattern(const std::string& pattern) {
  if (pattern.rfind("re:", 0) != 0) return std::nullopt;
  try {
    return std::regex(pattern.substr(3), std::regex::icase | std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::kData, "invalid mock rule regex '" + pattern + "': " + e.what());
  }
}

}  // namespace

MockBackend::MockBackend(std::vector<MockRule> rules, std::map<std::string, std::vector<std::string>> synonyms)
    : rules_(std::move(rules)) {
  for (const auto& r : rules_) compiled_.push_back(Compiled{r, compile_pattern(r.doc_pattern), compile_pattern(r.question_pattern)});
  for (auto& [k, v] : synonyms) synonyms_[to_lower(trim(k))] = std::move(v);
  nlohmann::ordered_json digest_src = nlohmann::ordered_json::array();
  for (const auto& r : rules_) digest_src.push_back({r.doc_pattern, r.question_pattern, r.response});
  digest_src.push_back(synonyms_);
  id_ = "mock:" + sha256_hex(digest_src.dump()).substr(0, 16);
}

std::shared_ptr<MockBackend> MockBackend::from_json(const nlohmann::json& j) {
  std::vector<MockRule> rules;
  for (const auto& r : j.value("rules", nlohmann::json::array()))
    rules.push_back(MockRule{r.value("doc", ""), r.value("question", ""), r.at("response").get<std::string>()});
  std::map<std::string, std::vector<std::string>> synonyms;
  if (j.contains("synonyms"))
    for (const auto& [k, v] : j.at("synonyms").items()) synonyms[k] = v.get<std::vector<std::string>>();
  return std::make_shared<MockBackend>(std::move(rules), std::move(synonyms));
}

std::string MockBackend::answer(const std::vector<std::string>& documents, const std::string& question,
                                const std::string& /*type_hint*/) const {
  if (all_blank(documents)) return kNoInfo;
  std::string text = join(documents, "\n");
  for (const auto& c : compiled_) {
    if (!pattern_match(c.rule.question_pattern, c.question_re, question, nullptr)) continue;
    std::smatch m;
    if (!pattern_match(c.rule.doc_pattern, c.doc_re, text, &m)) continue;
    std::string out;
    const std::string& resp = c.rule.response;
    for (std::size_t i = 0; i < resp.size(); ++i) {
      if (resp[i] == '$' && i + 1 < resp.size() && std::isdigit(static_cast<unsigned char>(resp[i + 1]))) {
        std::size_t group = static_cast<std::size_t>(resp[i + 1] - '0');
        if (c.doc_re && group < m.size()) out += m[group].str();
        ++i;
        continue;
      }
      out += resp[i];
    }
    return out;
  }
  return kNoInfo;
}

bool MockBackend::filter_check(const std::vector<std::string>& documents, const std::string& question, CmpOp op,
                               const std::string& literal, const std::string& type_hint) const {
  return compare_answer_text(answer(documents, question, type_hint), op, literal);
}

std::vector<std::size_t> MockBackend::classify_indices(const std::string& value, const EnumDomain& domain) const {
  std::set<std::size_t> out;
  if (auto idx = domain.find(trim(value))) out.insert(*idx);
  auto it = synonyms_.find(to_lower(trim(value)));
  if (it != synonyms_.end())
    for (const auto& v : it->second)
      if (auto idx = domain.find(v)) out.insert(*idx);
  return {out.begin(), out.end()};
}

// --- http ---------------------------------------------------------------------

HttpBackend::HttpBackend(CompletionConfig config, std::shared_ptr<Transport> transport, PromptTemplates prompts)
    : config_(std::move(config)), transport_(std::move(transport)), prompts_(std::move(prompts)) {}

std::string HttpBackend::complete(const std::string& prompt) const {
  return http_complete({ChatMessage{"user", prompt}}, config_, *transport_);
}

std::string HttpBackend::answer(const std::vector<std::string>& documents, const std::string& question,
                                const std::string& type_hint) const {
  if (all_blank(documents)) return kNoInfo;
  std::string prompt = render_prompt(
      prompts_.answer, {{"documents", numbered(documents, 1)}, {"question", question}, {"type_hint", type_hint}});
  return std::string(trim(complete(prompt)));
}

bool HttpBackend::filter_check(const std::vector<std::string>& documents, const std::string& question, CmpOp op,
                               const std::string& literal, const std::string& /*type_hint*/) const {
  if (all_blank(documents)) return compare_answer_text(kNoInfo, op, literal);
  std::string clause = "answer " + op_text(op) + " " + quote_string(literal);
  std::string prompt = render_prompt(
      prompts_.filter, {{"documents", numbered(documents, 1)}, {"question", question}, {"clause", clause}});
  return parse_verdict(complete(prompt));
}

std::vector<std::size_t> HttpBackend::classify_indices(const std::string& value, const EnumDomain& domain) const {
  std::string prompt = render_prompt(prompts_.classify, {{"value", value}, {"choices", numbered(domain.values(), 0)}});
  std::vector<std::string> dropped;
  auto out = parse_indices(complete(prompt), domain.size(), &dropped);
  for (const auto& d : dropped)
    std::clog << "warning: classifier returned out-of-range index " << d << " for domain " << domain.name() << "\n";
  return out;
}

std::vector<std::size_t> HttpBackend::parse_indices(const std::string& text, std::size_t domain_size,
                                                    std::vector<std::string>* dropped) {
  static const std::regex kNumber(R"(-?\d+)");
  std::set<std::size_t> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kNumber); it != std::sregex_iterator(); ++it) {
    std::string tok = it->str();
    long long n = -1;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
    if (ec == std::errc() && n >= 0 && static_cast<unsigned long long>(n) < domain_size) {
      out.insert(static_cast<std::size_t>(n));
    } else if (dropped) {
      dropped->push_back(tok);
    }
  }
  return {out.begin(), out.end()};
}

bool HttpBackend::parse_verdict(const std::string& text) {
  std::string t = to_lower(text);
  if (t.find("incorrect") != std::string::npos) return false;
  if (t.find("correct") != std::string::npos) return true;
  throw Error(ErrorCode::kBackend, "filter verdict is neither correct nor incorrect: '" + std::string(trim(text)) + "'");
}

// --- runtime --------------------------------------------------------------------

TextRuntime::TextRuntime(std::shared_ptr<const AnswererBackend> backend, std::optional<std::filesystem::path> cache_file)
    : backend_(std::move(backend)), cache_file_(std::move(cache_file)) {
  if (!cache_file_ || !std::filesystem::exists(*cache_file_)) return;
  std::ifstream in(*cache_file_);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      cache_[j.at("key").get<std::string>()] = j.at("result").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      warnings_.push_back("skipped corrupt cache line in " + cache_file_->string());
    }
  }
}

std::string TextRuntime::cached(const std::string& op, const std::string& key_material,
                                const std::function<std::string()>& compute) {
  std::string key = sha256_hex(backend_->id() + '\x1f' + op + '\x1f' + key_material);
  std::unique_lock lk(mu_);
  for (;;) {
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++cache_hits_;
      return it->second;
    }
    if (!in_flight_.count(key)) break;
    cv_.wait(lk);
  }
  in_flight_[key] = true;
  lk.unlock();
  std::string result;
  try {
    ++backend_calls_;
    result = compute();
  } catch (...) {
    lk.lock();
    in_flight_.erase(key);
    cv_.notify_all();
    throw;
  }
  lk.lock();
  cache_[key] = result;
  in_flight_.erase(key);
  if (cache_file_) {
    std::ofstream out(*cache_file_, std::ios::app);
    nlohmann::ordered_json line{{"key", key}, {"operation", op}, {"result", result}};
    out << line.dump() << '\n';
  }
  cv_.notify_all();
  return result;
}

std::string TextRuntime::answer(const std::vector<std::string>& documents, const std::string& question,
                                const std::string& type_hint) {
  if (trim(question).empty()) throw Error(ErrorCode::kRuntime, "answer() question must be non-empty");
  nlohmann::json material{documents, question, type_hint};
  return cached("answer", material.dump(), [&] { return backend_->answer(documents, question, type_hint); });
}

std::string TextRuntime::summary(const std::vector<std::string>& documents) {
  return answer(documents, kSummaryQuestion);
}

bool TextRuntime::filter_check(const std::vector<std::string>& documents, const std::string& question, CmpOp op,
                               const std::string& literal, const std::string& type_hint) {
  nlohmann::json material{documents, question, op_text(op), literal, type_hint};
  return cached("filter", material.dump(), [&] {
           return backend_->filter_check(documents, question, op, literal, type_hint) ? "1" : "0";
         }) == "1";
}

std::vector<std::string> TextRuntime::classify(const std::string& value, const EnumDomain& domain) {
  nlohmann::json material{value, domain.name(), domain.values()};
  std::string encoded = cached("classify", material.dump(), [&] {
    std::vector<std::string> parts;
    for (auto i : backend_->classify_indices(value, domain)) parts.push_back(std::to_string(i));
    return join(parts, ",");
  });
  std::set<std::size_t> idx;
  if (auto exact = domain.find(trim(value))) idx.insert(*exact);
  std::size_t start = 0;
  while (start < encoded.size()) {
    std::size_t end = encoded.find(',', start);
    if (end == std::string::npos) end = encoded.size();
    std::size_t n = std::stoul(encoded.substr(start, end - start));
    if (n < domain.size()) {
      idx.insert(n);
    } else {
      std::lock_guard lk(mu_);
      warnings_.push_back("classify: dropped out-of-range index " + std::to_string(n));
    }
    start = end + 1;
  }
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(domain.values()[i]);
  return out;
}

std::vector<std::string> TextRuntime::take_warnings() {
  std::lock_guard lk(mu_);
  return std::exchange(warnings_, {});
}

std::string type_hint_for(const SemanticType& target) {
  if (target.array) return {};
  switch (target.kind) {
    case TypeKind::kDate: return "Answer with a date.";
    case TypeKind::kInt:
    case TypeKind::kFloat:
    case TypeKind::kNumeric: return "Answer with a number.";
    case TypeKind::kInterval: return "Answer with a duration written as H:MM:SS.";
    case TypeKind::kTime: return "Answer with a time of day written as HH:MM.";
    case TypeKind::kBoolean: return "Answer Yes or No.";
    default: return {};
  }
}

}  // namespace suql
