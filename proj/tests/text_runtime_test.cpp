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

#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <thread>

#include "fake_transport.hpp"
#include "suql/error.hpp"
#include "suql/text_runtime.hpp"
#include "test_env.hpp"

using namespace suql;

namespace {

/// Counts calls and sleeps briefly so concurrent callers overlap.
class SlowBackend : public AnswererBackend {
 public:
  std::string id() const override { return "slow"; }
  std::string answer(const std::vector<std::string>& docs, const std::string&, const std::string&) const override {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    return docs.empty() ? "none" : docs[0];
  }
  bool filter_check(const std::vector<std::string>&, const std::string&, CmpOp, const std::string&,
                    const std::string&) const override {
    return true;
  }
  std::vector<std::size_t> classify_indices(const std::string&, const EnumDomain& d) const override {
    return {d.size() + 3, 0};
  }
  mutable std::atomic<int> calls{0};
};

}  // namespace

TEST(Mock, FirstMatchingRuleWins) {
  MockBackend m({{"rio", "where", "Rio de Janeiro"}, {"", "where", "somewhere"}});
  EXPECT_EQ(m.answer({"Held in Rio."}, "Where is it held?", ""), "Rio de Janeiro");
  EXPECT_EQ(m.answer({"Held in Paris."}, "where is it held?", ""), "somewhere");
  EXPECT_EQ(m.answer({"x"}, "when?", ""), kNoInfo);
  EXPECT_EQ(m.answer({"", " "}, "where?", ""), kNoInfo);
}

TEST(Mock, RegexCapturesExpand) {
  MockBackend m({{R"(re:born (?:on )?(\d+ \w+ \d{4}))", "born", "$1"}});
  EXPECT_EQ(m.answer({"She was born on 21 November 1994 in Yangon."}, "when is this person born?", ""), "21 November 1994");
}

TEST(Mock, FilterComparesAnswerText) {
  MockBackend m({{"parking is easy", "parking", "Yes"}, {"", "parking", "No"}});
  EXPECT_TRUE(m.filter_check({"Parking is easy here."}, "is parking easy?", CmpOp::kEq, "yes", ""));
  EXPECT_FALSE(m.filter_check({"Loud."}, "is parking easy?", CmpOp::kEq, "Yes", ""));
}

TEST(Mock, ClassifyUsesSynonymsPlusExactMember) {
  auto d = EnumDomain::make("cuisines", {"cafe", "coffee & tea", "thai"});
  MockBackend m({}, {{"Coffee", {"coffee & tea", "cafe", "not-in-domain"}}});
  EXPECT_EQ(m.classify_indices("coffee", *d), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(m.classify_indices("THAI", *d), (std::vector<std::size_t>{2}));
  EXPECT_TRUE(m.classify_indices("pizza", *d).empty());
}

TEST(Mock, InvalidRegexIsDataError) {
  try {
    MockBackend m({{"re:(", "", "x"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kData);
  }
}

TEST(AnswerText, Comparisons) {
  EXPECT_TRUE(compare_answer_text(" Yes ", CmpOp::kEq, "yes"));
  EXPECT_TRUE(compare_answer_text("2,388,000", CmpOp::kGt, "1000000"));
  EXPECT_TRUE(compare_answer_text("21 November 1994", CmpOp::kLt, "1995-01-01"));
  EXPECT_TRUE(compare_answer_text("warm and welcoming", CmpOp::kILike, "%warm%"));
  EXPECT_FALSE(compare_answer_text("no info", CmpOp::kEq, "Yes"));
}

TEST(Runtime, SummaryIsAnswerWithFixedQuestion) {
  TextRuntime rt(MockBackend::from_json({{"rules", {{{"question", "summary of this document"}, {"response", "S"}}}}}));
  EXPECT_EQ(rt.summary({"doc"}), "S");
  EXPECT_EQ(rt.answer({"doc"}, "what is the summary of this document?"), "S");
  EXPECT_EQ(rt.backend_calls(), 1u);
  EXPECT_EQ(rt.cache_hits(), 1u);
}

TEST(Runtime, EmptyQuestionRejected) {
  TextRuntime rt(std::make_shared<MockBackend>(std::vector<MockRule>{}));
  EXPECT_THROW(rt.answer({"d"}, "  "), Error);
}

TEST(Runtime, SingleFlightUnderConcurrency) {
  auto backend = std::make_shared<SlowBackend>();
  TextRuntime rt(backend);
  std::vector<std::thread> threads;
  std::vector<std::string> results(16);
  for (int i = 0; i < 16; ++i) threads.emplace_back([&, i] { results[i] = rt.answer({"same"}, "q"); });
  for (auto& t : threads) t.join();
  EXPECT_EQ(backend->calls.load(), 1);
  for (const auto& r : results) EXPECT_EQ(r, "same");
}

TEST(Runtime, PersistentCacheSurvivesRestart) {
  suql::testing::TempDir dir;
  auto file = dir.path / "cache.jsonl";
  auto backend = std::make_shared<SlowBackend>();
  {
    TextRuntime rt(backend, file);
    rt.answer({"a"}, "q");
    rt.answer({"b"}, "q");
  }
  {
    std::ofstream out(file, std::ios::app);
    out << "{not json\n";
  }
  TextRuntime again(backend, file);
  EXPECT_EQ(again.answer({"a"}, "q"), "a");
  EXPECT_EQ(backend->calls.load(), 2);
  EXPECT_EQ(again.take_warnings().size(), 1u);
}

TEST(Runtime, ClassifyDropsOutOfRangeIndicesWithWarning) {
  TextRuntime rt(std::make_shared<SlowBackend>());
  auto d = EnumDomain::make("e", {"a", "b"});
  EXPECT_EQ(rt.classify("b", *d), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rt.take_warnings().size(), 1u);
}

TEST(HttpBackendTest, AnswerRendersDocumentsAndQuestion) {
  auto t = std::make_shared<suql::testing::FakeTransport>();
  t->push_completion("  Rio de Janeiro \n");
  HttpBackend b(suql::testing::fake_config(), t);
  EXPECT_EQ(b.answer({"d1", "d2"}, "where?", "Answer with a date."), "Rio de Janeiro");
  std::string prompt = t->last_prompt();
  EXPECT_NE(prompt.find("[1] d1"), std::string::npos);
  EXPECT_NE(prompt.find("[2] d2"), std::string::npos);
  EXPECT_NE(prompt.find("where?"), std::string::npos);
  EXPECT_EQ(t->urls.back(), "http://llm.invalid/v1/chat/completions");
  auto body = nlohmann::json::parse(t->bodies.back());
  EXPECT_EQ(body["temperature"], 0);
}

TEST(HttpBackendTest, BlankDocumentsSkipTheCall) {
  auto t = std::make_shared<suql::testing::FakeTransport>();
  HttpBackend b(suql::testing::fake_config(), t);
  EXPECT_EQ(b.answer({""}, "where?", ""), kNoInfo);
  EXPECT_TRUE(t->bodies.empty());
}

TEST(HttpBackendTest, FilterVerdicts) {
  auto t = std::make_shared<suql::testing::FakeTransport>();
  t->push_completion("The statement is correct.");
  t->push_completion("Incorrect.");
  t->push_completion("maybe");
  HttpBackend b(suql::testing::fake_config(), t);
  EXPECT_TRUE(b.filter_check({"d"}, "q", CmpOp::kEq, "Yes", ""));
  EXPECT_FALSE(b.filter_check({"d"}, "q", CmpOp::kEq, "Yes", ""));
  EXPECT_THROW(b.filter_check({"d"}, "q", CmpOp::kEq, "Yes", ""), Error);
}

TEST(HttpBackendTest, ParseIndices) {
  std::vector<std::string> dropped;
  EXPECT_EQ(HttpBackend::parse_indices("2, 5, 99, -1, 2", 6, &dropped), (std::vector<std::size_t>{2, 5}));
  EXPECT_EQ(dropped, (std::vector<std::string>{"99", "-1"}));
}

TEST(Prompts, OverridesFromDirectory) {
  suql::testing::TempDir dir;
  std::ofstream(dir.path / "answer.prompt") << "Q={{ question }}";
  PromptTemplates p = PromptTemplates::load(dir.path);
  EXPECT_EQ(p.answer, "Q={{ question }}");
  EXPECT_EQ(p.filter, PromptTemplates::defaults().filter);
  EXPECT_EQ(render_prompt(p.answer, {{"question", "why"}}), "Q=why");
  EXPECT_EQ(render_prompt("{{missing}}x", {}), "x");
}
