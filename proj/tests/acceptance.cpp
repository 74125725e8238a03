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

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "dialogue_check.hpp"
#include "generators.hpp"
#include "naive_eval.hpp"
#include "suql/agent.hpp"
#include "suql/database.hpp"
#include "suql/error.hpp"
#include "suql/executor.hpp"
#include "suql/metrics.hpp"
#include "suql/parser.hpp"
#include "suql/planner.hpp"
#include "suql/retrieval.hpp"
#include "test_env.hpp"

using namespace suql;
using suql::testing::FixtureEnv;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

/// Runs a criterion, turning unexpected exceptions into a FAIL line.
void criterion(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    report(name, ok, detail);
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<std::string> names(const ResultSet& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs.rows) out.push_back(r.at(0).to_string());
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool dnf_truth(const std::vector<std::vector<PlanAtom>>& dnf, unsigned a) {
  for (const auto& conj : dnf) {
    bool all = true;
    for (const auto& atom : conj) {
      bool v = (a >> suql::testing::formula_var(atom.pred)) & 1u;
      if (atom.negated == v) all = false;
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

int main() {
  criterion("language_coverage", [] {
    const std::vector<std::string> corpora = {"flagbearers", "restaurants", "hybridqa"};
    const std::vector<std::string> extra = {
        "SELECT 1",
        "SELECT name, rating FROM restaurants WHERE rating >= 4.5 AND price IN ('cheap', 'moderate') ORDER BY rating DESC, name LIMIT 5",
        "SELECT COUNT(*), AVG(rating), MAX(num_reviews) FROM restaurants WHERE location ILIKE '%city%'",
        "SELECT r.name, s FROM restaurants AS r, unnest(reviews) AS s WHERE r.location = 'Chicago'",
        "SELECT name FROM restaurants WHERE cuisines @> ARRAY['thai'] OR NOT (location = 'D.C.')",
        "SELECT summary(reviews) FROM restaurants WHERE name = 'Daigo'",
        "SELECT answer(reviews, 'what is the atmosphere?') FROM restaurants WHERE name = 'Daigo'",
        "EXPLAIN SELECT name FROM restaurants WHERE answer(reviews, 'q') = 'Yes'",
    };
    auto t0 = Clock::now();
    std::size_t ran = 0;
    std::vector<std::string> errors;
    auto round_trip = [&](std::string text) {
      if (text.rfind("EXPLAIN ", 0) == 0) text = text.substr(8);
      std::string once = print(parse(text));
      if (print(parse(once)) != once) errors.push_back("print/parse round trip differs: " + text);
    };
    for (const auto& id : corpora) {
      FixtureEnv env(id);
      for (const auto& q : env.fixture.queries) {
        try {
          round_trip(q.text);
          env.run(q.text);
          ++ran;
        } catch (const Error& e) {
          errors.push_back(q.id + ": " + e.what());
        }
      }
      if (id != "restaurants") continue;
      for (const auto& q : extra) {
        try {
          round_trip(q);
          env.run(q);
          ++ran;
        } catch (const Error& e) {
          errors.push_back(q + ": " + e.what());
        }
      }
    }
    double s = seconds_since(t0);
    return std::pair{errors.empty() && s < 1.0,
                     std::to_string(ran) + " statements in " + fmt(s) + " s" + (errors.empty() ? "" : "; first error " + errors[0])};
  });

  criterion("dnf_equivalence", [] {
    suql::testing::Rng rng(7);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      Predicate p = suql::testing::random_formula(rng, 4, 4);
      auto dnf = to_dnf(to_nnf(p), 64);
      if (!dnf) {
        ++bad;
        continue;
      }
      for (unsigned a = 0; a < 16; ++a)
        if (dnf_truth(*dnf, a) != suql::testing::eval_formula(p, a)) {
          ++bad;
          break;
        }
    }
    return std::pair{bad == 0, "1000 formulas, " + std::to_string(bad) + " mismatches over all 16 assignments"};
  });

  criterion("executor_oracle", [] {
    suql::testing::Rng rng(99);
    TextRuntime rt(std::make_shared<MockBackend>(std::vector<MockRule>{}));
    auto t0 = Clock::now();
    int bad = 0;
    std::string first;
    for (int i = 0; i < 500; ++i) {
      TableSchema schema = suql::testing::random_schema(rng);
      auto table = std::make_shared<Table>(
          suql::testing::random_table(schema, static_cast<std::size_t>(suql::testing::pick(rng, 0, 40)), rng));
      Catalog cat;
      cat.add(table);
      std::string q = suql::testing::random_query(schema, rng);
      Database db(cat);
      QueryOutcome got = run_query(db, rt, q);
      if (!suql::testing::multiset_equal(got.result.rows, suql::testing::naive_execute(parse(q), cat))) {
        if (!bad) first = q;
        ++bad;
      }
    }
    double s = seconds_since(t0);
    return std::pair{bad == 0 && s < 60.0, "500 random (schema, table, query) triples, " + std::to_string(bad) +
                                               " mismatches, " + fmt(s) + " s" + (bad ? "; first " + first : "")};
  });

  criterion("retrieval_pruning_budget", [] {
    FixtureEnv env("stress");
    const std::string q = env.fixture.queries.at(0).text;
    QueryOptions on, off;
    off.planner.prune = false;
    QueryOutcome a = env.run(q, on);
    env.reset_runtime();
    QueryOutcome b = env.run(q, off);
    bool ok = a.result.stats.answer_calls <= 20 && b.result.stats.answer_calls == 100 && a.result.rows == b.result.rows &&
              a.result.rows.size() == 1;
    return std::pair{ok, "answer calls " + std::to_string(a.result.stats.answer_calls) + " with pruning (k=20) vs " +
                             std::to_string(b.result.stats.answer_calls) + " without; results identical=" +
                             (a.result.rows == b.result.rows ? "yes" : "no")};
  });

  criterion("predicate_ordering", [] {
    FixtureEnv env("flagbearers");
    // Gender + participation query with the answer conjunct written first.
    const std::string q =
        "SELECT \"Flag Bearer\" FROM table WHERE answer(\"Flag Bearer Info\", 'did this person participate in Men''s "
        "100kg event?') = 'Yes' AND \"Gender\" = 'Male'";
    QueryOptions on, off;
    off.planner.order_conjuncts = false;
    QueryOutcome a = env.run(q, on);
    env.reset_runtime();
    QueryOutcome b = env.run(q, off);
    bool ok = a.result.stats.answer_calls <= 4 && b.result.stats.answer_calls == 7 && names(a.result) == names(b.result);
    return std::pair{ok, "answer calls " + std::to_string(a.result.stats.answer_calls) + " ordered vs " +
                             std::to_string(b.result.stats.answer_calls) + " as written"};
  });

  criterion("enum_overloading", [] {
    FixtureEnv env("restaurants");
    QueryOutcome coffee = env.run("SELECT name FROM restaurants WHERE 'coffee' = ANY (cuisines)");
    QueryOutcome direct =
        env.run("SELECT name FROM restaurants WHERE 'coffee & tea' = ANY (cuisines) OR 'cafe' = ANY (cuisines)");
    env.reset_runtime();
    QueryOutcome cheap = env.run("SELECT name FROM restaurants WHERE price = 'cheap'");
    bool ok = names(coffee.result) == names(direct.result) && !coffee.result.rows.empty() &&
              coffee.result.stats.classify_calls == 1 && cheap.result.stats.classify_calls == 0;
    return std::pair{ok, "'coffee' matched " + std::to_string(coffee.result.rows.size()) + " rows (members matched " +
                             std::to_string(direct.result.rows.size()) + "); classify calls coffee=" +
                             std::to_string(coffee.result.stats.classify_calls) +
                             " cheap=" + std::to_string(cheap.result.stats.classify_calls)};
  });

  criterion("aggregate_score", [] {
    Fixture fx = load_fixture("stress");
    const Table& t = *fx.catalog.get("venues");
    HashingEmbedder e;
    std::size_t rev = *t.schema().find("reviews"), dish = *t.schema().find("popular_dishes");
    auto ri = ColumnIndex::build(t, rev, e), di = ColumnIndex::build(t, dish, e);
    const std::string q1 = "is parking easy?", q2 = "does this place serve pasta?";
    std::vector<ScoredConstraint> cs{{e.embed(q1), &ri}, {e.embed(q2), &di}};
    double worst = 0;
    for (std::size_t r = 0; r < t.size(); ++r) {
      long double expect = 0;
      for (auto [q, col] : {std::pair{q1, rev}, std::pair{q2, dish}}) {
        auto qv = e.embed(q);
        const auto& cell = t.row(r)[col].as_array();
        if (cell.empty()) {
          expect -= 1;
          continue;
        }
        long double best = -1e30L;
        for (const auto& el : cell) {
          auto v = e.embed(el.as_text());
          long double dot = 0;
          for (std::size_t i = 0; i < v.size(); ++i) dot += static_cast<long double>(qv[i]) * v[i];
          best = std::max(best, dot);
        }
        expect += best;
      }
      worst = std::max(worst, std::fabs(aggregate_score(r, cs) - static_cast<double>(expect)));
    }
    return std::pair{worst <= 1e-9, std::to_string(t.size()) + " rows, max |error| " + fmt(worst)};
  });

  criterion("agent_contracts", [] {
    auto f = suql::testing::check_dialogue(load_fixture("restaurants"));
    return std::pair{f.empty(), "20 scripted turns, " + std::to_string(f.size()) + " violations" +
                                    (f.empty() ? "" : "; first " + f[0])};
  });

  criterion("qa_metrics", [] {
    bool pins = std::fabs(token_f1("at 503 Peeples Street SW downtown", "503 Peeples Street SW") - 0.8) < 1e-12 &&
                exact_match("Johnson City", "Johnson City, Tennessee") == 0 &&
                substring_match("Johnson City", "Johnson City, Tennessee") && exact_match("the Somali Sea", "Somali Sea") == 1;
    FixtureEnv env("hybridqa");
    Agent agent(*env.db, *env.runtime, std::make_shared<MockDialogueBackend>(env.fixture.json_asset("dialogue")));
    BatchReport r = run_batch(load_examples(env.fixture.path("questions")), agent);
    bool batch = std::fabs(r.em - 0.5) < 1e-9 && std::fabs(r.f1 - (6.0 + 0.8 + 0.8 + 2.0 / 3.0) / 12.0) < 1e-9 &&
                 std::fabs(r.substring - 0.75) < 1e-9 && r.failures == 1;
    return std::pair{pins && batch, "pins " + std::string(pins ? "ok" : "off") + "; batch EM " + fmt(r.em) + " F1 " +
                                        fmt(r.f1) + " substring " + fmt(r.substring) + " failures " +
                                        std::to_string(r.failures)};
  });

  criterion("determinism", [] {
    auto workload = [](const std::filesystem::path& dir) {
      Fixture fx = load_fixture("restaurants");
      IngestSpec spec{fx.path("schema"), {fx.root / "restaurants" / "rows.jsonl"}, fx.path("annotations"), dir / "db"};
      ingest(spec);
      FixtureEnv env("hybridqa");
      Agent agent(*env.db, *env.runtime, std::make_shared<MockDialogueBackend>(env.fixture.json_asset("dialogue")));
      BatchReport r = run_batch(load_examples(env.fixture.path("questions")), agent);
      std::string bytes = r.to_json().dump() + r.to_csv();
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(dir / "db")) files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) bytes += f.filename().string() + "\n" + slurp(f);
      return bytes;
    };
    suql::testing::TempDir a, b;
    std::string x = workload(a.path), y = workload(b.path);
    return std::pair{x == y, "two ingest+eval runs, " + std::to_string(x.size()) + " bytes compared, identical=" +
                                 (x == y ? "yes" : "no")};
  });

  std::printf("SUMMARY: %d failing criteria\n", failures);
  return failures ? 1 : 0;
}
