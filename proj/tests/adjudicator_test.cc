// Copyright 2026 The Lexcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <chrono>

#include "fixtures.h"
#include "lexcheck/adjudicator.h"
#include "lexcheck/errors.h"

namespace lexcheck {
namespace {

using testing::DataPath;
using testing::FixtureCase;
using testing::SampleKb;

CaseRecord AppendixCase() {
  auto j = nlohmann::json::parse(testing::ReadText(DataPath("fixtures/appendix_g_case.json")));
  return ParseCase(j, DetectCaseSchema(j));
}

const StatuteKB& TwoClauseKb() {
  static const StatuteKB kb = [] {
    StatuteKB k = LoadKbFile(DataPath("kb/two_clause.rules"));
    if (!ValidateKb(k, {}).ok()) throw std::runtime_error("two-clause KB invalid");
    return k;
  }();
  return kb;
}

const Diagnostic* FindDiagnostic(const Judgment& j, ClauseId id) {
  for (const auto& d : j.diagnostics) {
    if (d.clause == id) return &d;
  }
  return nullptr;
}

TEST(GoldenTrace, DrugCaseSelectsTheLowestBracket) {
  auto start = std::chrono::steady_clock::now();
  Judgment j = Adjudicate(AppendixCase(), SampleKb(), {}, {});
  auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_LT(elapsed, std::chrono::seconds(1));

  for (int clause : {1, 2, 3}) {
    const Diagnostic* d = FindDiagnostic(j, {347, clause});
    ASSERT_TRUE(d) << "347." << clause << " should be rejected";
    EXPECT_FALSE(d->core.members.empty());
  }
  EXPECT_EQ(FindDiagnostic(j, {347, 4}), nullptr);
  EXPECT_EQ(j.chosen_clauses,
            (std::vector<ClauseId>{{64, 1}, {65, 1}, {67, 1}, {347, 4}}));
  EXPECT_EQ(j.penalty_interval, PenaltySpec::Closed(0, 36));
  EXPECT_EQ(j.general_articles, (ArticleSet{64, 65, 67}));
  EXPECT_EQ(j.specific_articles, (ArticleSet{347}));
  EXPECT_TRUE(j.valid);
  EXPECT_EQ(j.point_sentence_months, 18);
}

TEST(GoldenTrace, CoresNameTheFactsThatExcludeEachBracket) {
  Judgment j = Adjudicate(AppendixCase(), SampleKb(), {64, 65, 67, 347}, {});
  const auto& heavy = FindDiagnostic(j, {347, 1})->core.members;
  EXPECT_NE(std::find(heavy.begin(), heavy.end(), "fact:DrugQuantity=2"), heavy.end());
  const auto& middle = FindDiagnostic(j, {347, 2})->core.members;
  EXPECT_NE(std::find(middle.begin(), middle.end(), "fact:DrugQuantity=2"), middle.end());
  const auto& serious = FindDiagnostic(j, {347, 3})->core.members;
  EXPECT_NE(std::find(serious.begin(), serious.end(), "fact:Circumstance=none"), serious.end());
  EXPECT_EQ(j.diagnostics.size(), 4U);  // 347.1-347.3 and 67.3
}

TEST(GoldenTrace, ExplanationWalksEveryChosenClause) {
  Judgment j = Adjudicate(AppendixCase(), SampleKb(), {}, {});
  ASSERT_EQ(j.explanation.size(), j.chosen_clauses.size());
  for (const auto& step : j.explanation) {
    EXPECT_FALSE(step.atoms.empty()) << step.clause.ToString();
    for (const auto& a : step.atoms) EXPECT_EQ(a.value, Truth::kTrue) << a.atom;
  }
  auto json = JudgmentToJson(j);
  EXPECT_EQ(json["penalty_interval"], "[0, 36]");
  EXPECT_EQ(json["chosen_clauses"].back(), "347.4");
}

TEST(TwoClauseSchema, SeverityPicksTheBracket) {
  Judgment minor = Adjudicate(FixtureCase("assault-minor"), TwoClauseKb(), {}, {});
  EXPECT_EQ(minor.chosen_clauses, (std::vector<ClauseId>{{234, 1}}));
  EXPECT_EQ(minor.penalty_interval, PenaltySpec::Closed(0, 36));

  Judgment serious = Adjudicate(FixtureCase("assault-serious"), TwoClauseKb(), {}, {});
  EXPECT_EQ(serious.chosen_clauses, (std::vector<ClauseId>{{234, 2}}));
  ASSERT_TRUE(serious.penalty_interval);
  EXPECT_EQ(*serious.penalty_interval, (PenaltySpec{36, std::int64_t{120}, true, false}));
  EXPECT_EQ(serious.penalty_interval->MinMonths(), 37);
  EXPECT_EQ(serious.penalty_interval->MaxMonths(), 120);
}

TEST(Adjudicator, AgreesWithGoldOnEveryFixtureCase) {
  for (const auto& record : testing::FixtureCases()) {
    for (const auto& j : AdjudicateAll(record, SampleKb(), {}, {})) {
      ArticleSet general = record.gold_general_articles;
      ArticleSet specific = record.gold_specific_articles;
      if (auto it = record.suspect_labels.find(j.suspect_id); it != record.suspect_labels.end()) {
        general = it->second.general;
        specific = it->second.specific;
      }
      EXPECT_EQ(j.general_articles, general) << record.case_id << " " << j.suspect_id;
      EXPECT_EQ(j.specific_articles, specific) << record.case_id << " " << j.suspect_id;
    }
  }
}

TEST(Adjudicator, AdjustmentsShiftTheBracket) {
  Judgment weapon = Adjudicate(FixtureCase("assault-serious-weapon"), SampleKb(), {}, {});
  ASSERT_TRUE(weapon.penalty_interval);
  EXPECT_EQ(weapon.penalty_interval->MinMonths(), 49);
  Judgment repaid = Adjudicate(FixtureCase("assault-serious-restitution"), SampleKb(), {}, {});
  ASSERT_TRUE(repaid.penalty_interval);
  EXPECT_EQ(repaid.penalty_interval->MaxMonths(), 108);
}

TEST(Adjudicator, NoApplicableClause) {
  Judgment j = Adjudicate(FixtureCase("no-clause"), SampleKb(), {}, {});
  EXPECT_TRUE(j.chosen_clauses.empty());
  EXPECT_EQ(j.consequence, kNoApplicableClause);
  EXPECT_FALSE(j.valid);
  EXPECT_FALSE(j.point_sentence_months);
}

TEST(Adjudicator, OneJudgmentPerSuspect) {
  auto js = AdjudicateAll(FixtureCase("bribery-250000"), SampleKb(), {}, {});
  ASSERT_EQ(js.size(), 2U);
  EXPECT_EQ(js[0].suspect_id, "s1");
  EXPECT_EQ(js[0].specific_articles, ArticleSet{385});
  EXPECT_EQ(js[1].suspect_id, "s2");
  EXPECT_EQ(js[1].specific_articles, ArticleSet{389});
}

TEST(Adjudicator, UnknownCandidateArticlesAreReported) {
  Judgment j = Adjudicate(AppendixCase(), SampleKb(), {347, 9999}, {});
  EXPECT_EQ(j.unknown_articles, std::vector<ArticleNo>{9999});
  EXPECT_EQ(j.chosen_clauses, (std::vector<ClauseId>{{347, 4}}));
}

TEST(Adjudicator, RequiresAValidatedKb) {
  StatuteKB raw = LoadKbFile(DataPath("kb/sample.rules"));
  EXPECT_THROW(Adjudicate(AppendixCase(), raw, {}, {}), KBNotValidated);
  EXPECT_THROW(AdjudicateAll(AppendixCase(), raw, {}, {}), KBNotValidated);
}

TEST(Adjudicator, PointPolicies) {
  AdjudicatorConfig low;
  low.point_policy = PointPolicy::kMin;
  EXPECT_EQ(Adjudicate(FixtureCase("assault-serious"), SampleKb(), {}, low).point_sentence_months, 37);
  EXPECT_EQ(Adjudicate(FixtureCase("assault-serious"), SampleKb(), {}, {}).point_sentence_months, 78);
  EXPECT_EQ(ParsePointPolicy("mid"), PointPolicy::kMid);
  EXPECT_EQ(ParsePointPolicy("max"), std::nullopt);
}

CaseRecord ConflictingCase() {
  CaseRecord r = FixtureCase("assault-serious");
  r.facts.push_back({ElementKind::kMentalState, "s1", "MentalState", std::string("Negligent"),
                     std::nullopt});
  return r;
}

TEST(Repair, ConflictsWithoutRepairAreRecorded) {
  Judgment j = Adjudicate(ConflictingCase(), SampleKb(), {}, {});
  ASSERT_EQ(j.conflicts.size(), 1U);
  EXPECT_EQ(j.conflicts[0].predicate, "MentalState");
  EXPECT_EQ(j.repairs, 0);
}

TEST(Repair, ReExtractsUntilTheConflictIsGone) {
  AdjudicatorConfig config;
  config.repair = true;
  int calls = 0;
  config.extractor = [&](const CaseRecord& record, const std::string& suspect,
                         const std::vector<Diagnostic>&) {
    ++calls;
    EXPECT_EQ(suspect, "s1");
    return FixtureCase("assault-serious").facts;
  };
  Judgment j = Adjudicate(ConflictingCase(), SampleKb(), {}, config);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(j.repairs, 1);
  EXPECT_TRUE(j.conflicts.empty());
  EXPECT_EQ(j.specific_articles, ArticleSet{234});
}

TEST(Repair, GivesUpAfterTheRepairBudget) {
  AdjudicatorConfig config;
  config.repair = true;
  config.max_repairs = 2;
  config.extractor = [](const CaseRecord& record, const std::string&, const std::vector<Diagnostic>&) {
    return record.facts;
  };
  Judgment j = Adjudicate(ConflictingCase(), SampleKb(), {}, config);
  EXPECT_EQ(j.repairs, 2);
  EXPECT_FALSE(j.conflicts.empty());
}

TEST(Repair, NeedsAnExtractor) {
  AdjudicatorConfig config;
  config.repair = true;
  EXPECT_THROW(Adjudicate(ConflictingCase(), SampleKb(), {}, config), ExtractorUnavailable);
  EXPECT_NO_THROW(Adjudicate(FixtureCase("assault-serious"), SampleKb(), {}, config));
}

TEST(Specificity, StrongerGuardWinsWithinAnArticle) {
  auto atom = [](const char* p) { return GuardExpr::MakeAtom({p, CompareOp::kEq, true}); };
  std::vector<AdmissibleClause> a = {
      {{500, 1}, atom("a"), PenaltySpec::Closed(0, 12), std::nullopt},
      {{500, 2}, GuardExpr::And({atom("a"), atom("b")}), PenaltySpec::Closed(12, 24), std::nullopt},
      {{501, 1}, atom("a"), PenaltySpec::Closed(0, 6), std::nullopt},
  };
  EXPECT_EQ(SelectByPriority(a, {}), (std::vector<ClauseId>{{500, 2}, {501, 1}}));
}

TEST(Specificity, PrioritiesBreakTiesWithinAnArticle) {
  auto atom = [](const char* p) { return GuardExpr::MakeAtom({p, CompareOp::kEq, true}); };
  std::vector<AdmissibleClause> a = {
      {{500, 1}, atom("a"), std::nullopt, 1},
      {{500, 2}, atom("b"), std::nullopt, 2},
      {{500, 3}, atom("c"), std::nullopt, std::nullopt},
  };
  EXPECT_EQ(SelectByPriority(a, {}), (std::vector<ClauseId>{{500, 2}, {500, 3}}));
}

TEST(Intervals, MergeSortsAndJoinsAdjacentBrackets) {
  PenaltySpec open{36, std::int64_t{120}, true, false};
  PenaltySpec life{180, SpecialSentence::kLife, false, false};
  auto merged = MergeIntervals({life, open, PenaltySpec::Closed(0, 36),
                                PenaltySpec{5, std::int64_t{5}, true, false}});
  ASSERT_EQ(merged.size(), 2U);
  EXPECT_EQ(merged[0], PenaltySpec::Closed(0, 120));
  EXPECT_EQ(merged[1], life);
}

TEST(Intervals, PointSentence) {
  EXPECT_EQ(ChoosePointSentence({PenaltySpec::Closed(0, 36)}, PointPolicy::kMid), 18);
  EXPECT_EQ(ChoosePointSentence({PenaltySpec::Closed(0, 36)}, PointPolicy::kMin), 0);
  EXPECT_EQ(ChoosePointSentence({PenaltySpec{180, SpecialSentence::kDeath, false, false}},
                                PointPolicy::kMid),
            180);
  EXPECT_EQ(ChoosePointSentence({PenaltySpec::Closed(60, 84), PenaltySpec::Closed(0, 10)},
                                PointPolicy::kMid),
            5);
  EXPECT_THROW(ChoosePointSentence({}, PointPolicy::kMid), EmptyUnion);
}

}  // namespace
}  // namespace lexcheck
