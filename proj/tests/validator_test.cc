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

#include <map>
#include <set>

#include "fixtures.h"
#include "lexcheck/kb_validator.h"

namespace lexcheck {
namespace {

using testing::DataPath;

std::map<std::string, std::set<std::string>> ErrorsByCheck(const ValidationReport& r) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto* part : {&r.syntactic, &r.semantic, &r.case_level}) {
    for (const auto& issue : *part) {
      if (issue.error) out[issue.check].insert(issue.location);
    }
  }
  return out;
}

const std::vector<ProbeCase>& Probes() {
  static const auto probes = LoadProbes(DataPath("kb/probes.jsonl"));
  return probes;
}

TEST(Validator, SampleKbHasNoFindings) {
  StatuteKB kb = LoadKbFile(DataPath("kb/sample.rules"));
  EXPECT_FALSE(kb.validated());
  auto report = ValidateKb(kb, Probes());
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.syntactic.empty());
  EXPECT_TRUE(report.semantic.empty());
  EXPECT_TRUE(report.case_level.empty());
  EXPECT_EQ(report.probe_count, Probes().size());
  EXPECT_TRUE(kb.validated());
}

TEST(Validator, CatchesEverySeededDefect) {
  StatuteKB kb = LoadKbFile(DataPath("fixtures/defective.rules"));
  auto report = ValidateKb(kb, Probes());
  EXPECT_FALSE(kb.validated());
  EXPECT_EQ(report.ErrorCount(), 10U);
  auto found = ErrorsByCheck(report);
  EXPECT_EQ(found["vacuous"], (std::set<std::string>{"234.3", "235.2", "347.5"}));
  EXPECT_EQ(found["contradictory"], (std::set<std::string>{"401.1", "401.2", "401.3"}));
  EXPECT_EQ(found["overly_broad"], (std::set<std::string>{"402.1", "403.1"}));
  EXPECT_EQ(found["activation"], (std::set<std::string>{"theft-45000", "fraud-10000"}));
  EXPECT_EQ(found.size(), 4U);
}

TEST(Validator, BreadthIsNotJudgedOnFewProbes) {
  StatuteKB kb = LoadKbFile(DataPath("fixtures/defective.rules"));
  std::vector<ProbeCase> few(Probes().begin(), Probes().begin() + 4);
  auto found = ErrorsByCheck(ValidateKb(kb, few));
  EXPECT_FALSE(found.count("overly_broad"));
  EXPECT_EQ(found["vacuous"].size(), 3U);
}

TEST(Validator, UndeclaredPredicateIsASyntacticError) {
  StatuteKB kb = ParseKb("predicate p: bool;\narticle 300 \"x\" { clause 1 { guard: p & q; "
                         "penalty: [0, 12]; } }\n");
  auto report = ValidateKb(kb, {});
  EXPECT_FALSE(report.ok());
  EXPECT_FALSE(report.syntactic.empty());
  EXPECT_FALSE(kb.validated());
}

TEST(Validator, ActivatedClausesOnTheGoldenCase) {
  auto fired = ActivatedClauses(testing::SampleKb(), testing::FixtureCase("appendix-g-347"), "s1");
  std::set<ClauseId> got(fired.begin(), fired.end());
  EXPECT_TRUE(got.count({347, 4}));
  EXPECT_TRUE(got.count({64, 1}));
  EXPECT_TRUE(got.count({65, 1}));
  EXPECT_TRUE(got.count({67, 1}));
  EXPECT_FALSE(got.count({347, 1}));
  EXPECT_FALSE(got.count({67, 3}));
}

TEST(Validator, ReportJsonCarriesCountsAndLevels) {
  StatuteKB kb = LoadKbFile(DataPath("fixtures/defective.rules"));
  auto j = ValidateKb(kb, Probes()).ToJson();
  EXPECT_EQ(j["validated"], false);
  EXPECT_EQ(j["errors"], 10);
  EXPECT_EQ(j["probes"], 30);
  EXPECT_EQ(j["semantic"][0]["level"], "error");
}

}  // namespace
}  // namespace lexcheck
