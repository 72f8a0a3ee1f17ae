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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "fixtures.h"
#include "hand_counts.h"
#include "lexcheck/errors.h"
#include "lexcheck/metrics.h"

namespace lexcheck {
namespace {

using testing::DataPath;
using testing::ReadJsonLines;

EvaluationInput MetricsFixture() {
  EvaluationInput input;
  for (const auto& j : ReadJsonLines(DataPath("fixtures/metrics/pairs.jsonl"))) {
    input.pairs.push_back(PairFromJson(j));
  }
  input.predictions = LoadPredictions(DataPath("fixtures/metrics/predictions.jsonl"));
  input.clusters = LoadClusters(DataPath("fixtures/metrics/clusters.json"));
  input.baseline_group = "noise";
  return input;
}

using MetricKey = std::tuple<std::string, std::string, std::string>;

std::map<MetricKey, NamedMetric> Index(const MetricReport& report) {
  std::map<MetricKey, NamedMetric> out;
  for (const auto& g : report.groups) {
    for (const auto& m : g.metrics) out[{g.axis, g.name, m.name}] = m;
  }
  return out;
}


TEST(MetricsFixtureTest, MatchesHandCounts) {
  auto report = Evaluate(MetricsFixture());
  auto metrics = Index(report);
  for (const auto& h : testing::kHandCounts) {
    SCOPED_TRACE(std::string(h.axis) + "/" + h.group + "/" + h.metric);
    auto it = metrics.find({h.axis, h.group, h.metric});
    ASSERT_NE(it, metrics.end());
    const auto& m = it->second;
    ASSERT_TRUE(m.value.has_value());
    EXPECT_NEAR(*m.value, h.value, 1e-9);
    if (h.denominator > 0) {
      ASSERT_TRUE(m.numerator && m.denominator);
      EXPECT_NEAR(*m.numerator, h.numerator, 1e-9);
      EXPECT_EQ(*m.denominator, h.denominator);
    }
  }
  for (const auto& g : report.groups) {
    if (g.axis == "overall" || g.axis == "clean") EXPECT_EQ(g.pairs, 20);
  }
}

TEST(MetricsFixtureTest, PermutationInvariant) {
  auto input = MetricsFixture();
  auto reference = Index(Evaluate(input));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(input.pairs.begin(), input.pairs.end(), rng);
    std::shuffle(input.clusters.begin(), input.clusters.end(), rng);
    auto shuffled = Index(Evaluate(input));
    ASSERT_EQ(shuffled.size(), reference.size());
    for (const auto& [key, m] : reference) {
      const auto& other = shuffled.at(key);
      ASSERT_EQ(m.value.has_value(), other.value.has_value());
      if (m.value) EXPECT_NEAR(*m.value, *other.value, 1e-12) << std::get<2>(key);
      EXPECT_EQ(m.denominator, other.denominator);
    }
  }
}

TEST(MetricsFixtureTest, MissingAndEmptyInputs) {
  auto input = MetricsFixture();
  input.predictions.erase("m-P3");
  input.predictions.erase("m-C1~t");
  try {
    Evaluate(input);
    FAIL() << "expected MissingPredictions";
  } catch (const MissingPredictions& e) {
    auto ids = e.ids();
    std::sort(ids.begin(), ids.end());
    EXPECT_EQ(ids, (std::vector<std::string>{"m-C1~t", "m-P3"}));
  }

  input = MetricsFixture();
  input.baseline_group = "no_such_group";
  EXPECT_THROW(Evaluate(input), MissingBaseline);

  EXPECT_THROW(Evaluate(EvaluationInput{}), EmptyInput);
}

TEST(MetricsFixtureTest, ReportSerializations) {
  auto report = Evaluate(MetricsFixture());
  auto json = ReportToJson(report);
  EXPECT_TRUE(json.contains("groups"));
  auto tsv = ReportToTsv(report);
  EXPECT_EQ(tsv.rfind("axis\tgroup\tcount\tmetric\tvalue\tnumerator\tdenominator\n", 0), 0u);
  std::size_t rows = std::count(tsv.begin(), tsv.end(), '\n') - 1;
  std::size_t expected = 0;
  for (const auto& g : report.groups) expected += g.metrics.size();
  EXPECT_EQ(rows, expected);
}

// ---- unit examples -------------------------------------------------------

TEST(MetricsTest, PairRatios) {
  std::vector<SetPair> pairs = {{{1}, {1}}, {{1}, {1, 2}}, {{}, {}}, {{3}, {4}}};
  auto inv = Invariance(pairs);
  EXPECT_EQ(inv.numerator, 2);
  EXPECT_EQ(inv.denominator, 4);
  EXPECT_EQ(inv.value(), 0.5);
  auto ca = ChangeAlignment(pairs);
  EXPECT_EQ(ca.numerator, 2);
  EXPECT_EQ(StatuteCorrectness(pairs).numerator, 2);
  EXPECT_THROW(Invariance({}), EmptyInput);
  EXPECT_THROW(ChangeAlignment({}), EmptyInput);
  EXPECT_THROW(StatuteCorrectness({}), EmptyInput);
  EXPECT_FALSE(Ratio{}.value().has_value());
}

TEST(MetricsTest, MicroPRF1) {
  auto m = ProvisionPRF1({{{1, 2}, {2, 3}}, {{5}, {5}}});
  EXPECT_EQ(m.tp, 2);
  EXPECT_EQ(m.fp, 1);
  EXPECT_EQ(m.fn, 1);
  EXPECT_DOUBLE_EQ(*m.precision(), 2.0 / 3);
  EXPECT_DOUBLE_EQ(*m.f1(), 2.0 / 3);

  auto nothing_predicted = ProvisionPRF1({{{}, {7}}});
  EXPECT_FALSE(nothing_predicted.precision().has_value());
  EXPECT_EQ(nothing_predicted.f1(), 0.0);
  EXPECT_FALSE(ProvisionPRF1({{{}, {}}}).f1().has_value());
  EXPECT_THROW(ProvisionPRF1({}), EmptyInput);
}

TEST(MetricsTest, F1IsTheHarmonicMean) {
  std::mt19937_64 rng(17);
  auto random_set = [&] {
    ArticleSet s;
    for (int a = 1; a <= 8; ++a) {
      if (rng() % 3 == 0) s.insert(a);
    }
    return s;
  };
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SetPair> pairs;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 6); ++k) pairs.push_back({random_set(), random_set()});
    auto m = ProvisionPRF1(pairs);
    auto p = m.precision();
    auto r = m.recall();
    if (!p || !r || *p + *r == 0) continue;
    EXPECT_NEAR(*m.f1(), 2 * *p * *r / (*p + *r), 1e-12);
    EXPECT_NEAR(*m.f1(), 2.0 * m.tp / (2.0 * m.tp + m.fp + m.fn), 1e-12);
  }
}

TEST(MetricsTest, AttackMetrics) {
  std::vector<AttackCase> cases = {
      {{1}, {1}, {1}},     // robust
      {{1}, {2}, {1}},     // flipped
      {{3}, {4}, {4}},     // wrong, then right
      {{5}, {5}, {6}},     // wrong both times
  };
  auto m = ComputeAttackMetrics(cases);
  EXPECT_EQ(m.asr.numerator, 1);
  EXPECT_EQ(m.asr.denominator, 2);
  EXPECT_EQ(m.crr.numerator, 1);
  EXPECT_EQ(m.crr.denominator, 4);
  EXPECT_EQ(m.invariance.numerator, 2);
  EXPECT_EQ(m.prf1.tp, 2);
  EXPECT_EQ(m.prf1.fp, 2);
  EXPECT_EQ(m.prf1.fn, 2);

  auto never_clean = ComputeAttackMetrics({{{1}, {1}, {2}}});
  EXPECT_FALSE(never_clean.asr.value().has_value());
  EXPECT_THROW(ComputeAttackMetrics({}), EmptyInput);
}

TEST(MetricsTest, BiasMagnitude) {
  std::map<std::string, GroupScore> groups = {
      {"base", {0.8, 1}}, {"a", {0.6, 1}}, {"b", {0.9, 2}}};
  EXPECT_NEAR(BiasMagnitude(groups, "base"), (0.2 * 1 + 0.1 * 2) / 3, 1e-12);
  EXPECT_EQ(BiasMagnitude({{"base", {0.5, 3}}}, "base"), 0);
  EXPECT_THROW(BiasMagnitude(groups, "c"), MissingBaseline);
}

TEST(MetricsTest, Sentencing) {
  std::vector<SentenceCase> cases = {
      {10, Sentence{std::int64_t{12}}, true},
      {30, Sentence{std::int64_t{24}}, true},
      {100, Sentence{SpecialSentence::kLife}, true},
      {std::nullopt, Sentence{std::int64_t{5}}, false},
      {7, std::nullopt, true},
  };
  auto m = ComputeSentencingMetrics(cases);
  EXPECT_EQ(m.scored, 2);
  EXPECT_EQ(m.excluded, 3);
  EXPECT_EQ(m.squared_error_sum, 40);
  EXPECT_NEAR(*m.rmse_months, std::sqrt(20.0), 1e-12);
  EXPECT_EQ(m.valid_ratio.numerator, 4);
  EXPECT_EQ(m.valid_ratio.denominator, 5);
  EXPECT_FALSE(ComputeSentencingMetrics({{std::nullopt, std::nullopt, false}}).rmse_months);
  EXPECT_THROW(ComputeSentencingMetrics({}), EmptyInput);
}

TEST(MetricsTest, Clusters) {
  ClusterTable clusters = {{"tf", {264, 266}}, {"sm", {151, 152}}};
  std::vector<SetPair> pairs = {
      {{264}, {264}},        // exact
      {{266}, {264}},        // omission and wrong selection
      {{264, 266}, {264}},   // wrong selection only
      {{151, 347}, {347}},   // false activation in sm
  };
  auto m = ComputeClusterMetrics(pairs, clusters);
  EXPECT_EQ(m.positive_exactness.numerator, 1);
  EXPECT_EQ(m.positive_exactness.denominator, 3);
  EXPECT_EQ(m.gold_omission.numerator, 1);
  EXPECT_EQ(m.wrong_similar_selection.numerator, 2);
  EXPECT_EQ(m.false_activation.numerator, 1);
  EXPECT_EQ(m.false_activation.denominator, 5);
  ASSERT_EQ(m.per_cluster.size(), 2u);
  EXPECT_EQ(m.per_cluster[1].false_activation.numerator, 1);
  EXPECT_THROW(ComputeClusterMetrics({}, clusters), EmptyInput);
}

TEST(MetricsTest, CaseMatchScore) {
  CaseRecord gold;
  gold.gold_specific_articles = {264};
  PredictionRecord p;
  p.predicted_specific = {264};
  EXPECT_EQ(CaseMatchScore(p, gold), 1.0);
  p.predicted_specific = {264, 266};
  EXPECT_NEAR(CaseMatchScore(p, gold), (1.0 + 2.0 / 3) / 2, 1e-12);
  p.predicted_general = {67};
  EXPECT_NEAR(CaseMatchScore(p, gold), (0.0 + 2.0 / 3) / 2, 1e-12);
}

TEST(MetricsTest, PredictionRecords) {
  PredictionTable table;
  PredictionRecord a;
  a.case_id = "c";
  a.predicted_specific = {385};
  a.predicted_sentence_months = 20;
  a.valid = true;
  PredictionRecord b = a;
  b.predicted_specific = {389};
  b.predicted_sentence_months = 40;
  b.valid = false;
  AddPrediction(table, a);
  AddPrediction(table, b);
  const auto& merged = table.at("c");
  EXPECT_EQ(merged.predicted_specific, (ArticleSet{385, 389}));
  EXPECT_EQ(merged.predicted_sentence_months, 20);
  EXPECT_FALSE(merged.valid);
  EXPECT_EQ(PredictionFromJson(PredictionToJson(merged)), merged);
}

}  // namespace
}  // namespace lexcheck
