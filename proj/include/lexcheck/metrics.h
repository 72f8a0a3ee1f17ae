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

#ifndef LEXCHECK_METRICS_H_
#define LEXCHECK_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexcheck/adjudicator.h"
#include "lexcheck/case_model.h"
#include "lexcheck/clusters.h"
#include "lexcheck/perturbation.h"

namespace lexcheck {

struct PredictionRecord {
  std::string case_id;
  ArticleSet predicted_general;
  ArticleSet predicted_specific;
  std::optional<std::int64_t> predicted_sentence_months;
  bool valid = false;
  std::optional<std::string> paired_with;

  ArticleSet Statutes() const;
  bool operator==(const PredictionRecord&) const = default;
};

nlohmann::ordered_json PredictionToJson(const PredictionRecord& p);
PredictionRecord PredictionFromJson(const nlohmann::json& j);
PredictionRecord PredictionFromJudgment(const Judgment& judgment);

// Keyed by case id. Records sharing a case id (one per suspect) are merged:
// statute sets by union, the sentence from the first record, valid by AND.
using PredictionTable = std::map<std::string, PredictionRecord>;
void AddPrediction(PredictionTable& table, const PredictionRecord& p);
PredictionTable LoadPredictions(const std::string& path);

struct Ratio {
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;
  // Absent when the denominator is zero.
  std::optional<double> value() const;
};

// Predicted vs reference statute sets.
struct SetPair {
  ArticleSet first;
  ArticleSet second;
};

// pairs: (prediction on base, prediction on perturbed). Throw EmptyInput.
Ratio Invariance(const std::vector<SetPair>& pairs);
Ratio ChangeAlignment(const std::vector<SetPair>& pairs);
// pairs: (prediction, gold).
Ratio StatuteCorrectness(const std::vector<SetPair>& pairs);

struct PRF1 {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::optional<double> precision() const;
  std::optional<double> recall() const;
  std::optional<double> f1() const;
};

// Micro-averaged over (prediction, gold) pairs.
PRF1 ProvisionPRF1(const std::vector<SetPair>& pairs);

struct AttackCase {
  ArticleSet clean_prediction;
  ArticleSet attacked_prediction;
  ArticleSet gold;
};

struct AttackMetrics {
  Ratio asr;  // value absent when nothing was clean-correct
  Ratio crr;
  Ratio invariance;
  PRF1 prf1;
};

AttackMetrics ComputeAttackMetrics(const std::vector<AttackCase>& cases);

struct GroupScore {
  double score = 0;
  double weight = 0;
};

// Weighted mean absolute shift of every other group from the baseline.
double BiasMagnitude(const std::map<std::string, GroupScore>& groups,
                     const std::string& baseline_group);

struct SentenceCase {
  std::optional<std::int64_t> predicted_months;
  std::optional<Sentence> gold;
  bool valid = false;
};

struct SentencingMetrics {
  std::optional<double> rmse_months;
  double squared_error_sum = 0;
  std::int64_t scored = 0;
  // Gold Life/Death, or no predicted months.
  std::int64_t excluded = 0;
  Ratio valid_ratio;
};

SentencingMetrics ComputeSentencingMetrics(const std::vector<SentenceCase>& cases);

struct ClusterBreakdown {
  std::string cluster;
  Ratio exactness;  // over positive cases
  Ratio omission;
  Ratio wrong_selection;
  Ratio false_activation;
};

struct ClusterMetrics {
  Ratio positive_exactness;
  std::optional<double> macro_exactness;
  Ratio gold_omission;
  Ratio wrong_similar_selection;
  Ratio false_activation;
  std::vector<ClusterBreakdown> per_cluster;
};

// One unit per (case, cluster). pairs: (prediction, gold).
ClusterMetrics ComputeClusterMetrics(const std::vector<SetPair>& pairs,
                                     const ClusterTable& clusters);

// Per-case matching score behind Overall Score: mean of the general and the
// specific set-F1, where two empty sets score 1.
double CaseMatchScore(const PredictionRecord& prediction, const CaseRecord& gold);

struct NamedMetric {
  std::string name;
  std::optional<double> value;
  // Recount support; empty for derived values such as F1.
  std::optional<double> numerator;
  std::optional<std::int64_t> denominator;
};

struct MetricGroup {
  std::string axis;   // "overall", "family", "category", "attack", "cluster"
  std::string name;
  std::int64_t pairs = 0;
  std::vector<NamedMetric> metrics;
};

struct MetricReport {
  std::vector<MetricGroup> groups;
  std::map<std::string, std::string> notes;
};

// Metric names each family is scored with.
const std::vector<std::string>& FamilyMetrics(PerturbationFamily family);

struct EvaluationInput {
  std::vector<PerturbationPair> pairs;
  // Cases evaluated on their own (clean statute and sentencing metrics).
  std::vector<CaseRecord> cases;
  PredictionTable predictions;
  ClusterTable clusters;
  std::string baseline_group;
};

// Throws MissingPredictions listing every uncovered case id, EmptyInput when
// there is nothing to score and MissingBaseline for an unknown baseline.
MetricReport Evaluate(const EvaluationInput& input);

nlohmann::ordered_json ReportToJson(const MetricReport& report);
// One row per (axis, group, metric).
std::string ReportToTsv(const MetricReport& report);

}  // namespace lexcheck

#endif  // LEXCHECK_METRICS_H_
