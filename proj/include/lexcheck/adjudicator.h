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

// Case-level judgment: candidate clauses are grounded against the facts,
// solved one at a time, filtered by specificity, and the surviving
// sentencing brackets yield a point sentence.

#ifndef LEXCHECK_ADJUDICATOR_H_
#define LEXCHECK_ADJUDICATOR_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lexcheck/case_model.h"
#include "lexcheck/compiler.h"
#include "lexcheck/solver.h"
#include "lexcheck/statute_kb.h"

namespace lexcheck {

enum class PointPolicy { kMin, kMid };

std::string_view PointPolicyName(PointPolicy policy);
std::optional<PointPolicy> ParsePointPolicy(std::string_view name);

inline constexpr std::string_view kNoApplicableClause = "No applicable clause";

struct CheckedAtom {
  std::string atom;
  Truth value = Truth::kUnknown;
  std::optional<SourceSpan> span;

  bool operator==(const CheckedAtom&) const = default;
};

struct ExplanationStep {
  ClauseId clause;
  std::vector<CheckedAtom> atoms;
  std::string consequence_label;

  bool operator==(const ExplanationStep&) const = default;
};

struct Diagnostic {
  ClauseId clause;
  UnsatCore core;

  bool operator==(const Diagnostic&) const = default;
};

struct Judgment {
  std::string case_id;
  std::string suspect_id;
  ArticleSet general_articles;
  ArticleSet specific_articles;
  std::vector<ClauseId> chosen_clauses;
  // Merged sentencing brackets of the chosen offense clauses.
  std::vector<PenaltySpec> penalty_union;
  // The bracket holding the point sentence.
  std::optional<PenaltySpec> penalty_interval;
  std::optional<std::int64_t> point_sentence_months;
  std::vector<ExplanationStep> explanation;
  std::vector<Diagnostic> diagnostics;
  std::string consequence;
  bool valid = false;
  std::vector<ArticleNo> unknown_articles;
  std::vector<FactConflict> conflicts;
  int repairs = 0;

  bool operator==(const Judgment&) const = default;
};

// Re-extracts facts for a suspect after conflicting facts were found.
using FactRepairFn = std::function<std::vector<FactAtom>(
    const CaseRecord& record, const std::string& suspect, const std::vector<Diagnostic>& cores)>;

struct AdjudicatorConfig {
  PointPolicy point_policy = PointPolicy::kMid;
  // Re-extract facts when a core reports conflicting facts.
  bool repair = false;
  int max_repairs = 3;
  FactRepairFn extractor;
  int atom_cap = 16;
  // Builtin solver when unset.
  std::shared_ptr<SolverBackend> backend;
};

struct AdmissibleClause {
  ClauseId id;
  GuardExpr guard;
  std::optional<PenaltySpec> interval;
  std::optional<int> priority;
};

// Non-dominated clauses: a clause is dropped when another clause of the
// same article has a strictly stronger guard. Declared priorities break the
// remaining ties within an article.
std::vector<ClauseId> SelectByPriority(const std::vector<AdmissibleClause>& admissible,
                                       const ExclusivityAxioms& axioms, int atom_cap = 16);

// Sorted, overlap-merged brackets with empty ones dropped.
std::vector<PenaltySpec> MergeIntervals(std::vector<PenaltySpec> intervals);

// Throws EmptyUnion.
std::int64_t ChoosePointSentence(const std::vector<PenaltySpec>& intervals, PointPolicy policy);

// Candidates empty means every KB article. An empty suspect picks the
// record's first suspect. Throws KBNotValidated and ExtractorUnavailable.
Judgment Adjudicate(const CaseRecord& record, const StatuteKB& kb, const ArticleSet& candidates,
                    const AdjudicatorConfig& config, const std::string& suspect = "");

// One judgment per suspect, in record order.
std::vector<Judgment> AdjudicateAll(const CaseRecord& record, const StatuteKB& kb,
                                    const ArticleSet& candidates, const AdjudicatorConfig& config);

nlohmann::ordered_json JudgmentToJson(const Judgment& judgment);

}  // namespace lexcheck

#endif  // LEXCHECK_ADJUDICATOR_H_
