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

#ifndef LEXCHECK_CASE_MODEL_H_
#define LEXCHECK_CASE_MODEL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace lexcheck {

using ArticleNo = int;
using ArticleSet = std::set<ArticleNo>;

// Articles 1..101 form the general part of the criminal code; everything
// from 102 up is an offense-defining (specific) provision.
inline constexpr ArticleNo kLastGeneralArticle = 101;

inline bool IsGeneralArticle(ArticleNo article) {
  return article >= 1 && article <= kLastGeneralArticle;
}

struct ArticleSplit {
  ArticleSet general;
  ArticleSet specific;
  bool operator==(const ArticleSplit&) const = default;
};

ArticleSplit SplitArticles(const std::vector<ArticleNo>& articles);

enum class ElementKind {
  kActor,
  kVictim,
  kAct,
  kResult,
  kCauses,
  kMentalState,
  kProtectedInterest,
  kAmount,
  kSeverity,
  kQualifier,
  kException,
};

std::string_view ElementKindName(ElementKind kind);
std::optional<ElementKind> ParseElementKind(std::string_view name);

// Byte range [begin, end) into the case narrative.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  auto operator<=>(const SourceSpan&) const = default;
};

struct IdPair {
  std::string first;
  std::string second;
  auto operator<=>(const IdPair&) const = default;
};

// bool | enum token | integer | (id, id)
using FactValue = std::variant<bool, std::string, std::int64_t, IdPair>;

std::string FactValueToString(const FactValue& value);

// One typed legal fact about a suspect or a case entity (act, result,
// victim). Act facts carry (act_id, act_type); Causes facts carry
// (act_id, result_id).
struct FactAtom {
  ElementKind kind = ElementKind::kQualifier;
  std::string subject_id;
  std::string predicate;
  FactValue value;
  std::optional<SourceSpan> span;

  bool operator==(const FactAtom&) const = default;
};

struct ExtraLegalAttr {
  std::string name;
  std::string value;
  bool operator==(const ExtraLegalAttr&) const = default;
};

enum class SpecialSentence { kLife, kDeath };

// Months of fixed-term imprisonment, or one of the reserved tokens.
using Sentence = std::variant<std::int64_t, SpecialSentence>;

std::string SentenceToString(const Sentence& sentence);

struct SuspectLabel {
  ArticleSet general;
  ArticleSet specific;
  std::string charge;
  bool operator==(const SuspectLabel&) const = default;
};

struct CaseRecord {
  std::string case_id;
  std::vector<std::string> suspect_ids;
  std::string narrative;
  std::vector<FactAtom> facts;
  std::vector<ExtraLegalAttr> extra_legal;
  ArticleSet gold_general_articles;
  ArticleSet gold_specific_articles;
  std::optional<Sentence> gold_sentence;
  // Multi-defendant corpora label each suspect separately; the top-level
  // gold sets are the union.
  std::map<std::string, SuspectLabel> suspect_labels;
  // Raw fields carried through unchanged (filename, qw, reason, result).
  std::map<std::string, std::string> source_fields;

  ArticleSet GoldStatutes() const;
  bool operator==(const CaseRecord&) const = default;
};

enum class CaseSchema { kLeCaRDv2, kLEEC, kPerturbation };

std::string_view CaseSchemaName(CaseSchema schema);

// Guesses the schema of a record from its field names.
CaseSchema DetectCaseSchema(const nlohmann::json& record);

// Throws SchemaError when a required field is missing and ValueError when a
// value is out of domain.
CaseRecord ParseCase(const nlohmann::json& record, CaseSchema schema);

nlohmann::ordered_json SerializeCase(const CaseRecord& record,
                                     CaseSchema schema);

// Canonical fact encoding shared by every schema that carries facts.
nlohmann::ordered_json FactToJson(const FactAtom& fact);
FactAtom FactFromJson(const nlohmann::json& json);

// True iff the two cases agree on everything except extra-legal attributes
// (and surface fields such as narrative and id).
bool ExtraLegalEquivalent(const CaseRecord& a, const CaseRecord& b);

// Facts visible when judging one suspect: drops facts about the other
// suspects and about their acts. Results and victims stay shared. An empty
// suspect id keeps every fact.
std::vector<FactAtom> FactsForSuspect(const CaseRecord& record, std::string_view suspect);

// Returns one description per violated invariant; empty means valid.
std::vector<std::string> ValidateCase(const CaseRecord& record);

// Extracts a sentence from court-ruling text. Understands English
// ("3 years and 8 months", "life imprisonment") and Chinese
// ("有期徒刑三年八个月", "无期徒刑", "死刑").
std::optional<Sentence> ParseSentenceText(std::string_view text);

inline constexpr std::string_view kSeverityValues[] = {"Minor", "Serious",
                                                       "EspeciallySerious"};
inline constexpr std::string_view kMentalStateValues[] = {
    "Intentional", "Negligent", "Knowing", "Unknown"};

}  // namespace lexcheck

#endif  // LEXCHECK_CASE_MODEL_H_
