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

#ifndef LEXCHECK_STATUTE_KB_H_
#define LEXCHECK_STATUTE_KB_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexcheck/case_model.h"
#include "lexcheck/guard.h"

namespace lexcheck {

// Sentencing range in months. Strict endpoints use integer semantics: a
// strict lower bound of 36 admits 37 and up. A Life/Death upper bound sits
// above every finite month count.
struct PenaltySpec {
  std::int64_t lower_months = 0;
  Sentence upper = std::int64_t{0};
  bool lower_strict = false;
  bool upper_strict = false;

  static PenaltySpec Closed(std::int64_t lower, std::int64_t upper);

  bool UpperIsReserved() const {
    return std::holds_alternative<SpecialSentence>(upper);
  }
  // Smallest admissible integer.
  std::int64_t MinMonths() const { return lower_months + (lower_strict ? 1 : 0); }
  // Largest admissible integer; nullopt when the upper bound is Life/Death.
  std::optional<std::int64_t> MaxMonths() const;
  bool IsEmpty() const;
  bool Contains(std::int64_t months) const;
  // "[0, 36]", "(36, 120]", "[180, Death]"
  std::string ToString() const;

  bool operator==(const PenaltySpec&) const = default;
};

enum class AdjustDirection { kRaiseLower, kLowerUpper };

struct AdjustmentDelta {
  std::string name;
  GuardExpr trigger;
  AdjustDirection direction = AdjustDirection::kRaiseLower;
  std::int64_t delta_months = 0;

  bool operator==(const AdjustmentDelta&) const = default;
};

struct ClauseId {
  ArticleNo article = 0;
  int index = 0;

  std::string ToString() const;  // "347.4"
  static std::optional<ClauseId> Parse(std::string_view text);
  auto operator<=>(const ClauseId&) const = default;
};

struct Clause {
  ClauseId id;
  GuardExpr guard;
  // Each exception blocks the clause when it holds.
  std::vector<GuardExpr> exceptions;
  // Absent for label-only provisions (most general-part articles), which
  // attach a consequence but no sentencing bracket.
  std::optional<PenaltySpec> penalty;
  std::vector<AdjustmentDelta> adjustments;
  std::string consequence_label;
  std::optional<int> priority;

  // guard & !exception_1 & ... & !exception_n
  GuardExpr EffectiveGuard() const;

  bool operator==(const Clause&) const = default;
};

enum class ValueType { kBool, kInt, kEnum };

struct PredicateDecl {
  std::string name;
  ValueType type = ValueType::kBool;
  std::vector<std::string> values;  // enum domain

  bool Admits(const Constant& value) const;
  bool operator==(const PredicateDecl&) const = default;
};

struct StatuteArticle {
  ArticleNo article_no = 0;
  std::string title;
  GuardExpr article_guard;
  std::vector<Clause> clauses;
  std::map<std::string, Constant> field_defaults;

  const Clause* FindClause(int index) const;
  bool operator==(const StatuteArticle&) const = default;
};

// At most one member may hold at a time.
struct ExclusiveGroup {
  std::string label;
  std::vector<Atom> members;

  bool operator==(const ExclusiveGroup&) const = default;
};

using ExclusivityAxioms = std::vector<ExclusiveGroup>;

class StatuteKB {
 public:
  std::map<std::string, PredicateDecl> predicates;
  std::set<std::string> extra_legal_names;
  std::map<ArticleNo, StatuteArticle> articles;
  ExclusivityAxioms exclusivity_axioms;

  bool validated() const { return validated_; }
  const PredicateDecl* FindPredicate(std::string_view name) const;
  const Clause* FindClause(const ClauseId& id) const;
  std::size_t ClauseCount() const;

  // Structural equality; the validation flag is not part of the content.
  bool operator==(const StatuteKB& other) const {
    return predicates == other.predicates &&
           extra_legal_names == other.extra_legal_names &&
           articles == other.articles &&
           exclusivity_axioms == other.exclusivity_axioms;
  }

 private:
  friend struct KbValidationAccess;
  bool validated_ = false;
};

// Throws SyntaxError (with line and column) or DuplicateClauseId.
StatuteKB ParseKb(std::string_view text);
StatuteKB LoadKbFile(const std::string& path);

// Canonical text; ParseKb(SerializeKb(kb)) == kb.
std::string SerializeKb(const StatuteKB& kb);

struct ConstraintRef {
  const StatuteArticle* article = nullptr;
  const Clause* clause = nullptr;
};

struct ConstraintSearch {
  std::vector<ConstraintRef> constraints;
  std::vector<ArticleNo> unknown_articles;
};

// All clauses of every candidate article in the KB, in article then clause
// order. Throws KBNotValidated.
ConstraintSearch SearchConstraints(const ArticleSet& candidates,
                                   const StatuteKB& kb);

}  // namespace lexcheck

#endif  // LEXCHECK_STATUTE_KB_H_
