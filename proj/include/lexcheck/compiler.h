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

// Fact refinement and compilation of (case, clause) pairs into ground
// constraint problems.
//
// Each guard atom gets two Boolean rails: the "known true" rail and the
// "known false" rail. Facts, defaults and missing-value markers pin rails;
// guards are monotone formulas over rails. A guard holds exactly when its
// three-valued (Kleene) value is true, and removing any constraint can only
// make the problem easier, which keeps deletion-based cores minimal.

#ifndef LEXCHECK_COMPILER_H_
#define LEXCHECK_COMPILER_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lexcheck/case_model.h"
#include "lexcheck/guard.h"
#include "lexcheck/statute_kb.h"

namespace lexcheck {

enum class Provenance { kFromFact, kFromDefault, kMissing };

std::string_view ProvenanceName(Provenance p);

struct SliceEntry {
  Provenance provenance = Provenance::kMissing;
  // More than one value for multi-valued enums and for conflicts.
  std::vector<Constant> values;
  std::optional<SourceSpan> span;

  bool operator==(const SliceEntry&) const = default;
};

// An act or result with its attributes, used to resolve existentials.
struct Entity {
  std::string id;
  std::map<std::string, std::vector<Constant>> attributes;
  std::optional<SourceSpan> span;

  bool operator==(const Entity&) const = default;
};

struct CaseInventory {
  std::vector<Entity> acts;     // acts of the suspect
  std::vector<Entity> results;  // results anywhere in the case
  std::set<std::pair<std::string, std::string>> causes;  // (act, result)

  bool operator==(const CaseInventory&) const = default;
};

struct FactConflict {
  std::string predicate;
  std::vector<Constant> values;

  bool operator==(const FactConflict&) const = default;
};

struct RefinedFactSlice {
  std::map<ClauseId, std::map<std::string, SliceEntry>> clauses;
  CaseInventory inventory;
  std::vector<FactConflict> conflicts;
  // Facts dropped because their value lies outside the declared domain.
  std::vector<FactAtom> rejected;

  const SliceEntry* Find(const ClauseId& clause, const std::string& predicate) const;
  bool operator==(const RefinedFactSlice&) const = default;
};

enum class ConflictPolicy { kThrow, kRecord };

// Facts are taken to be about a single suspect: everything whose subject is
// not an act, result or victim entity counts as a suspect-level fact.
// With kThrow, incompatible values for a predicate raise ConflictingFacts.
RefinedFactSlice RefineFacts(const std::vector<FactAtom>& facts,
                             const std::vector<ConstraintRef>& constraints,
                             const StatuteKB& kb,
                             ConflictPolicy policy = ConflictPolicy::kThrow);

// Both offending bounds of an adjusted interval that became empty.
struct EmptyInterval {
  std::int64_t lower_months = 0;
  Sentence upper = std::int64_t{0};
  std::vector<std::string> lower_sources;
  std::vector<std::string> upper_sources;

  bool operator==(const EmptyInterval&) const = default;
};

using AdjustedInterval = std::variant<PenaltySpec, EmptyInterval>;

// L' = L + sum of aggravator deltas, U' = U - sum of mitigator deltas.
// A Life/Death upper bound is unaffected by mitigation. Throws ValueError
// when a delta's direction does not match its list.
AdjustedInterval AdjustInterval(const PenaltySpec& base,
                                const std::vector<AdjustmentDelta>& aggravators,
                                const std::vector<AdjustmentDelta>& mitigators);

// ---- ground problems ----------------------------------------------------

// Rail variable index: 2 * atom for the true rail, 2 * atom + 1 for the
// false rail.
inline int TrueRail(int atom) { return 2 * atom; }
inline int FalseRail(int atom) { return 2 * atom + 1; }

struct RailFormula {
  enum class Op { kTrue, kFalse, kVar, kNotVar, kAnd, kOr };
  Op op = Op::kTrue;
  int var = -1;
  std::vector<RailFormula> kids;

  static RailFormula Var(int v) { return {Op::kVar, v, {}}; }
  static RailFormula NotVar(int v) { return {Op::kNotVar, v, {}}; }
  // Pure conjunction of literals (facts, defaults, missing, inventory).
  bool IsLiteralConjunction() const;
  bool operator==(const RailFormula&) const = default;
};

enum class ConstraintKind {
  kFact,
  kDefault,
  kMissing,
  kInventory,
  kArticleGuard,
  kClauseGuard,
  kException,
  kPenaltyLower,
  kPenaltyUpper,
  kAggravate,
  kMitigate,
};

std::string_view ConstraintKindName(ConstraintKind kind);

inline bool IsSentenceConstraint(ConstraintKind k) {
  return k == ConstraintKind::kPenaltyLower || k == ConstraintKind::kPenaltyUpper ||
         k == ConstraintKind::kAggravate || k == ConstraintKind::kMitigate;
}

struct GroundConstraint {
  std::string source;  // e.g. "fact:DrugQuantity=2", "penalty:347.4:upper"
  ConstraintKind kind = ConstraintKind::kFact;
  RailFormula formula;           // Boolean part; kTrue for sentence bounds
  std::int64_t delta_months = 0;  // adjustments only

  bool operator==(const GroundConstraint&) const = default;
};

struct GroundAtom {
  std::string key;                       // canonical text
  std::optional<Atom> atom;              // plain atom
  std::optional<GuardExpr> existential;  // opaque existential
  Truth value = Truth::kUnknown;         // resolution against the slice
  std::optional<SourceSpan> span;

  bool operator==(const GroundAtom&) const = default;
};

struct GroundProblem {
  ClauseId clause_id;
  std::vector<GroundAtom> atoms;
  std::vector<GroundConstraint> constraints;
  Truth article_guard_value = Truth::kUnknown;
  Truth clause_guard_value = Truth::kUnknown;
  // Kleene value of "some exception holds".
  Truth exception_value = Truth::kFalse;
  std::optional<PenaltySpec> base_penalty;
  std::vector<AdjustmentDelta> applied_adjustments;
  // Unset for label-only clauses.
  std::optional<AdjustedInterval> adjusted;

  int FindAtom(const std::string& key) const;
  bool operator==(const GroundProblem&) const = default;
};

std::vector<GroundProblem> Encode(const RefinedFactSlice& slice,
                                  const std::vector<ConstraintRef>& constraints,
                                  const StatuteKB& kb);

// Three-valued evaluation of an existential against the inventory.
Truth ResolveExistential(const GuardExpr& exists_expr, const CaseInventory& inventory);

// Three-valued evaluation of a guard given resolved atoms.
Truth EvaluateResolved(const GuardExpr& expr, const GroundProblem& problem);

}  // namespace lexcheck

#endif  // LEXCHECK_COMPILER_H_
