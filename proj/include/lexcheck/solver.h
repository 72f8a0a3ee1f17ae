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

// Decision procedure for ground problems: satisfiability of the Boolean
// rail constraints plus the sentence interval, deletion-based unsat cores,
// and guard implication for specificity priority.

#ifndef LEXCHECK_SOLVER_H_
#define LEXCHECK_SOLVER_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexcheck/compiler.h"
#include "lexcheck/statute_kb.h"

namespace lexcheck {

enum class CoreKind {
  kConflictingFacts,
  kMissingElement,
  kIncompatibleGuards,
  kEmptyPenaltyInterval,
};

std::string_view CoreKindName(CoreKind kind);

struct UnsatCore {
  std::vector<std::string> members;  // constraint sources, in problem order
  CoreKind kind = CoreKind::kMissingElement;

  bool operator==(const UnsatCore&) const = default;
};

enum class SatStatus { kSat, kUnsat };

struct SolveResult {
  SatStatus status = SatStatus::kUnsat;
  std::optional<std::int64_t> witness_months;
  std::optional<PenaltySpec> satisfied_interval;
  std::optional<UnsatCore> core;

  bool sat() const { return status == SatStatus::kSat; }
};

// A subset of a problem's constraints, by index.
using ConstraintMask = std::vector<bool>;

// Satisfiability of the constraints selected by `active` together with the
// background theory (rail consistency, exclusivity, integer coherence).
bool IsSatisfiable(const GroundProblem& problem, const ExclusivityAxioms& axioms,
                   const ConstraintMask& active);

// Sentence bounds implied by the active sentence constraints; hi is unset
// when unbounded.
struct SentenceBounds {
  std::int64_t lo = 0;
  std::optional<std::int64_t> hi;
  bool empty() const { return hi && lo > *hi; }
};
SentenceBounds ActiveSentenceBounds(const GroundProblem& problem, const ConstraintMask& active);

SolveResult CheckSat(const GroundProblem& problem, const ExclusivityAxioms& axioms);

// Throws NotUnsat when the problem is satisfiable.
UnsatCore ComputeUnsatCore(const GroundProblem& problem, const ExclusivityAxioms& axioms);

CoreKind ClassifyCore(const GroundProblem& problem, const std::vector<std::string>& members);

enum class Implication { kImplies, kNotImplies, kUndecided };

std::string_view ImplicationName(Implication i);

// Classical implication over every world of the atoms in both guards that
// respects exclusivity and integer coherence. Existentials are opaque.
Implication Implies(const GuardExpr& g1, const GuardExpr& g2, const ExclusivityAxioms& axioms,
                    int atom_cap = 16);

// Fallback when enumeration is undecided: every literal of g2 also occurs
// in g1 with the same polarity.
bool SyntacticallySubsumes(const GuardExpr& g1, const GuardExpr& g2);

// ---- pluggable decision procedures -----------------------------------

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string_view name() const = 0;
  virtual SolveResult Submit(const GroundProblem& problem, const ExclusivityAxioms& axioms) = 0;
};

class BuiltinSolver final : public SolverBackend {
 public:
  std::string_view name() const override { return "builtin"; }
  SolveResult Submit(const GroundProblem& problem, const ExclusivityAxioms& axioms) override {
    return CheckSat(problem, axioms);
  }
};

// SMT-LIB2 rendering of a problem. Every removable constraint k is guarded
// by a selector asserted under the name c<k>, so (get-unsat-core) reports
// constraint indices.
std::string ToSmtLib(const GroundProblem& problem, const ExclusivityAxioms& axioms);

// Runs an external SMT solver as `<command> <script-file>` and reads
// "sat"/"unsat" plus the core list from its standard output.
class SmtProcessSolver final : public SolverBackend {
 public:
  explicit SmtProcessSolver(std::string command) : command_(std::move(command)) {}
  std::string_view name() const override { return "smt-process"; }
  SolveResult Submit(const GroundProblem& problem, const ExclusivityAxioms& axioms) override;

 private:
  std::string command_;
};

// Parses an SMT solver reply into a result for `problem`. Throws ParseError.
SolveResult ParseSmtReply(const GroundProblem& problem, std::string_view reply);

}  // namespace lexcheck

#endif  // LEXCHECK_SOLVER_H_
