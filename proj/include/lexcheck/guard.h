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

// Guard expressions: the condition language shared by article guards,
// clause guards, exception guards and adjustment triggers.

#ifndef LEXCHECK_GUARD_H_
#define LEXCHECK_GUARD_H_

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace lexcheck {

enum class CompareOp { kLt, kLe, kEq, kGe, kGt };

std::string_view CompareOpSymbol(CompareOp op);
bool Compare(std::int64_t lhs, CompareOp op, std::int64_t rhs);

// bool | enum token | integer
using Constant = std::variant<bool, std::string, std::int64_t>;

std::string ConstantToString(const Constant& c);

// predicate ⋈ constant. A bare boolean predicate `P` is {P, ==, true}.
struct Atom {
  std::string predicate;
  CompareOp op = CompareOp::kEq;
  Constant value = true;

  bool IsBoolean() const {
    return op == CompareOp::kEq && std::holds_alternative<bool>(value);
  }
  bool IsComparison() const { return std::holds_alternative<std::int64_t>(value); }
  std::string ToString() const;
  auto operator<=>(const Atom&) const = default;
};

enum class ExistsScope { kAct, kResult };

// Three-valued truth used when facts may be missing (strong Kleene logic).
enum class Truth { kFalse, kTrue, kUnknown };

Truth KleeneNot(Truth t);
Truth KleeneAnd(Truth a, Truth b);
Truth KleeneOr(Truth a, Truth b);
std::string_view TruthName(Truth t);

struct GuardExpr {
  enum class Kind { kTrue, kFalse, kAtom, kAnd, kOr, kNot, kExists, kCaused };

  Kind kind = Kind::kTrue;
  Atom atom;                         // kAtom
  std::vector<GuardExpr> children;   // kAnd/kOr (n-ary), kNot/kExists (one)
  ExistsScope scope = ExistsScope::kResult;  // kExists

  static GuardExpr True();
  static GuardExpr False();
  static GuardExpr MakeAtom(Atom atom);
  // And/Or flatten nested nodes of the same kind; a single child collapses.
  // Not folds constants and double negation.
  static GuardExpr And(std::vector<GuardExpr> children);
  static GuardExpr Or(std::vector<GuardExpr> children);
  static GuardExpr Not(GuardExpr child);
  static GuardExpr Exists(ExistsScope scope, GuardExpr body);
  static GuardExpr Caused();

  // Canonical rule-language text; parsing it yields an equal tree.
  std::string ToString() const;
  int Depth() const;

  bool operator==(const GuardExpr&) const = default;
};

// Atoms reachable without entering an existential.
std::vector<Atom> TopLevelAtoms(const GuardExpr& expr);

// Every atom, including those inside existential bodies.
std::vector<Atom> AllAtoms(const GuardExpr& expr);

// Existential sub-expressions not nested in another existential.
std::vector<GuardExpr> TopLevelExistentials(const GuardExpr& expr);

// Predicate names mentioned anywhere in the expression.
std::set<std::string> PredicateNames(const GuardExpr& expr);

}  // namespace lexcheck

#endif  // LEXCHECK_GUARD_H_
