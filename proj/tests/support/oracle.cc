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

#include "oracle.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace lexcheck::testing {
namespace {

using Rails = std::uint64_t;

Truth EvalPartial(const RailFormula& f, Rails rails, Rails known) {
  using Op = RailFormula::Op;
  auto rail = [&](int v) {
    if (!((known >> v) & 1U)) return Truth::kUnknown;
    return ((rails >> v) & 1U) ? Truth::kTrue : Truth::kFalse;
  };
  switch (f.op) {
    case Op::kTrue:
      return Truth::kTrue;
    case Op::kFalse:
      return Truth::kFalse;
    case Op::kVar:
      return rail(f.var);
    case Op::kNotVar:
      return KleeneNot(rail(f.var));
    case Op::kAnd: {
      Truth t = Truth::kTrue;
      for (const auto& k : f.kids) t = KleeneAnd(t, EvalPartial(k, rails, known));
      return t;
    }
    case Op::kOr: {
      Truth t = Truth::kFalse;
      for (const auto& k : f.kids) t = KleeneOr(t, EvalPartial(k, rails, known));
      return t;
    }
  }
  return Truth::kUnknown;
}

bool IsMember(const ExclusiveGroup& g, const Atom& a) {
  return std::find(g.members.begin(), g.members.end(), a) != g.members.end();
}

// Integer predicate with the truth of each of its comparison atoms at
// values covering every region of [0, infinity).
struct NumericPredicate {
  std::vector<std::size_t> atoms;
  std::vector<std::vector<bool>> truth_at;  // [probe][k]
};

std::vector<NumericPredicate> NumericPredicates(const GroundProblem& problem) {
  std::map<std::string, NumericPredicate> by_name;
  for (std::size_t i = 0; i < problem.atoms.size(); ++i) {
    const auto& a = problem.atoms[i].atom;
    if (a && a->IsComparison()) by_name[a->predicate].atoms.push_back(i);
  }
  std::vector<NumericPredicate> out;
  for (auto& [name, p] : by_name) {
    // Comparisons against c change truth only at c - 1, c and c + 1, so
    // those points and 0 cover every distinct row of [0, infinity).
    std::set<std::int64_t> probes{0};
    for (std::size_t i : p.atoms) {
      std::int64_t c = std::get<std::int64_t>(problem.atoms[i].atom->value);
      for (std::int64_t v : {c - 1, c, c + 1}) {
        if (v >= 0) probes.insert(v);
      }
    }
    for (std::int64_t v : probes) {
      std::vector<bool> row;
      for (std::size_t i : p.atoms) {
        const Atom& a = *problem.atoms[i].atom;
        row.push_back(Compare(v, a.op, std::get<std::int64_t>(a.value)));
      }
      p.truth_at.push_back(std::move(row));
    }
    out.push_back(std::move(p));
  }
  return out;
}

bool BooleanModelExists(const GroundProblem& problem, const ExclusivityAxioms& axioms,
                        const std::vector<bool>& active) {
  const std::size_t n = problem.atoms.size();
  if (n > 31) throw std::invalid_argument("oracle limited to 31 atoms");
  std::vector<const RailFormula*> formulas;
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    if (active[k] && !IsSentenceConstraint(problem.constraints[k].kind)) {
      formulas.push_back(&problem.constraints[k].formula);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& g : axioms) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (problem.atoms[i].atom && IsMember(g, *problem.atoms[i].atom)) members.push_back(i);
    }
    groups.push_back(std::move(members));
  }
  auto numeric = NumericPredicates(problem);

  // state[i]: 0 true, 1 false, 2 neither, -1 not yet assigned. Partial
  // assignments are pruned as soon as a formula is false whatever the
  // unassigned atoms hold.
  std::vector<int> state(n, -1);
  auto coherent = [&]() {
    for (const auto& g : groups) {
      int on = 0;
      for (std::size_t i : g) on += state[i] == 0;
      if (on > 1) return false;
    }
    for (const auto& p : numeric) {
      bool any = false;
      for (const auto& row : p.truth_at) {
        bool fits = true;
        for (std::size_t k = 0; k < p.atoms.size() && fits; ++k) {
          int s = state[p.atoms[k]];
          if ((s == 0 && !row[k]) || (s == 1 && row[k])) fits = false;
        }
        if (fits) {
          any = true;
          break;
        }
      }
      if (!any) return false;
    }
    return true;
  };
  Rails rails = 0;
  Rails known = 0;
  std::function<bool(std::size_t)> extend = [&](std::size_t i) {
    for (const RailFormula* f : formulas) {
      if (EvalPartial(*f, rails, known) == Truth::kFalse) return false;
    }
    if (!coherent()) return false;
    if (i == n) return true;
    const Rails t = Rails{1} << TrueRail(static_cast<int>(i));
    const Rails f = Rails{1} << FalseRail(static_cast<int>(i));
    known |= t | f;
    for (int s = 0; s < 3; ++s) {
      state[i] = s;
      rails = (rails & ~(t | f)) | (s == 0 ? t : 0) | (s == 1 ? f : 0);
      if (extend(i + 1)) return true;
    }
    state[i] = -1;
    rails &= ~(t | f);
    known &= ~(t | f);
    return false;
  };
  return extend(0);
}

bool SentenceAdmitted(const GroundProblem& problem, const std::vector<bool>& active,
                      std::int64_t y) {
  if (!problem.base_penalty) return true;
  const PenaltySpec& base = *problem.base_penalty;
  std::int64_t raise = 0;
  std::int64_t cut = 0;
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    if (!active[k]) continue;
    const auto& c = problem.constraints[k];
    if (c.kind == ConstraintKind::kAggravate) raise += c.delta_months;
    if (c.kind == ConstraintKind::kMitigate) cut += c.delta_months;
  }
  const auto* upper = std::get_if<std::int64_t>(&base.upper);
  auto above_lower = [&](std::int64_t shift) {
    return base.lower_strict ? y > base.lower_months + shift : y >= base.lower_months + shift;
  };
  auto below_upper = [&](std::int64_t shift) {
    if (!upper) return true;
    return base.upper_strict ? y < *upper - shift : y <= *upper - shift;
  };
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    if (!active[k]) continue;
    switch (problem.constraints[k].kind) {
      case ConstraintKind::kPenaltyLower:
        if (!above_lower(0)) return false;
        break;
      case ConstraintKind::kAggravate:
        if (!above_lower(raise)) return false;
        break;
      case ConstraintKind::kPenaltyUpper:
        if (!below_upper(0)) return false;
        break;
      case ConstraintKind::kMitigate:
        if (!below_upper(cut)) return false;
        break;
      default:
        break;
    }
  }
  return true;
}

// Assignment of the atoms of two guards.
struct GuardWorld {
  std::map<Atom, bool> atoms;
  std::map<std::string, bool> opaque;
  std::map<std::string, std::int64_t> numbers;
};

bool EvalGuard(const GuardExpr& e, const GuardWorld& w) {
  using K = GuardExpr::Kind;
  switch (e.kind) {
    case K::kTrue:
      return true;
    case K::kFalse:
      return false;
    case K::kAtom:
      if (e.atom.IsComparison()) {
        return Compare(w.numbers.at(e.atom.predicate), e.atom.op,
                       std::get<std::int64_t>(e.atom.value));
      }
      return w.atoms.at(e.atom);
    case K::kExists:
      return w.opaque.at(e.ToString());
    case K::kCaused:
      return w.opaque.at("caused");
    case K::kNot:
      return !EvalGuard(e.children[0], w);
    case K::kAnd:
      return std::all_of(e.children.begin(), e.children.end(),
                         [&](const GuardExpr& c) { return EvalGuard(c, w); });
    case K::kOr:
      return std::any_of(e.children.begin(), e.children.end(),
                         [&](const GuardExpr& c) { return EvalGuard(c, w); });
  }
  return false;
}

void CollectGuardAtoms(const GuardExpr& e, std::set<Atom>& plain, std::set<std::string>& opaque,
                       std::map<std::string, std::int64_t>& numbers) {
  using K = GuardExpr::Kind;
  switch (e.kind) {
    case K::kAtom:
      if (e.atom.IsComparison()) {
        auto c = std::get<std::int64_t>(e.atom.value);
        auto [it, fresh] = numbers.emplace(e.atom.predicate, c);
        if (!fresh) it->second = std::max(it->second, c);
      } else {
        plain.insert(e.atom);
      }
      return;
    case K::kExists:
      opaque.insert(e.ToString());
      return;
    case K::kCaused:
      opaque.insert("caused");
      return;
    default:
      for (const auto& c : e.children) CollectGuardAtoms(c, plain, opaque, numbers);
  }
}

}  // namespace

std::vector<std::int64_t> OracleAdmissibleMonths(const GroundProblem& problem,
                                                 const ExclusivityAxioms& axioms,
                                                 const std::vector<bool>& active) {
  std::vector<std::int64_t> months;
  for (std::int64_t y = 0; y <= kOracleMaxMonths; ++y) {
    if (SentenceAdmitted(problem, active, y)) months.push_back(y);
  }
  if (months.empty() || !BooleanModelExists(problem, axioms, active)) return {};
  return months;
}

bool OracleSatisfiable(const GroundProblem& problem, const ExclusivityAxioms& axioms,
                       const std::vector<bool>& active) {
  return !OracleAdmissibleMonths(problem, axioms, active).empty();
}

bool OracleImplies(const GuardExpr& g1, const GuardExpr& g2, const ExclusivityAxioms& axioms) {
  std::set<Atom> plain;
  std::set<std::string> opaque;
  std::map<std::string, std::int64_t> numbers;
  CollectGuardAtoms(g1, plain, opaque, numbers);
  CollectGuardAtoms(g2, plain, opaque, numbers);

  // Enumeration units: one per exclusive group (which member holds, or
  // none), one per remaining atom, one per integer predicate.
  std::vector<std::function<int()>> sizes;
  std::vector<std::function<void(GuardWorld&, int)>> setters;
  std::set<Atom> grouped;
  for (const auto& g : axioms) {
    std::vector<Atom> members;
    for (const auto& a : plain) {
      if (IsMember(g, a) && !grouped.count(a)) members.push_back(a);
    }
    if (members.empty()) continue;
    grouped.insert(members.begin(), members.end());
    sizes.push_back([n = static_cast<int>(members.size()) + 1] { return n; });
    setters.push_back([members](GuardWorld& w, int pick) {
      for (std::size_t i = 0; i < members.size(); ++i) {
        w.atoms[members[i]] = static_cast<int>(i) == pick;
      }
    });
  }
  for (const auto& a : plain) {
    if (grouped.count(a)) continue;
    sizes.push_back([] { return 2; });
    setters.push_back([a](GuardWorld& w, int v) { w.atoms[a] = v == 1; });
  }
  for (const auto& k : opaque) {
    sizes.push_back([] { return 2; });
    setters.push_back([k](GuardWorld& w, int v) { w.opaque[k] = v == 1; });
  }
  for (const auto& [pred, top] : numbers) {
    sizes.push_back([top] { return static_cast<int>(top) + 2; });
    setters.push_back([pred](GuardWorld& w, int v) { w.numbers[pred] = v; });
  }

  GuardWorld world;
  std::function<bool(std::size_t)> no_counterexample = [&](std::size_t u) {
    if (u == setters.size()) return !EvalGuard(g1, world) || EvalGuard(g2, world);
    for (int v = 0; v < sizes[u](); ++v) {
      setters[u](world, v);
      if (!no_counterexample(u + 1)) return false;
    }
    return true;
  };
  return no_counterexample(0);
}

bool OracleCoreIsMinimal(const GroundProblem& problem, const ExclusivityAxioms& axioms,
                         const std::vector<std::size_t>& core) {
  if (core.size() >= 20) throw std::invalid_argument("core too large for subset enumeration");
  const std::size_t full = (std::size_t{1} << core.size()) - 1;
  for (std::size_t bits = 0; bits <= full; ++bits) {
    std::vector<bool> active(problem.constraints.size(), false);
    for (std::size_t k = 0; k < core.size(); ++k) active[core[k]] = (bits >> k) & 1U;
    bool sat = OracleSatisfiable(problem, axioms, active);
    if (sat != (bits != full)) return false;
  }
  return true;
}

}  // namespace lexcheck::testing
