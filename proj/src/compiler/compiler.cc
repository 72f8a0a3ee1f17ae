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

#include "lexcheck/compiler.h"

#include <algorithm>

#include "lexcheck/errors.h"

namespace lexcheck {
namespace {

std::optional<Constant> ToConstant(const FactValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* n = std::get_if<std::int64_t>(&v)) return *n;
  return std::nullopt;
}

template <typename T>
void PushUnique(std::vector<T>& out, const T& v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

bool InSameGroup(const ExclusivityAxioms& axioms, const Atom& a, const Atom& b) {
  for (const auto& g : axioms) {
    bool has_a = std::find(g.members.begin(), g.members.end(), a) != g.members.end();
    bool has_b = std::find(g.members.begin(), g.members.end(), b) != g.members.end();
    if (has_a && has_b) return true;
  }
  return false;
}

// Kleene value of an atom given every value asserted for its predicate.
// Enum equality is closed-world; otherwise all values must agree.
Truth AtomAgainstValues(const Atom& atom, const std::vector<Constant>& values) {
  if (values.empty()) return Truth::kUnknown;
  if (atom.IsBoolean()) {
    bool want = std::get<bool>(atom.value);
    int yes = 0;
    int no = 0;
    for (const auto& v : values) {
      const auto* b = std::get_if<bool>(&v);
      if (!b) return Truth::kUnknown;
      (*b == want ? yes : no)++;
    }
    return no == 0 ? Truth::kTrue : (yes == 0 ? Truth::kFalse : Truth::kUnknown);
  }
  if (const auto* want = std::get_if<std::string>(&atom.value)) {
    bool typed = false;
    for (const auto& v : values) {
      if (const auto* s = std::get_if<std::string>(&v)) {
        typed = true;
        if (*s == *want) return Truth::kTrue;
      }
    }
    return typed ? Truth::kFalse : Truth::kUnknown;
  }
  const auto threshold = std::get<std::int64_t>(atom.value);
  int yes = 0;
  int no = 0;
  for (const auto& v : values) {
    const auto* n = std::get_if<std::int64_t>(&v);
    if (!n) return Truth::kUnknown;
    (Compare(*n, atom.op, threshold) ? yes : no)++;
  }
  return no == 0 ? Truth::kTrue : (yes == 0 ? Truth::kFalse : Truth::kUnknown);
}

Truth EvalOnEntity(const GuardExpr& e, const Entity& entity, ExistsScope scope,
                   const CaseInventory& inv) {
  using K = GuardExpr::Kind;
  switch (e.kind) {
    case K::kTrue:
      return Truth::kTrue;
    case K::kFalse:
      return Truth::kFalse;
    case K::kAtom: {
      auto it = entity.attributes.find(e.atom.predicate);
      if (it == entity.attributes.end()) return Truth::kUnknown;
      return AtomAgainstValues(e.atom, it->second);
    }
    case K::kCaused:
      for (const auto& [act, result] : inv.causes) {
        bool own_act = std::any_of(inv.acts.begin(), inv.acts.end(),
                                   [&](const Entity& a) { return a.id == act; });
        if (!own_act) continue;
        if (scope == ExistsScope::kResult ? result == entity.id : act == entity.id) {
          return Truth::kTrue;
        }
      }
      return Truth::kFalse;
    case K::kNot:
      return KleeneNot(EvalOnEntity(e.children[0], entity, scope, inv));
    case K::kAnd: {
      Truth t = Truth::kTrue;
      for (const auto& c : e.children) t = KleeneAnd(t, EvalOnEntity(c, entity, scope, inv));
      return t;
    }
    case K::kOr: {
      Truth t = Truth::kFalse;
      for (const auto& c : e.children) t = KleeneOr(t, EvalOnEntity(c, entity, scope, inv));
      return t;
    }
    case K::kExists:
      return ResolveExistential(e, inv);
  }
  return Truth::kUnknown;
}

std::vector<std::string> ReferencedPredicates(const StatuteArticle& art, const Clause& clause) {
  std::vector<std::string> out;
  auto add = [&](const GuardExpr& g) {
    for (const auto& a : TopLevelAtoms(g)) PushUnique(out, a.predicate);
  };
  add(art.article_guard);
  add(clause.guard);
  for (const auto& x : clause.exceptions) add(x);
  for (const auto& adj : clause.adjustments) add(adj.trigger);
  return out;
}

struct SuspectFacts {
  std::map<std::string, std::vector<const FactAtom*>> by_predicate;
};


std::vector<GuardExpr> Conjuncts(const GuardExpr& g) {
  if (g.kind == GuardExpr::Kind::kTrue) return {};
  if (g.kind == GuardExpr::Kind::kAnd) return g.children;
  return {g};
}

class ProblemBuilder {
 public:
  ProblemBuilder(const RefinedFactSlice& slice, const StatuteArticle& art,
                 const Clause& clause, const StatuteKB& kb)
      : slice_(slice), art_(art), clause_(clause), kb_(kb) {}

  GroundProblem Build() {
    problem_.clause_id = clause_.id;
    std::vector<const GuardExpr*> guards{&art_.article_guard, &clause_.guard};
    for (const auto& x : clause_.exceptions) guards.push_back(&x);
    for (const auto& a : clause_.adjustments) guards.push_back(&a.trigger);
    for (const GuardExpr* g : guards) {
      for (const auto& a : TopLevelAtoms(*g)) AddAtom(a);
      for (const auto& x : TopLevelExistentials(*g)) AddExistential(x);
    }
    const auto* entries = FindEntries();
    if (entries) {
      for (const auto& [pred, entry] : *entries) {
        for (const auto& v : entry.values) {
          if (std::holds_alternative<std::string>(v)) AddAtom(Atom{pred, CompareOp::kEq, v});
        }
      }
    }
    Resolve(entries);
    AddValueConstraints(entries);
    AddInventoryConstraints();
    AddGuardConstraints();
    AddSentenceConstraints();
    return std::move(problem_);
  }

 private:
  const std::map<std::string, SliceEntry>* FindEntries() const {
    auto it = slice_.clauses.find(clause_.id);
    return it == slice_.clauses.end() ? nullptr : &it->second;
  }

  void AddAtom(const Atom& a) {
    std::string key = a.ToString();
    if (problem_.FindAtom(key) >= 0) return;
    GroundAtom g;
    g.key = key;
    g.atom = a;
    problem_.atoms.push_back(std::move(g));
  }

  void AddExistential(const GuardExpr& x) {
    std::string key = x.ToString();
    if (problem_.FindAtom(key) >= 0) return;
    GroundAtom g;
    g.key = key;
    g.existential = x;
    problem_.atoms.push_back(std::move(g));
  }

  void Resolve(const std::map<std::string, SliceEntry>* entries) {
    for (auto& g : problem_.atoms) {
      if (g.existential) {
        g.value = ResolveExistential(*g.existential, slice_.inventory);
        continue;
      }
      if (!entries) continue;
      auto it = entries->find(g.atom->predicate);
      if (it == entries->end()) continue;
      g.value = AtomAgainstValues(*g.atom, it->second.values);
      g.span = it->second.span;
    }
  }

  std::vector<int> AtomsOf(const std::string& pred) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < problem_.atoms.size(); ++i) {
      const auto& g = problem_.atoms[i];
      if (g.atom && g.atom->predicate == pred) out.push_back(static_cast<int>(i));
    }
    return out;
  }

  // Literals pinned by one asserted value of a predicate.
  RailFormula ValueLiterals(const std::string& pred, const Constant& v,
                            const std::vector<Constant>& all_values) const {
    RailFormula f{RailFormula::Op::kAnd, -1, {}};
    for (int i : AtomsOf(pred)) {
      const Atom& a = *problem_.atoms[i].atom;
      std::optional<bool> holds;
      if (a.IsBoolean()) {
        if (const auto* b = std::get_if<bool>(&v)) holds = (*b == std::get<bool>(a.value));
      } else if (const auto* want = std::get_if<std::string>(&a.value)) {
        if (const auto* s = std::get_if<std::string>(&v)) {
          if (*s == *want) {
            holds = true;
          } else if (std::find(all_values.begin(), all_values.end(), a.value) ==
                         all_values.end() &&
                     !InSameGroup(kb_.exclusivity_axioms, a, Atom{pred, CompareOp::kEq, v})) {
            holds = false;
          }
        }
      } else if (const auto* n = std::get_if<std::int64_t>(&v)) {
        holds = Compare(*n, a.op, std::get<std::int64_t>(a.value));
      }
      if (holds) f.kids.push_back(RailFormula::Var(*holds ? TrueRail(i) : FalseRail(i)));
    }
    if (f.kids.empty()) return RailFormula{};
    return f;
  }

  void AddValueConstraints(const std::map<std::string, SliceEntry>* entries) {
    if (!entries) return;
    for (const auto& [pred, entry] : *entries) {
      switch (entry.provenance) {
        case Provenance::kFromFact:
          for (const auto& v : entry.values) {
            problem_.constraints.push_back({"fact:" + pred + "=" + ConstantToString(v),
                                            ConstraintKind::kFact,
                                            ValueLiterals(pred, v, entry.values), 0});
          }
          break;
        case Provenance::kFromDefault:
          for (const auto& v : entry.values) {
            problem_.constraints.push_back(
                {"default:" + std::to_string(art_.article_no) + ":" + pred,
                 ConstraintKind::kDefault, ValueLiterals(pred, v, entry.values), 0});
          }
          break;
        case Provenance::kMissing: {
          RailFormula f{RailFormula::Op::kAnd, -1, {}};
          for (int i : AtomsOf(pred)) {
            f.kids.push_back(RailFormula::NotVar(TrueRail(i)));
            f.kids.push_back(RailFormula::NotVar(FalseRail(i)));
          }
          problem_.constraints.push_back({"missing:" + pred, ConstraintKind::kMissing,
                                          f.kids.empty() ? RailFormula{} : f, 0});
          break;
        }
      }
    }
  }

  void AddInventoryConstraints() {
    for (std::size_t i = 0; i < problem_.atoms.size(); ++i) {
      const auto& g = problem_.atoms[i];
      if (!g.existential) continue;
      int a = static_cast<int>(i);
      RailFormula f;
      switch (g.value) {
        case Truth::kTrue:
          f = RailFormula::Var(TrueRail(a));
          break;
        case Truth::kFalse:
          f = RailFormula::Var(FalseRail(a));
          break;
        case Truth::kUnknown:
          f = {RailFormula::Op::kAnd,
               -1,
               {RailFormula::NotVar(TrueRail(a)), RailFormula::NotVar(FalseRail(a))}};
          break;
      }
      problem_.constraints.push_back({"inventory:" + g.key, ConstraintKind::kInventory, f, 0});
    }
  }

  RailFormula Rail(const GuardExpr& e, bool negated) const {
    using K = GuardExpr::Kind;
    using Op = RailFormula::Op;
    switch (e.kind) {
      case K::kTrue:
        return {negated ? Op::kFalse : Op::kTrue, -1, {}};
      case K::kFalse:
      case K::kCaused:
        return {negated ? Op::kTrue : Op::kFalse, -1, {}};
      case K::kAtom:
      case K::kExists: {
        int i = problem_.FindAtom(e.kind == K::kAtom ? e.atom.ToString() : e.ToString());
        return RailFormula::Var(negated ? FalseRail(i) : TrueRail(i));
      }
      case K::kNot:
        return Rail(e.children[0], !negated);
      case K::kAnd:
      case K::kOr: {
        bool conj = (e.kind == K::kAnd) != negated;
        RailFormula f{conj ? Op::kAnd : Op::kOr, -1, {}};
        for (const auto& c : e.children) f.kids.push_back(Rail(c, negated));
        return f;
      }
    }
    return {};
  }

  void AddGuardConstraints() {
    const std::string art = std::to_string(art_.article_no);
    const std::string cl = clause_.id.ToString();
    auto conj = Conjuncts(art_.article_guard);
    for (std::size_t i = 0; i < conj.size(); ++i) {
      problem_.constraints.push_back({"article:" + art + "#" + std::to_string(i),
                                      ConstraintKind::kArticleGuard, Rail(conj[i], false), 0});
    }
    conj = Conjuncts(clause_.guard);
    for (std::size_t i = 0; i < conj.size(); ++i) {
      problem_.constraints.push_back({"clause:" + cl + "#" + std::to_string(i),
                                      ConstraintKind::kClauseGuard, Rail(conj[i], false), 0});
    }
    for (std::size_t i = 0; i < clause_.exceptions.size(); ++i) {
      problem_.constraints.push_back({"exception:" + cl + "#" + std::to_string(i),
                                      ConstraintKind::kException,
                                      Rail(clause_.exceptions[i], true), 0});
    }
    problem_.article_guard_value = EvaluateResolved(art_.article_guard, problem_);
    problem_.clause_guard_value = EvaluateResolved(clause_.guard, problem_);
    Truth exc = Truth::kFalse;
    for (const auto& x : clause_.exceptions) exc = KleeneOr(exc, EvaluateResolved(x, problem_));
    problem_.exception_value = exc;
  }

  void AddSentenceConstraints() {
    if (!clause_.penalty) return;
    const std::string cl = clause_.id.ToString();
    problem_.base_penalty = clause_.penalty;
    problem_.constraints.push_back({"penalty:" + cl + ":lower", ConstraintKind::kPenaltyLower,
                                    RailFormula{}, 0});
    problem_.constraints.push_back({"penalty:" + cl + ":upper", ConstraintKind::kPenaltyUpper,
                                    RailFormula{}, 0});
    std::vector<AdjustmentDelta> up;
    std::vector<AdjustmentDelta> down;
    for (const auto& adj : clause_.adjustments) {
      if (EvaluateResolved(adj.trigger, problem_) != Truth::kTrue) continue;
      problem_.applied_adjustments.push_back(adj);
      bool raise = adj.direction == AdjustDirection::kRaiseLower;
      (raise ? up : down).push_back(adj);
      problem_.constraints.push_back(
          {(raise ? "aggravate:" : "mitigate:") + cl + ":" + adj.name,
           raise ? ConstraintKind::kAggravate : ConstraintKind::kMitigate, RailFormula{},
           adj.delta_months});
    }
    problem_.adjusted = AdjustInterval(*clause_.penalty, up, down);
  }

  const RefinedFactSlice& slice_;
  const StatuteArticle& art_;
  const Clause& clause_;
  const StatuteKB& kb_;
  GroundProblem problem_;
};

}  // namespace

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kFromFact:
      return "FromFact";
    case Provenance::kFromDefault:
      return "FromDefault";
    case Provenance::kMissing:
      return "Missing";
  }
  return "Missing";
}

const SliceEntry* RefinedFactSlice::Find(const ClauseId& clause,
                                         const std::string& predicate) const {
  auto it = clauses.find(clause);
  if (it == clauses.end()) return nullptr;
  auto jt = it->second.find(predicate);
  return jt == it->second.end() ? nullptr : &jt->second;
}

RefinedFactSlice RefineFacts(const std::vector<FactAtom>& facts,
                             const std::vector<ConstraintRef>& constraints,
                             const StatuteKB& kb, ConflictPolicy policy) {
  RefinedFactSlice slice;
  std::set<std::string> entity_ids;
  std::map<std::string, std::size_t> act_index;
  std::map<std::string, std::size_t> result_index;
  for (const auto& f : facts) {
    if (f.kind == ElementKind::kAct) {
      if (const auto* p = std::get_if<IdPair>(&f.value)) {
        entity_ids.insert(p->first);
        if (!act_index.count(p->first)) {
          act_index[p->first] = slice.inventory.acts.size();
          slice.inventory.acts.push_back(Entity{p->first, {}, f.span});
        }
        PushUnique(slice.inventory.acts[act_index[p->first]].attributes[f.predicate],
                   Constant{p->second});
      }
    } else if (f.kind == ElementKind::kResult) {
      entity_ids.insert(f.subject_id);
      if (!result_index.count(f.subject_id)) {
        result_index[f.subject_id] = slice.inventory.results.size();
        slice.inventory.results.push_back(Entity{f.subject_id, {}, f.span});
      }
    } else if (f.kind == ElementKind::kVictim) {
      entity_ids.insert(f.subject_id);
    } else if (f.kind == ElementKind::kCauses) {
      if (const auto* p = std::get_if<IdPair>(&f.value)) {
        slice.inventory.causes.emplace(p->first, p->second);
      }
    }
  }

  SuspectFacts suspect;
  for (const auto& f : facts) {
    if (f.kind == ElementKind::kAct || f.kind == ElementKind::kCauses) continue;
    auto c = ToConstant(f.value);
    if (!c) continue;
    Entity* entity = nullptr;
    if (auto it = act_index.find(f.subject_id); it != act_index.end()) {
      entity = &slice.inventory.acts[it->second];
    } else if (auto jt = result_index.find(f.subject_id); jt != result_index.end()) {
      entity = &slice.inventory.results[jt->second];
    }
    if (entity) {
      PushUnique(entity->attributes[f.predicate], *c);
      continue;
    }
    if (entity_ids.count(f.subject_id)) continue;
    if (const auto* decl = kb.FindPredicate(f.predicate); decl && !decl->Admits(*c)) {
      slice.rejected.push_back(f);
      continue;
    }
    suspect.by_predicate[f.predicate].push_back(&f);
  }

  std::set<std::string> conflict_checked;
  for (const auto& ref : constraints) {
    auto& entries = slice.clauses[ref.clause->id];
    for (const auto& pred : ReferencedPredicates(*ref.article, *ref.clause)) {
      SliceEntry entry;
      auto it = suspect.by_predicate.find(pred);
      if (it != suspect.by_predicate.end()) {
        entry.provenance = Provenance::kFromFact;
        for (const FactAtom* f : it->second) {
          PushUnique(entry.values, *ToConstant(f->value));
          if (!entry.span && f->span) entry.span = f->span;
        }
      } else if (auto d = ref.article->field_defaults.find(pred);
                 d != ref.article->field_defaults.end()) {
        entry.provenance = Provenance::kFromDefault;
        entry.values.push_back(d->second);
      }
      if (entry.provenance == Provenance::kFromFact && conflict_checked.insert(pred).second &&
          entry.values.size() > 1) {
        std::vector<Constant> clash;
        for (std::size_t i = 0; i < entry.values.size(); ++i) {
          for (std::size_t j = i + 1; j < entry.values.size(); ++j) {
            const Constant& a = entry.values[i];
            const Constant& b = entry.values[j];
            bool incompatible = a.index() != b.index() ||
                                !std::holds_alternative<std::string>(a) ||
                                InSameGroup(kb.exclusivity_axioms,
                                            Atom{pred, CompareOp::kEq, a},
                                            Atom{pred, CompareOp::kEq, b});
            if (incompatible) {
              PushUnique(clash, a);
              PushUnique(clash, b);
            }
          }
        }
        if (!clash.empty()) {
          if (policy == ConflictPolicy::kThrow) {
            std::vector<std::string> text;
            for (const auto& v : clash) text.push_back(ConstantToString(v));
            throw ConflictingFacts(pred, text);
          }
          slice.conflicts.push_back({pred, clash});
        }
      }
      entries.emplace(pred, std::move(entry));
    }
  }
  return slice;
}

AdjustedInterval AdjustInterval(const PenaltySpec& base,
                                const std::vector<AdjustmentDelta>& aggravators,
                                const std::vector<AdjustmentDelta>& mitigators) {
  PenaltySpec out = base;
  EmptyInterval why;
  why.lower_sources.push_back("lower");
  why.upper_sources.push_back("upper");
  for (const auto& a : aggravators) {
    if (a.direction != AdjustDirection::kRaiseLower) {
      throw ValueError("mitigator '" + a.name + "' passed as aggravator");
    }
    out.lower_months += a.delta_months;
    why.lower_sources.push_back(a.name);
  }
  for (const auto& m : mitigators) {
    if (m.direction != AdjustDirection::kLowerUpper) {
      throw ValueError("aggravator '" + m.name + "' passed as mitigator");
    }
    if (auto* u = std::get_if<std::int64_t>(&out.upper)) *u -= m.delta_months;
    why.upper_sources.push_back(m.name);
  }
  if (!out.IsEmpty()) return out;
  why.lower_months = out.lower_months;
  why.upper = out.upper;
  return why;
}

bool RailFormula::IsLiteralConjunction() const {
  if (op == Op::kVar || op == Op::kNotVar || op == Op::kTrue) return true;
  if (op != Op::kAnd) return false;
  return std::all_of(kids.begin(), kids.end(), [](const RailFormula& k) {
    return k.op == Op::kVar || k.op == Op::kNotVar;
  });
}

std::string_view ConstraintKindName(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kFact:
      return "fact";
    case ConstraintKind::kDefault:
      return "default";
    case ConstraintKind::kMissing:
      return "missing";
    case ConstraintKind::kInventory:
      return "inventory";
    case ConstraintKind::kArticleGuard:
      return "article_guard";
    case ConstraintKind::kClauseGuard:
      return "clause_guard";
    case ConstraintKind::kException:
      return "exception";
    case ConstraintKind::kPenaltyLower:
      return "penalty_lower";
    case ConstraintKind::kPenaltyUpper:
      return "penalty_upper";
    case ConstraintKind::kAggravate:
      return "aggravate";
    case ConstraintKind::kMitigate:
      return "mitigate";
  }
  return "fact";
}

int GroundProblem::FindAtom(const std::string& key) const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].key == key) return static_cast<int>(i);
  }
  return -1;
}

std::vector<GroundProblem> Encode(const RefinedFactSlice& slice,
                                  const std::vector<ConstraintRef>& constraints,
                                  const StatuteKB& kb) {
  std::vector<GroundProblem> out;
  out.reserve(constraints.size());
  for (const auto& ref : constraints) {
    out.push_back(ProblemBuilder(slice, *ref.article, *ref.clause, kb).Build());
  }
  return out;
}

Truth ResolveExistential(const GuardExpr& exists_expr, const CaseInventory& inventory) {
  const auto& pool =
      exists_expr.scope == ExistsScope::kAct ? inventory.acts : inventory.results;
  Truth t = Truth::kFalse;
  for (const auto& entity : pool) {
    t = KleeneOr(t, EvalOnEntity(exists_expr.children[0], entity, exists_expr.scope, inventory));
    if (t == Truth::kTrue) break;
  }
  return t;
}

Truth EvaluateResolved(const GuardExpr& e, const GroundProblem& problem) {
  using K = GuardExpr::Kind;
  switch (e.kind) {
    case K::kTrue:
      return Truth::kTrue;
    case K::kFalse:
    case K::kCaused:
      return Truth::kFalse;
    case K::kAtom:
    case K::kExists: {
      int i = problem.FindAtom(e.kind == K::kAtom ? e.atom.ToString() : e.ToString());
      return i < 0 ? Truth::kUnknown : problem.atoms[i].value;
    }
    case K::kNot:
      return KleeneNot(EvaluateResolved(e.children[0], problem));
    case K::kAnd: {
      Truth t = Truth::kTrue;
      for (const auto& c : e.children) t = KleeneAnd(t, EvaluateResolved(c, problem));
      return t;
    }
    case K::kOr: {
      Truth t = Truth::kFalse;
      for (const auto& c : e.children) t = KleeneOr(t, EvaluateResolved(c, problem));
      return t;
    }
  }
  return Truth::kUnknown;
}

}  // namespace lexcheck
