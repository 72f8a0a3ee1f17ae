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

#include "lexcheck/solver.h"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "lexcheck/errors.h"

namespace lexcheck {
namespace {

// -1 unassigned, 0 false, 1 true.
using Partial = std::vector<signed char>;

// Enumerates the worlds of a set of atoms: total truth assignments that
// respect exclusivity groups and come from some integer value for every
// compared predicate. Integer predicates are enumerated over one
// representative per region cut out by their thresholds (never negative).
class WorldSpace {
 public:
  WorldSpace(const std::vector<const Atom*>& atoms, const ExclusivityAxioms& axioms)
      : atoms_(atoms) {
    std::map<std::string, std::size_t> numeric;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Atom* a = atoms[i];
      if (a && a->IsComparison()) {
        auto [it, fresh] = numeric.emplace(a->predicate, units_.size());
        if (fresh) units_.push_back(Unit{});
        units_[it->second].atoms.push_back(i);
        continue;
      }
      units_.push_back(Unit{{i}, {}});
    }
    for (auto& u : units_) {
      if (u.atoms.size() == 1 && !(atoms_[u.atoms[0]] && atoms_[u.atoms[0]]->IsComparison())) {
        continue;
      }
      std::set<std::int64_t> reps{0};
      for (std::size_t i : u.atoms) {
        std::int64_t c = std::get<std::int64_t>(atoms_[i]->value);
        for (std::int64_t d : {c - 1, c, c + 1}) {
          if (d >= 0) reps.insert(d);
        }
      }
      u.values.assign(reps.begin(), reps.end());
    }
    for (const auto& g : axioms) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i] &&
            std::find(g.members.begin(), g.members.end(), *atoms[i]) != g.members.end()) {
          members.push_back(i);
        }
      }
      if (members.size() > 1) groups_.push_back(std::move(members));
    }
  }

  using Check = std::function<bool(const Partial&)>;

  // Depth-first search; returns true as soon as `accept` accepts a world.
  bool Search(const Partial& forced, const Check& viable, const Check& accept) const {
    Partial state(atoms_.size(), -1);
    return Visit(0, forced, state, viable, accept);
  }

 private:
  struct Unit {
    std::vector<std::size_t> atoms;
    std::vector<std::int64_t> values;  // empty for a plain Boolean atom
  };

  bool ExclusiveOk(const Partial& state) const {
    for (const auto& g : groups_) {
      int on = 0;
      for (std::size_t i : g) on += state[i] == 1;
      if (on > 1) return false;
    }
    return true;
  }

  bool Visit(std::size_t u, const Partial& forced, Partial& state, const Check& viable,
             const Check& accept) const {
    if (u == units_.size()) return accept(state);
    const Unit& unit = units_[u];
    auto step = [&]() {
      return ExclusiveOk(state) && viable(state) && Visit(u + 1, forced, state, viable, accept);
    };
    if (unit.values.empty()) {
      std::size_t i = unit.atoms[0];
      for (signed char v : {1, 0}) {
        if (forced[i] != -1 && forced[i] != v) continue;
        state[i] = v;
        if (step()) return true;
      }
      state[i] = -1;
      return false;
    }
    for (std::int64_t value : unit.values) {
      bool ok = true;
      for (std::size_t i : unit.atoms) {
        const Atom& a = *atoms_[i];
        signed char v = Compare(value, a.op, std::get<std::int64_t>(a.value)) ? 1 : 0;
        if (forced[i] != -1 && forced[i] != v) ok = false;
        state[i] = v;
      }
      if (ok && step()) return true;
    }
    for (std::size_t i : unit.atoms) state[i] = -1;
    return false;
  }

  std::vector<const Atom*> atoms_;
  std::vector<Unit> units_;
  std::vector<std::vector<std::size_t>> groups_;
};

std::vector<const Atom*> AtomPointers(const GroundProblem& problem) {
  std::vector<const Atom*> out;
  for (const auto& g : problem.atoms) out.push_back(g.atom ? &*g.atom : nullptr);
  return out;
}

// Three-valued rail formula evaluation; rails in `off` are false.
Truth EvalRails(const RailFormula& f, const Partial& world, const std::vector<bool>& off) {
  using Op = RailFormula::Op;
  auto rail = [&](int v) {
    if (off[v]) return Truth::kFalse;
    signed char w = world[v / 2];
    if (w == -1) return Truth::kUnknown;
    return (v % 2 == 0) == (w == 1) ? Truth::kTrue : Truth::kFalse;
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
      for (const auto& k : f.kids) {
        t = KleeneAnd(t, EvalRails(k, world, off));
        if (t == Truth::kFalse) break;
      }
      return t;
    }
    case Op::kOr: {
      Truth t = Truth::kFalse;
      for (const auto& k : f.kids) {
        t = KleeneOr(t, EvalRails(k, world, off));
        if (t == Truth::kTrue) break;
      }
      return t;
    }
  }
  return Truth::kUnknown;
}

void CollectLiterals(const RailFormula& f, std::vector<int>& on, std::vector<int>& off) {
  if (f.op == RailFormula::Op::kVar) on.push_back(f.var);
  if (f.op == RailFormula::Op::kNotVar) off.push_back(f.var);
  for (const auto& k : f.kids) CollectLiterals(k, on, off);
}

bool BooleanPartSatisfiable(const GroundProblem& problem, const ExclusivityAxioms& axioms,
                            const ConstraintMask& active) {
  const std::size_t n = problem.atoms.size();
  std::vector<bool> rail_on(2 * n, false);
  std::vector<bool> rail_off(2 * n, false);
  std::vector<const RailFormula*> guards;
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    if (!active[k]) continue;
    const RailFormula& f = problem.constraints[k].formula;
    if (f.op == RailFormula::Op::kFalse) return false;
    if (f.IsLiteralConjunction()) {
      std::vector<int> on;
      std::vector<int> off;
      CollectLiterals(f, on, off);
      for (int v : on) rail_on[v] = true;
      for (int v : off) rail_off[v] = true;
    } else {
      guards.push_back(&f);
    }
  }
  Partial forced(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    bool t = rail_on[TrueRail(static_cast<int>(i))];
    bool f = rail_on[FalseRail(static_cast<int>(i))];
    if ((t && f) || (t && rail_off[TrueRail(static_cast<int>(i))]) ||
        (f && rail_off[FalseRail(static_cast<int>(i))])) {
      return false;
    }
    if (t) forced[i] = 1;
    if (f) forced[i] = 0;
  }
  WorldSpace space(AtomPointers(problem), axioms);
  auto viable = [&](const Partial& w) {
    for (const RailFormula* g : guards) {
      if (EvalRails(*g, w, rail_off) == Truth::kFalse) return false;
    }
    return true;
  };
  auto accept = [&](const Partial& w) {
    for (const RailFormula* g : guards) {
      if (EvalRails(*g, w, rail_off) != Truth::kTrue) return false;
    }
    return true;
  };
  return space.Search(forced, viable, accept);
}

PenaltySpec Unrestricted() {
  PenaltySpec p;
  p.upper = SpecialSentence::kDeath;
  return p;
}

// Classical evaluation against a world over `keys`.
bool EvalWorld(const GuardExpr& e, const std::map<std::string, std::size_t>& keys,
               const Partial& w) {
  using K = GuardExpr::Kind;
  switch (e.kind) {
    case K::kTrue:
      return true;
    case K::kFalse:
      return false;
    case K::kCaused: {
      auto it = keys.find("caused");
      return it != keys.end() && w[it->second] == 1;
    }
    case K::kAtom:
      return w[keys.at(e.atom.ToString())] == 1;
    case K::kExists:
      return w[keys.at(e.ToString())] == 1;
    case K::kNot:
      return !EvalWorld(e.children[0], keys, w);
    case K::kAnd:
      return std::all_of(e.children.begin(), e.children.end(),
                         [&](const GuardExpr& c) { return EvalWorld(c, keys, w); });
    case K::kOr:
      return std::any_of(e.children.begin(), e.children.end(),
                         [&](const GuardExpr& c) { return EvalWorld(c, keys, w); });
  }
  return false;
}

// `caused` outside any existential (only inside existential bodies being
// checked on their own) behaves as an opaque atom.
bool HasFreeCaused(const GuardExpr& e) {
  if (e.kind == GuardExpr::Kind::kCaused) return true;
  if (e.kind == GuardExpr::Kind::kExists) return false;
  return std::any_of(e.children.begin(), e.children.end(), HasFreeCaused);
}

void CollectPolarLiterals(const GuardExpr& e, bool positive,
                          std::set<std::pair<std::string, bool>>& out) {
  using K = GuardExpr::Kind;
  switch (e.kind) {
    case K::kAtom:
      out.emplace(e.atom.ToString(), positive);
      return;
    case K::kExists:
      out.emplace(e.ToString(), positive);
      return;
    case K::kNot:
      CollectPolarLiterals(e.children[0], !positive, out);
      return;
    default:
      for (const auto& c : e.children) CollectPolarLiterals(c, positive, out);
  }
}

std::string SmtFormula(const RailFormula& f) {
  using Op = RailFormula::Op;
  switch (f.op) {
    case Op::kTrue:
      return "true";
    case Op::kFalse:
      return "false";
    case Op::kVar:
      return "r" + std::to_string(f.var);
    case Op::kNotVar:
      return "(not r" + std::to_string(f.var) + ")";
    case Op::kAnd:
    case Op::kOr: {
      if (f.kids.empty()) return f.op == Op::kAnd ? "true" : "false";
      std::string out = f.op == Op::kAnd ? "(and" : "(or";
      for (const auto& k : f.kids) out += " " + SmtFormula(k);
      return out + ")";
    }
  }
  return "true";
}

std::string SmtOp(CompareOp op) {
  return op == CompareOp::kEq ? "=" : std::string(CompareOpSymbol(op));
}

}  // namespace

std::string_view CoreKindName(CoreKind kind) {
  switch (kind) {
    case CoreKind::kConflictingFacts:
      return "ConflictingFacts";
    case CoreKind::kMissingElement:
      return "MissingElement";
    case CoreKind::kIncompatibleGuards:
      return "IncompatibleGuards";
    case CoreKind::kEmptyPenaltyInterval:
      return "EmptyPenaltyInterval";
  }
  return "MissingElement";
}

std::string_view ImplicationName(Implication i) {
  switch (i) {
    case Implication::kImplies:
      return "Implies";
    case Implication::kNotImplies:
      return "NotImplies";
    case Implication::kUndecided:
      return "Undecided";
  }
  return "Undecided";
}

SentenceBounds ActiveSentenceBounds(const GroundProblem& problem, const ConstraintMask& active) {
  SentenceBounds b;
  if (!problem.base_penalty) return b;
  const PenaltySpec& base = *problem.base_penalty;
  bool lower = false;
  bool upper = false;
  bool any_up = false;
  bool any_down = false;
  std::int64_t up = 0;
  std::int64_t down = 0;
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    if (!active[k]) continue;
    const auto& c = problem.constraints[k];
    switch (c.kind) {
      case ConstraintKind::kPenaltyLower:
        lower = true;
        break;
      case ConstraintKind::kPenaltyUpper:
        upper = true;
        break;
      case ConstraintKind::kAggravate:
        any_up = true;
        up += c.delta_months;
        break;
      case ConstraintKind::kMitigate:
        any_down = true;
        down += c.delta_months;
        break;
      default:
        break;
    }
  }
  // An adjustment carries the base bound it shifts.
  if (any_up) {
    b.lo = base.MinMonths() + up;
  } else if (lower) {
    b.lo = base.MinMonths();
  }
  if (auto max = base.MaxMonths(); max && (any_down || upper)) {
    b.hi = *max - (any_down ? down : 0);
  }
  return b;
}

bool IsSatisfiable(const GroundProblem& problem, const ExclusivityAxioms& axioms,
                   const ConstraintMask& active) {
  if (ActiveSentenceBounds(problem, active).empty()) return false;
  return BooleanPartSatisfiable(problem, axioms, active);
}

SolveResult CheckSat(const GroundProblem& problem, const ExclusivityAxioms& axioms) {
  ConstraintMask all(problem.constraints.size(), true);
  SolveResult r;
  if (IsSatisfiable(problem, axioms, all)) {
    r.status = SatStatus::kSat;
    r.witness_months = ActiveSentenceBounds(problem, all).lo;
    if (problem.adjusted) {
      r.satisfied_interval = std::get<PenaltySpec>(*problem.adjusted);
    } else {
      r.satisfied_interval = Unrestricted();
    }
    return r;
  }
  r.status = SatStatus::kUnsat;
  r.core = ComputeUnsatCore(problem, axioms);
  return r;
}

UnsatCore ComputeUnsatCore(const GroundProblem& problem, const ExclusivityAxioms& axioms) {
  ConstraintMask active(problem.constraints.size(), true);
  if (IsSatisfiable(problem, axioms, active)) throw NotUnsat();
  for (std::size_t k = 0; k < active.size(); ++k) {
    active[k] = false;
    if (IsSatisfiable(problem, axioms, active)) active[k] = true;
  }
  UnsatCore core;
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (active[k]) core.members.push_back(problem.constraints[k].source);
  }
  core.kind = ClassifyCore(problem, core.members);
  return core;
}

CoreKind ClassifyCore(const GroundProblem& problem, const std::vector<std::string>& members) {
  int facts = 0;
  int guards = 0;
  int sentence = 0;
  int other = 0;
  for (const auto& c : problem.constraints) {
    if (std::find(members.begin(), members.end(), c.source) == members.end()) continue;
    switch (c.kind) {
      case ConstraintKind::kFact:
      case ConstraintKind::kDefault:
        ++facts;
        break;
      case ConstraintKind::kArticleGuard:
      case ConstraintKind::kClauseGuard:
      case ConstraintKind::kException:
        ++guards;
        break;
      case ConstraintKind::kMissing:
      case ConstraintKind::kInventory:
        ++other;
        break;
      default:
        ++sentence;
    }
  }
  if (sentence > 0 && facts + guards + other == 0) return CoreKind::kEmptyPenaltyInterval;
  if (guards == 0 && other == 0 && facts >= 2) return CoreKind::kConflictingFacts;
  if (guards > 0 && facts == 0 && other == 0) return CoreKind::kIncompatibleGuards;
  return CoreKind::kMissingElement;
}

Implication Implies(const GuardExpr& g1, const GuardExpr& g2, const ExclusivityAxioms& axioms,
                    int atom_cap) {
  std::vector<Atom> plain;
  std::vector<std::string> opaque;
  for (const GuardExpr* g : {&g1, &g2}) {
    for (const auto& a : TopLevelAtoms(*g)) {
      if (std::find(plain.begin(), plain.end(), a) == plain.end()) plain.push_back(a);
    }
    for (const auto& x : TopLevelExistentials(*g)) {
      std::string key = x.ToString();
      if (std::find(opaque.begin(), opaque.end(), key) == opaque.end()) opaque.push_back(key);
    }
    if (HasFreeCaused(*g) && std::find(opaque.begin(), opaque.end(), "caused") == opaque.end()) {
      opaque.push_back("caused");
    }
  }
  if (static_cast<int>(plain.size() + opaque.size()) > atom_cap) return Implication::kUndecided;
  std::vector<const Atom*> ptrs;
  std::map<std::string, std::size_t> keys;
  for (const auto& a : plain) {
    keys.emplace(a.ToString(), ptrs.size());
    ptrs.push_back(&a);
  }
  for (const auto& k : opaque) {
    keys.emplace(k, ptrs.size());
    ptrs.push_back(nullptr);
  }
  WorldSpace space(ptrs, axioms);
  Partial forced(ptrs.size(), -1);
  bool counterexample = space.Search(
      forced, [](const Partial&) { return true; },
      [&](const Partial& w) { return EvalWorld(g1, keys, w) && !EvalWorld(g2, keys, w); });
  return counterexample ? Implication::kNotImplies : Implication::kImplies;
}

bool SyntacticallySubsumes(const GuardExpr& g1, const GuardExpr& g2) {
  std::set<std::pair<std::string, bool>> l1;
  std::set<std::pair<std::string, bool>> l2;
  CollectPolarLiterals(g1, true, l1);
  CollectPolarLiterals(g2, true, l2);
  return std::includes(l1.begin(), l1.end(), l2.begin(), l2.end());
}

std::string ToSmtLib(const GroundProblem& problem, const ExclusivityAxioms& axioms) {
  std::ostringstream out;
  out << "; clause " << problem.clause_id.ToString() << "\n";
  out << "(set-option :produce-unsat-cores true)\n(set-logic QF_LIA)\n";
  out << "(declare-const y Int)\n(assert (>= y 0))\n";
  std::map<std::string, int> numeric;
  for (std::size_t i = 0; i < problem.atoms.size(); ++i) {
    out << "(declare-const r" << TrueRail(static_cast<int>(i)) << " Bool)\n";
    out << "(declare-const r" << FalseRail(static_cast<int>(i)) << " Bool)\n";
    const auto& g = problem.atoms[i];
    if (g.atom && g.atom->IsComparison()) {
      auto [it, fresh] = numeric.emplace(g.atom->predicate, static_cast<int>(numeric.size()));
      if (fresh) {
        out << "(declare-const v" << it->second << " Int)\n(assert (>= v" << it->second
            << " 0))\n";
      }
      out << "(define-fun w" << i << " () Bool (" << SmtOp(g.atom->op) << " v" << it->second
          << " " << std::get<std::int64_t>(g.atom->value) << "))\n";
    } else {
      out << "(declare-const w" << i << " Bool)\n";
    }
    out << "(assert (=> r" << TrueRail(static_cast<int>(i)) << " w" << i << "))\n";
    out << "(assert (=> r" << FalseRail(static_cast<int>(i)) << " (not w" << i << ")))\n";
  }
  for (const auto& grp : axioms) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < problem.atoms.size(); ++i) {
      const auto& a = problem.atoms[i].atom;
      if (a && std::find(grp.members.begin(), grp.members.end(), *a) != grp.members.end()) {
        members.push_back(i);
      }
    }
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t z = x + 1; z < members.size(); ++z) {
        out << "(assert (not (and w" << members[x] << " w" << members[z] << ")))\n";
      }
    }
  }
  std::vector<std::size_t> ups;
  std::vector<std::size_t> downs;
  std::optional<std::size_t> lower;
  std::optional<std::size_t> upper;
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    const auto& c = problem.constraints[k];
    out << "(declare-const p" << k << " Bool)\n";
    switch (c.kind) {
      case ConstraintKind::kPenaltyLower:
        lower = k;
        break;
      case ConstraintKind::kPenaltyUpper:
        upper = k;
        break;
      case ConstraintKind::kAggravate:
        ups.push_back(k);
        break;
      case ConstraintKind::kMitigate:
        downs.push_back(k);
        break;
      default:
        out << "(assert (=> p" << k << " " << SmtFormula(c.formula) << "))\n";
    }
  }
  auto any = [](const std::vector<std::size_t>& ks) {
    if (ks.empty()) return std::string("false");
    std::string s = "(or";
    for (auto k : ks) s += " p" + std::to_string(k);
    return s + ")";
  };
  auto sum = [&](const std::vector<std::size_t>& ks) {
    std::string s = "(+ 0";
    for (auto k : ks) {
      s += " (ite p" + std::to_string(k) + " " +
           std::to_string(problem.constraints[k].delta_months) + " 0)";
    }
    return s + ")";
  };
  if (problem.base_penalty) {
    const PenaltySpec& base = *problem.base_penalty;
    std::string lmin = std::to_string(base.MinMonths());
    std::string base_lo = lower ? "(ite p" + std::to_string(*lower) + " " + lmin + " 0)" : "0";
    out << "(assert (>= y (ite " << any(ups) << " (+ " << lmin << " " << sum(ups) << ") "
        << base_lo << ")))\n";
    if (auto max = base.MaxMonths()) {
      std::string gate = any(downs);
      if (upper) gate = "(or " + gate + " p" + std::to_string(*upper) + ")";
      out << "(assert (=> " << gate << " (<= y (- " << *max << " " << sum(downs) << "))))\n";
    }
  }
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    out << "(assert (! p" << k << " :named c" << k << ")) ; " << problem.constraints[k].source
        << "\n";
  }
  out << "(check-sat)\n(get-unsat-core)\n";
  return out.str();
}

SolveResult ParseSmtReply(const GroundProblem& problem, std::string_view reply) {
  std::istringstream in{std::string(reply)};
  std::string status;
  in >> status;
  SolveResult r;
  ConstraintMask all(problem.constraints.size(), true);
  if (status == "sat") {
    r.status = SatStatus::kSat;
    r.witness_months = ActiveSentenceBounds(problem, all).lo;
    r.satisfied_interval = problem.adjusted ? std::get<PenaltySpec>(*problem.adjusted)
                                            : Unrestricted();
    return r;
  }
  if (status != "unsat") throw ParseError("solver reply is neither sat nor unsat: " + status);
  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto open = rest.find('(');
  auto close = rest.find(')', open == std::string::npos ? 0 : open);
  if (open == std::string::npos || close == std::string::npos) {
    throw ParseError("solver reply lacks an unsat core");
  }
  static const std::regex kName(R"(c(\d+))");
  std::string body = rest.substr(open + 1, close - open - 1);
  std::set<std::size_t> picked;
  for (std::sregex_iterator it(body.begin(), body.end(), kName), end; it != end; ++it) {
    std::size_t k = std::stoul((*it)[1].str());
    if (k >= problem.constraints.size()) throw ParseError("core names unknown constraint");
    picked.insert(k);
  }
  if (picked.empty()) throw ParseError("solver reply has an empty unsat core");
  UnsatCore core;
  for (std::size_t k : picked) core.members.push_back(problem.constraints[k].source);
  core.kind = ClassifyCore(problem, core.members);
  r.status = SatStatus::kUnsat;
  r.core = std::move(core);
  return r;
}

SolveResult SmtProcessSolver::Submit(const GroundProblem& problem,
                                     const ExclusivityAxioms& axioms) {
  char path[] = "/tmp/lexcheck-smt-XXXXXX";
  int fd = mkstemp(path);
  if (fd < 0) throw ServiceError("cannot create solver script file");
  close(fd);
  {
    std::ofstream script(path);
    script << ToSmtLib(problem, axioms);
  }
  std::string cmd = command_ + " " + path;
  std::string reply;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::remove(path);
    throw ServiceError("cannot start solver: " + command_);
  }
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) reply.append(buf, got);
  int rc = pclose(pipe);
  std::remove(path);
  if (rc != 0 && reply.empty()) throw ServiceError("solver exited with status " + std::to_string(rc));
  return ParseSmtReply(problem, reply);
}

}  // namespace lexcheck
