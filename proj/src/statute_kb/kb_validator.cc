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

#include "lexcheck/kb_validator.h"

#include <algorithm>
#include <bit>
#include <fstream>

#include "lexcheck/compiler.h"
#include "lexcheck/errors.h"
#include "lexcheck/solver.h"

namespace lexcheck {

struct KbValidationAccess {
  static void SetValidated(StatuteKB& kb, bool value) { kb.validated_ = value; }
};

namespace {

class SyntaxChecker {
 public:
  SyntaxChecker(const StatuteKB& kb, std::vector<ValidationIssue>& out) : kb_(kb), out_(out) {}

  void Guard(const GuardExpr& e, const std::string& where) { Walk(e, where, false); }

  void Value(const std::string& pred, const Constant& v, const std::string& where,
             const std::string& what) {
    if (kb_.extra_legal_names.count(pred)) {
      Add("extra_legal_reference", where, what + " uses extra-legal attribute " + pred);
      return;
    }
    const PredicateDecl* decl = kb_.FindPredicate(pred);
    if (!decl) {
      Add("undeclared_predicate", where, what + " uses undeclared predicate " + pred);
      return;
    }
    if (!decl->Admits(v)) {
      Add("type_mismatch", where,
          what + " gives " + pred + " the value " + ConstantToString(v) + " outside its domain");
    }
  }

  void Add(const std::string& check, const std::string& where, const std::string& detail) {
    out_.push_back({check, where, detail, true});
  }

 private:
  void Walk(const GuardExpr& e, const std::string& where, bool in_exists) {
    switch (e.kind) {
      case GuardExpr::Kind::kAtom: {
        const Atom& a = e.atom;
        if (a.op != CompareOp::kEq && !a.IsComparison()) {
          Add("type_mismatch", where, "ordering comparison on non-integer " + a.ToString());
        }
        Value(a.predicate, a.value, where, "atom '" + a.ToString() + "'");
        return;
      }
      case GuardExpr::Kind::kCaused:
        if (!in_exists) Add("misplaced_caused", where, "'caused' outside an existential");
        return;
      case GuardExpr::Kind::kExists:
        Walk(e.children[0], where, true);
        return;
      default:
        for (const auto& c : e.children) Walk(c, where, in_exists);
    }
  }

  const StatuteKB& kb_;
  std::vector<ValidationIssue>& out_;
};

void CheckSyntax(const StatuteKB& kb, std::vector<ValidationIssue>& out) {
  SyntaxChecker check(kb, out);
  for (const auto& name : kb.extra_legal_names) {
    if (kb.predicates.count(name)) {
      check.Add("extra_legal_reference", "predicate " + name,
                "declared both as a fact predicate and as an extra-legal attribute");
    }
  }
  for (const auto& [name, decl] : kb.predicates) {
    if (decl.type == ValueType::kEnum && decl.values.empty()) {
      check.Add("empty_domain", "predicate " + name, "enum with no values");
    }
  }
  for (std::size_t i = 0; i < kb.exclusivity_axioms.size(); ++i) {
    const auto& g = kb.exclusivity_axioms[i];
    std::string where = "exclusive " + (g.label.empty() ? std::to_string(i) : g.label);
    for (const auto& m : g.members) {
      check.Value(m.predicate, m.value, where, "member '" + m.ToString() + "'");
    }
  }
  for (const auto& [no, art] : kb.articles) {
    std::string where = "article " + std::to_string(no);
    if (art.clauses.empty()) check.Add("no_clauses", where, "article has no clauses");
    check.Guard(art.article_guard, where);
    for (const auto& [pred, v] : art.field_defaults) {
      check.Value(pred, v, where, "default for " + pred);
    }
    for (const auto& c : art.clauses) {
      std::string cw = c.id.ToString();
      check.Guard(c.guard, cw);
      for (const auto& x : c.exceptions) check.Guard(x, cw);
      if (c.penalty && c.penalty->IsEmpty()) {
        check.Add("empty_penalty", cw, "penalty " + c.penalty->ToString() + " admits no sentence");
      }
      if (!c.penalty && !c.adjustments.empty()) {
        check.Add("adjustment_without_penalty", cw, "adjustments on a clause with no penalty");
      }
      std::set<std::string> names;
      for (const auto& adj : c.adjustments) {
        check.Guard(adj.trigger, cw);
        if (adj.delta_months <= 0) {
          check.Add("nonpositive_delta", cw, "adjustment " + adj.name + " has delta <= 0");
        }
        if (!names.insert(adj.name).second) {
          check.Add("duplicate_adjustment", cw, "adjustment " + adj.name + " declared twice");
        }
      }
    }
  }
}

// Replaces existentials whose body can never hold with false.
GuardExpr PruneDeadExistentials(const GuardExpr& e, const ExclusivityAxioms& axioms, int cap) {
  if (e.kind == GuardExpr::Kind::kExists) {
    if (Implies(e.children[0], GuardExpr::False(), axioms, cap) == Implication::kImplies) {
      return GuardExpr::False();
    }
    return e;
  }
  GuardExpr out = e;
  for (auto& c : out.children) c = PruneDeadExistentials(c, axioms, cap);
  return out;
}

GuardExpr FullGuard(const StatuteArticle& art, const Clause& c) {
  return GuardExpr::And({art.article_guard, c.EffectiveGuard()});
}

void CheckSemantics(const StatuteKB& kb, const ValidatorOptions& opt,
                    std::vector<ValidationIssue>& out) {
  const auto& axioms = kb.exclusivity_axioms;
  for (const auto& [no, art] : kb.articles) {
    for (const auto& c : art.clauses) {
      const std::string where = c.id.ToString();
      GuardExpr full = PruneDeadExistentials(FullGuard(art, c), axioms, opt.atom_cap);
      Implication vac = Implies(full, GuardExpr::False(), axioms, opt.atom_cap);
      if (vac == Implication::kImplies) {
        out.push_back({"vacuous", where, "guard can never be satisfied", true});
        continue;
      }
      if (vac == Implication::kUndecided) {
        out.push_back({"vacuous", where, "too many atoms to decide vacuity", false});
      }
      if (!c.penalty || c.adjustments.empty()) continue;
      const std::size_t k = c.adjustments.size();
      if (k > opt.max_adjustments) {
        out.push_back({"contradictory", where, "too many adjustments to enumerate", false});
        continue;
      }
      // Smallest offending combination first.
      std::vector<unsigned> masks;
      for (unsigned m = 1; m < (1u << k); ++m) masks.push_back(m);
      std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
        return std::popcount(a) < std::popcount(b);
      });
      for (unsigned m : masks) {
        std::vector<AdjustmentDelta> up;
        std::vector<AdjustmentDelta> down;
        std::vector<GuardExpr> parts{full};
        std::string names;
        for (std::size_t i = 0; i < k; ++i) {
          if (!(m >> i & 1u)) continue;
          const auto& adj = c.adjustments[i];
          (adj.direction == AdjustDirection::kRaiseLower ? up : down).push_back(adj);
          parts.push_back(adj.trigger);
          names += (names.empty() ? "" : ", ") + adj.name;
        }
        auto adjusted = AdjustInterval(*c.penalty, up, down);
        if (!std::holds_alternative<EmptyInterval>(adjusted)) continue;
        GuardExpr joint = PruneDeadExistentials(GuardExpr::And(parts), axioms, opt.atom_cap);
        if (Implies(joint, GuardExpr::False(), axioms, opt.atom_cap) != Implication::kNotImplies) {
          continue;
        }
        const auto& empty = std::get<EmptyInterval>(adjusted);
        out.push_back({"contradictory", where,
                       "adjustments {" + names + "} can fire with the guard and give lower " +
                           std::to_string(empty.lower_months) + " above upper " +
                           SentenceToString(empty.upper),
                       true});
        break;
      }
    }
  }
}

std::string ClauseList(const std::vector<ClauseId>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i].ToString();
  return out + "]";
}

nlohmann::ordered_json IssuesJson(const std::vector<ValidationIssue>& issues) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& i : issues) {
    nlohmann::ordered_json j;
    j["check"] = i.check;
    j["location"] = i.location;
    j["detail"] = i.detail;
    j["level"] = i.error ? "error" : "warning";
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

std::size_t ValidationReport::ErrorCount() const {
  std::size_t n = 0;
  for (const auto* section : {&syntactic, &semantic, &case_level}) {
    for (const auto& i : *section) n += i.error;
  }
  return n;
}

nlohmann::ordered_json ValidationReport::ToJson() const {
  nlohmann::ordered_json j;
  j["validated"] = ok();
  j["errors"] = ErrorCount();
  j["probes"] = probe_count;
  j["syntactic"] = IssuesJson(syntactic);
  j["semantic"] = IssuesJson(semantic);
  j["case_level"] = IssuesJson(case_level);
  return j;
}

ProbeCase ParseProbe(const nlohmann::json& line) {
  if (!line.is_object() || !line.contains("case")) throw SchemaError("case", "probe lacks a case");
  ProbeCase probe;
  probe.record = ParseCase(line["case"], DetectCaseSchema(line["case"]));
  if (line.contains("suspect")) probe.suspect = line["suspect"].get<std::string>();
  if (line.contains("expect")) {
    for (const auto& e : line["expect"]) {
      auto id = ClauseId::Parse(e.get<std::string>());
      if (!id) throw ValueError("bad clause id in probe: " + e.get<std::string>());
      probe.expected.push_back(*id);
    }
  }
  return probe;
}

std::vector<ProbeCase> LoadProbes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::vector<ProbeCase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(ParseProbe(nlohmann::json::parse(line)));
  }
  return out;
}

std::vector<ClauseId> ActivatedClauses(const StatuteKB& kb, const CaseRecord& record,
                                       const std::string& suspect) {
  std::string who = suspect;
  if (who.empty() && !record.suspect_ids.empty()) who = record.suspect_ids.front();
  std::vector<ConstraintRef> refs;
  for (const auto& [no, art] : kb.articles) {
    for (const auto& c : art.clauses) refs.push_back({&art, &c});
  }
  auto facts = FactsForSuspect(record, who);
  auto slice = RefineFacts(facts, refs, kb, ConflictPolicy::kRecord);
  std::vector<ClauseId> fired;
  for (const auto& problem : Encode(slice, refs, kb)) {
    ConstraintMask all(problem.constraints.size(), true);
    if (IsSatisfiable(problem, kb.exclusivity_axioms, all)) fired.push_back(problem.clause_id);
  }
  return fired;
}

ValidationReport ValidateKb(StatuteKB& kb, const std::vector<ProbeCase>& probes,
                            const ValidatorOptions& options) {
  ValidationReport report;
  report.probe_count = probes.size();
  KbValidationAccess::SetValidated(kb, false);
  CheckSyntax(kb, report.syntactic);
  if (!report.ok()) return report;
  CheckSemantics(kb, options, report.semantic);

  std::map<ClauseId, std::size_t> fire_count;
  for (const auto& probe : probes) {
    auto fired = ActivatedClauses(kb, probe.record, probe.suspect);
    for (const auto& id : fired) ++fire_count[id];
    for (const auto& want : probe.expected) {
      if (!kb.FindClause(want)) {
        report.case_level.push_back({"unknown_clause", probe.record.case_id,
                                     "expected clause " + want.ToString() + " is not in the KB",
                                     true});
      } else if (std::find(fired.begin(), fired.end(), want) == fired.end()) {
        report.case_level.push_back({"activation", probe.record.case_id,
                                     "expected " + want.ToString() + " to fire; fired " +
                                         ClauseList(fired),
                                     true});
      }
    }
    for (const auto& id : fired) {
      if (std::find(probe.expected.begin(), probe.expected.end(), id) == probe.expected.end()) {
        report.case_level.push_back({"unexpected_activation", probe.record.case_id,
                                     id.ToString() + " fired but was not expected", false});
      }
    }
  }
  if (probes.size() >= options.min_probes_for_breadth) {
    for (const auto& [no, art] : kb.articles) {
      for (const auto& c : art.clauses) {
        std::size_t n = fire_count.count(c.id) ? fire_count.at(c.id) : 0;
        double share = static_cast<double>(n) / static_cast<double>(probes.size());
        if (share >= options.overly_broad_threshold) {
          report.semantic.push_back({"overly_broad", c.id.ToString(),
                                     "fires on " + std::to_string(n) + " of " +
                                         std::to_string(probes.size()) + " probes",
                                     true});
        }
      }
    }
  }
  KbValidationAccess::SetValidated(kb, report.ok());
  return report;
}

}  // namespace lexcheck
