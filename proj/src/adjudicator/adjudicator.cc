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

#include "lexcheck/adjudicator.h"

#include <algorithm>
#include <map>
#include <set>

#include "lexcheck/errors.h"

namespace lexcheck {
namespace {

using nlohmann::ordered_json;

// Orders upper bounds: finite months, then Life, then Death.
std::pair<int, std::int64_t> UpperRank(const Sentence& s) {
  if (const auto* m = std::get_if<std::int64_t>(&s)) return {0, *m};
  return {std::get<SpecialSentence>(s) == SpecialSentence::kLife ? 1 : 2, 0};
}

bool UpperBelow(const PenaltySpec& a, const PenaltySpec& b) {
  auto ma = a.MaxMonths();
  auto mb = b.MaxMonths();
  if (ma && mb) return *ma < *mb;
  if (ma || mb) return ma.has_value();
  return UpperRank(a.upper) < UpperRank(b.upper);
}

Implication Dominates(const GuardExpr& a, const GuardExpr& b, const ExclusivityAxioms& axioms,
                      int cap) {
  Implication r = Implies(a, b, axioms, cap);
  if (r == Implication::kUndecided) {
    return SyntacticallySubsumes(a, b) ? Implication::kImplies : Implication::kNotImplies;
  }
  return r;
}

std::optional<SourceSpan> WitnessSpan(const GuardExpr& exists_expr,
                                      const CaseInventory& inventory) {
  const bool on_results = exists_expr.scope == ExistsScope::kResult;
  const auto& scope = on_results ? inventory.results : inventory.acts;
  for (const auto& entity : scope) {
    CaseInventory one = inventory;
    (on_results ? one.results : one.acts) = {entity};
    if (ResolveExistential(exists_expr, one) == Truth::kTrue) return entity.span;
  }
  return std::nullopt;
}

class PathCollector {
 public:
  PathCollector(const GroundProblem& problem, const CaseInventory& inventory,
                std::vector<CheckedAtom>& out)
      : problem_(problem), inventory_(inventory), out_(out) {}

  void Walk(const GuardExpr& e) {
    switch (e.kind) {
      case GuardExpr::Kind::kAtom:
        Push(e.atom.ToString(), std::nullopt);
        return;
      case GuardExpr::Kind::kExists:
        Push(e.ToString(), WitnessSpan(e, inventory_));
        return;
      case GuardExpr::Kind::kOr:
        for (const auto& c : e.children) {
          if (EvaluateResolved(c, problem_) == Truth::kTrue) {
            Walk(c);
            return;
          }
        }
        return;
      case GuardExpr::Kind::kAnd:
      case GuardExpr::Kind::kNot:
        for (const auto& c : e.children) Walk(c);
        return;
      default:
        return;
    }
  }

 private:
  void Push(const std::string& key, std::optional<SourceSpan> span) {
    if (!seen_.insert(key).second) return;
    CheckedAtom checked{key, Truth::kUnknown, std::move(span)};
    if (int i = problem_.FindAtom(key); i >= 0) {
      checked.value = problem_.atoms[i].value;
      if (!checked.span) checked.span = problem_.atoms[i].span;
    }
    out_.push_back(std::move(checked));
  }

  const GroundProblem& problem_;
  const CaseInventory& inventory_;
  std::vector<CheckedAtom>& out_;
  std::set<std::string> seen_;
};

ordered_json SpanJson(const std::optional<SourceSpan>& span) {
  if (!span) return nullptr;
  return ordered_json::array({span->begin, span->end});
}

ordered_json ArticlesJson(const ArticleSet& s) {
  auto arr = ordered_json::array();
  for (auto a : s) arr.push_back(a);
  return arr;
}

}  // namespace

std::string_view PointPolicyName(PointPolicy policy) {
  return policy == PointPolicy::kMin ? "min" : "mid";
}

std::optional<PointPolicy> ParsePointPolicy(std::string_view name) {
  if (name == "min") return PointPolicy::kMin;
  if (name == "mid") return PointPolicy::kMid;
  return std::nullopt;
}

std::vector<ClauseId> SelectByPriority(const std::vector<AdmissibleClause>& admissible,
                                       const ExclusivityAxioms& axioms, int atom_cap) {
  std::vector<bool> keep(admissible.size(), true);
  for (std::size_t i = 0; i < admissible.size(); ++i) {
    for (std::size_t j = 0; j < admissible.size() && keep[i]; ++j) {
      if (i == j || admissible[i].id.article != admissible[j].id.article) continue;
      const auto& a = admissible[j];
      const auto& b = admissible[i];
      bool stronger = Dominates(a.guard, b.guard, axioms, atom_cap) == Implication::kImplies &&
                      Dominates(b.guard, a.guard, axioms, atom_cap) != Implication::kImplies;
      bool outranked = a.priority && b.priority && *a.priority > *b.priority;
      if (stronger || outranked) keep[i] = false;
    }
  }
  std::vector<ClauseId> out;
  for (std::size_t i = 0; i < admissible.size(); ++i) {
    if (keep[i]) out.push_back(admissible[i].id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PenaltySpec> MergeIntervals(std::vector<PenaltySpec> intervals) {
  std::erase_if(intervals, [](const PenaltySpec& p) { return p.IsEmpty(); });
  std::sort(intervals.begin(), intervals.end(), [](const PenaltySpec& a, const PenaltySpec& b) {
    if (a.MinMonths() != b.MinMonths()) return a.MinMonths() < b.MinMonths();
    return UpperBelow(a, b);
  });
  std::vector<PenaltySpec> out;
  for (const auto& p : intervals) {
    if (!out.empty()) {
      auto& last = out.back();
      auto last_max = last.MaxMonths();
      if (!last_max || p.MinMonths() <= *last_max + 1) {
        if (UpperBelow(last, p)) {
          last.upper = p.upper;
          last.upper_strict = p.upper_strict;
        }
        continue;
      }
    }
    out.push_back(p);
  }
  return out;
}

std::int64_t ChoosePointSentence(const std::vector<PenaltySpec>& intervals, PointPolicy policy) {
  auto merged = MergeIntervals(intervals);
  if (merged.empty()) throw EmptyUnion();
  const PenaltySpec& lowest = merged.front();
  std::int64_t lo = lowest.MinMonths();
  if (policy == PointPolicy::kMin) return lo;
  auto hi = lowest.MaxMonths();
  if (!hi) return lo;
  return lo + (*hi - lo) / 2;
}

Judgment Adjudicate(const CaseRecord& record, const StatuteKB& kb, const ArticleSet& candidates,
                    const AdjudicatorConfig& config, const std::string& suspect) {
  if (!kb.validated()) throw KBNotValidated();
  Judgment j;
  j.case_id = record.case_id;
  j.suspect_id = suspect.empty() && !record.suspect_ids.empty() ? record.suspect_ids.front()
                                                                 : suspect;
  ArticleSet wanted = candidates;
  if (wanted.empty()) {
    for (const auto& [no, art] : kb.articles) wanted.insert(no);
  }
  ConstraintSearch search = SearchConstraints(wanted, kb);
  j.unknown_articles = search.unknown_articles;

  std::vector<FactAtom> facts = FactsForSuspect(record, j.suspect_id);
  RefinedFactSlice slice;
  std::vector<GroundProblem> problems;
  std::vector<SolveResult> results;
  for (int attempt = 0;; ++attempt) {
    slice = RefineFacts(facts, search.constraints, kb, ConflictPolicy::kRecord);
    problems = Encode(slice, search.constraints, kb);
    results.clear();
    j.diagnostics.clear();
    for (const auto& p : problems) {
      results.push_back(config.backend ? config.backend->Submit(p, kb.exclusivity_axioms)
                                       : CheckSat(p, kb.exclusivity_axioms));
      if (!results.back().sat() && results.back().core) {
        j.diagnostics.push_back({p.clause_id, *results.back().core});
      }
    }
    bool conflicting =
        !slice.conflicts.empty() ||
        std::any_of(j.diagnostics.begin(), j.diagnostics.end(), [](const Diagnostic& d) {
          return d.core.kind == CoreKind::kConflictingFacts;
        });
    if (!conflicting || !config.repair) break;
    if (!config.extractor) throw ExtractorUnavailable();
    if (attempt >= config.max_repairs) break;
    facts = config.extractor(record, j.suspect_id, j.diagnostics);
    ++j.repairs;
  }
  j.conflicts = slice.conflicts;

  std::vector<AdmissibleClause> admissible;
  std::map<ClauseId, std::size_t> index;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (!results[i].sat()) continue;
    const Clause& c = *search.constraints[i].clause;
    index[c.id] = i;
    std::optional<PenaltySpec> interval;
    if (c.penalty) interval = results[i].satisfied_interval;
    admissible.push_back({c.id, c.EffectiveGuard(), interval, c.priority});
  }
  j.chosen_clauses = SelectByPriority(admissible, kb.exclusivity_axioms, config.atom_cap);

  std::vector<PenaltySpec> brackets;
  std::vector<std::string> labels;
  for (const auto& id : j.chosen_clauses) {
    std::size_t i = index.at(id);
    const auto& ref = search.constraints[i];
    (IsGeneralArticle(id.article) ? j.general_articles : j.specific_articles).insert(id.article);
    if (ref.clause->penalty && results[i].satisfied_interval) {
      brackets.push_back(*results[i].satisfied_interval);
    }
    if (!ref.clause->consequence_label.empty()) labels.push_back(ref.clause->consequence_label);

    ExplanationStep step{id, {}, ref.clause->consequence_label};
    PathCollector path(problems[i], slice.inventory, step.atoms);
    path.Walk(ref.article->article_guard);
    path.Walk(ref.clause->EffectiveGuard());
    j.explanation.push_back(std::move(step));
  }

  j.penalty_union = MergeIntervals(brackets);
  if (!j.penalty_union.empty()) {
    j.point_sentence_months = ChoosePointSentence(j.penalty_union, config.point_policy);
    for (const auto& p : j.penalty_union) {
      if (p.Contains(*j.point_sentence_months)) {
        j.penalty_interval = p;
        break;
      }
    }
  }
  j.valid = j.point_sentence_months && j.penalty_interval &&
            j.penalty_interval->Contains(*j.point_sentence_months);

  if (j.chosen_clauses.empty()) {
    j.consequence = std::string(kNoApplicableClause);
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i) j.consequence += (i ? "; " : "") + labels[i];
  }
  return j;
}

std::vector<Judgment> AdjudicateAll(const CaseRecord& record, const StatuteKB& kb,
                                    const ArticleSet& candidates,
                                    const AdjudicatorConfig& config) {
  std::vector<Judgment> out;
  if (record.suspect_ids.empty()) {
    out.push_back(Adjudicate(record, kb, candidates, config));
    return out;
  }
  for (const auto& s : record.suspect_ids) out.push_back(Adjudicate(record, kb, candidates, config, s));
  return out;
}

nlohmann::ordered_json JudgmentToJson(const Judgment& j) {
  ordered_json out;
  out["case_id"] = j.case_id;
  out["suspect_id"] = j.suspect_id;
  out["general_articles"] = ArticlesJson(j.general_articles);
  out["specific_articles"] = ArticlesJson(j.specific_articles);
  auto chosen = ordered_json::array();
  for (const auto& c : j.chosen_clauses) chosen.push_back(c.ToString());
  out["chosen_clauses"] = std::move(chosen);
  auto brackets = ordered_json::array();
  for (const auto& p : j.penalty_union) brackets.push_back(p.ToString());
  out["penalty_union"] = std::move(brackets);
  out["penalty_interval"] = j.penalty_interval ? ordered_json(j.penalty_interval->ToString())
                                               : ordered_json(nullptr);
  out["point_sentence_months"] =
      j.point_sentence_months ? ordered_json(*j.point_sentence_months) : ordered_json(nullptr);
  out["valid"] = j.valid;
  out["consequence"] = j.consequence;
  auto explanation = ordered_json::array();
  for (const auto& step : j.explanation) {
    ordered_json s;
    s["clause"] = step.clause.ToString();
    auto atoms = ordered_json::array();
    for (const auto& a : step.atoms) {
      atoms.push_back(ordered_json{{"atom", a.atom},
                                   {"value", std::string(TruthName(a.value))},
                                   {"span", SpanJson(a.span)}});
    }
    s["atoms"] = std::move(atoms);
    s["label"] = step.consequence_label;
    explanation.push_back(std::move(s));
  }
  out["explanation"] = std::move(explanation);
  auto diagnostics = ordered_json::array();
  for (const auto& d : j.diagnostics) {
    diagnostics.push_back(ordered_json{{"clause", d.clause.ToString()},
                                       {"kind", std::string(CoreKindName(d.core.kind))},
                                       {"core", d.core.members}});
  }
  out["diagnostics"] = std::move(diagnostics);
  out["unknown_articles"] = j.unknown_articles;
  auto conflicts = ordered_json::array();
  for (const auto& c : j.conflicts) {
    auto values = ordered_json::array();
    for (const auto& v : c.values) values.push_back(ConstantToString(v));
    conflicts.push_back(ordered_json{{"predicate", c.predicate}, {"values", values}});
  }
  out["conflicts"] = std::move(conflicts);
  out["repairs"] = j.repairs;
  return out;
}

}  // namespace lexcheck
