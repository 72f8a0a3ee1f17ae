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

#include <regex>

#include "lexcheck/agents.h"

namespace lexcheck {
namespace {

class Scan {
 public:
  Scan(std::string suspect) : suspect_(std::move(suspect)) {}

  const std::string& suspect() const { return suspect_; }

  void Add(ElementKind kind, const std::string& subject, const std::string& predicate,
           FactValue value, const std::smatch& m, int group = 0) {
    SourceSpan span{static_cast<std::size_t>(m.position(group)),
                    static_cast<std::size_t>(m.position(group) + m.length(group))};
    FactAtom fact{kind, subject, predicate, std::move(value), span};
    for (const auto& f : facts_) {
      if (f.kind == fact.kind && f.subject_id == fact.subject_id &&
          f.predicate == fact.predicate && f.value == fact.value) {
        return;
      }
    }
    facts_.push_back(std::move(fact));
  }
  void Suspect(ElementKind kind, const std::string& predicate, FactValue value, const std::smatch& m,
               int group = 0) {
    Add(kind, suspect_, predicate, std::move(value), m, group);
  }

  std::string NewAct() { return "a" + std::to_string(++acts_); }
  std::string NewResult() { return "r" + std::to_string(++results_); }
  int acts() const { return acts_; }
  int results() const { return results_; }

  std::vector<FactAtom> Take() { return std::move(facts_); }

 private:
  std::string suspect_;
  std::vector<FactAtom> facts_;
  int acts_ = 0;
  int results_ = 0;
};

using Handler = void (*)(const std::smatch&, Scan&);

struct FactRule {
  const char* pattern;
  Handler handler;
};

std::string Token(std::string text) {
  for (auto& c : text) c = c == ' ' ? '_' : static_cast<char>(std::tolower(c));
  return text;
}

std::string Lower(std::string text) {
  for (auto& c : text) c = static_cast<char>(std::tolower(c));
  return text;
}

int SmallNumber(const std::string& word) {
  static const char* kWords[] = {"zero", "one", "two", "three", "four", "five"};
  for (int i = 0; i < 6; ++i) {
    if (Lower(word) == kWords[i]) return i;
  }
  return std::stoi(word);
}

const FactRule kFactRules[] = {
    {R"(\b(the defendant|official)\b)",
     [](const std::smatch& m, Scan& s) { s.Suspect(ElementKind::kActor, "Actor", "person", m); }},
    {R"(\b(sold|selling|trafficked)\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "Action", "selling", m);
       s.Suspect(ElementKind::kMentalState, "MentalState", "Intentional", m);
     }},
    {R"(\b(heroin|methamphetamine|cocaine|opium|narcotics)\b)",
     [](const std::smatch& m, Scan& s) { s.Suspect(ElementKind::kQualifier, "Object", "narcotics", m); }},
    {R"(\b(\d+) grams\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kAmount, "DrugQuantity", std::int64_t{std::stoll(m.str(1))}, m);
     }},
    {R"(\b(ringleader|armed protection|international trafficking)\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "Circumstance", Token(m.str(1)), m);
     }},
    {R"(\bcircumstances were serious\b)",
     [](const std::smatch& m, Scan& s) { s.Suspect(ElementKind::kQualifier, "Circumstance", "serious", m); }},
    {R"(\b(released from prison|previously been sentenced)\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "prior_sentence_served_or_pardoned", true, m);
     }},
    {R"(\b(less than|within) (one|two|three|four|five|\d+) years\b)",
     [](const std::smatch& m, Scan& s) {
       if (SmallNumber(m.str(2)) <= 5) {
         s.Suspect(ElementKind::kQualifier, "reoffense_within_5_years", true, m);
       }
     }},
    {R"(\b(voluntarily surrendered|turned (himself|herself|themselves) in)\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "voluntary_surrender_with_confession", true, m);
     }},
    {R"(\btruthfully confessed\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "truthful_confession_of_crime", true, m);
     }},
    {R"(\b(kept the \d+ yuan|illegal (gains|proceeds))\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "illegal_proceeds_obtained", true, m);
     }},
    {R"(\b(accidentally )?(hit|struck|beat|stabbed)\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kAct, "Act", IdPair{s.NewAct(), "assault"}, m);
       s.Suspect(ElementKind::kMentalState, "MentalState",
                 m.length(1) > 0 ? "Negligent" : "Intentional", m);
     }},
    {R"(\b(minor|serious|especially serious) injury\b)",
     [](const std::smatch& m, Scan& s) {
       static const std::map<std::string, std::string> kSeverity = {
           {"minor", "Minor"}, {"serious", "Serious"}, {"especially serious", "EspeciallySerious"}};
       std::string id = s.NewResult();
       s.Add(ElementKind::kResult, id, "Result", "injury", m);
       s.Add(ElementKind::kSeverity, id, "Severity", kSeverity.at(Lower(m.str(1))), m);
     }},
    {R"(\bself-defen[cs]e\b)",
     [](const std::smatch& m, Scan& s) { s.Suspect(ElementKind::kException, "self_defense", true, m); }},
    {R"(\b(wooden club|knife|with a weapon)\b)",
     [](const std::smatch& m, Scan& s) { s.Suspect(ElementKind::kQualifier, "weapon_used", true, m); }},
    {R"(\b(paid full compensation|made restitution)\b)",
     [](const std::smatch& m, Scan& s) { s.Suspect(ElementKind::kQualifier, "restitution_made", true, m); }},
    {R"(\bstole\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "Action", "stealing", m);
       s.Suspect(ElementKind::kMentalState, "MentalState", "Intentional", m);
     }},
    {R"(\bdefrauded\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "Action", "defrauding", m);
       s.Suspect(ElementKind::kMentalState, "MentalState", "Intentional", m);
     }},
    {R"(\bproperty\b)",
     [](const std::smatch& m, Scan& s) { s.Suspect(ElementKind::kQualifier, "Object", "property", m); }},
    {R"(\bworth (\d+) yuan\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kAmount, "PropertyValue", std::int64_t{std::stoll(m.str(1))}, m);
     }},
    {R"(\bsmuggled (weapons|ammunition|counterfeit currency|cultural relics|precious metals|obscene materials|solid waste)\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "Action", "smuggling", m);
       s.Suspect(ElementKind::kQualifier, "Object", "goods", m);
       s.Suspect(ElementKind::kQualifier, "SmuggledGoods", Token(m.str(1)), m, 1);
       s.Suspect(ElementKind::kMentalState, "MentalState", "Intentional", m);
     }},
    {R"(\baccepted (\d+) yuan\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "Role", "state_functionary", m);
       s.Suspect(ElementKind::kQualifier, "Action", "accepting_bribe", m);
       s.Suspect(ElementKind::kQualifier, "Object", "bribe", m);
       s.Suspect(ElementKind::kAmount, "PropertyValue", std::int64_t{std::stoll(m.str(1))}, m);
       s.Suspect(ElementKind::kMentalState, "MentalState", "Intentional", m);
     }},
    {R"(\b(in return|to win|for the benefit of)\b)",
     [](const std::smatch& m, Scan& s) { s.Suspect(ElementKind::kQualifier, "for_benefit", true, m); }},
    {R"(\bintroduced a bribe\b)",
     [](const std::smatch& m, Scan& s) {
       s.Suspect(ElementKind::kQualifier, "Role", "intermediary", m);
       s.Suspect(ElementKind::kQualifier, "Object", "bribe", m);
     }},
};

// Links the most recent act to every result, anchored at the causal verb.
const char* kCausePattern = R"(\bcaus(ed|ing)\b)";

enum RoleMask : unsigned { kProsecution = 1, kDefence = 2, kBoth = 3 };

struct CandidateRule {
  const char* pattern;
  ArticleNo article;
  unsigned roles;
};

const CandidateRule kCandidateRules[] = {
    {R"(\b(heroin|methamphetamine|cocaine|opium|narcotics)\b)", 347, kBoth},
    {R"(\b(released from prison|previously been sentenced)\b)", 65, kProsecution},
    {R"(\b(voluntarily surrendered|truthfully confessed|turned (himself|herself|themselves) in)\b)", 67, kBoth},
    {R"(\b(kept the \d+ yuan|illegal (gains|proceeds))\b)", 64, kDefence},
    {R"(\b(hit|struck|beat|stabbed)\b)", 234, kProsecution},
    {R"(\baccidentally\b)", 235, kDefence},
    {R"(\bself-defen[cs]e\b)", 20, kDefence},
    {R"(\bstole\b)", 264, kBoth},
    {R"(\bdefrauded\b)", 266, kBoth},
    {R"(\bsmuggled (weapons|ammunition|counterfeit currency|cultural relics|precious metals)\b)", 151, kBoth},
    {R"(\bsmuggled (obscene materials|solid waste)\b)", 152, kBoth},
    {R"(\baccepted \d+ yuan\b)", 385, kBoth},
    {R"(\bfrom businessman\b)", 389, kProsecution},
    {R"(\bintroduced a bribe\b)", 392, kBoth},
};

const std::regex& Compiled(const char* pattern) {
  static std::map<const char*, std::regex> cache = [] {
    std::map<const char*, std::regex> m;
    auto flags = std::regex::ECMAScript | std::regex::icase;
    for (const auto& r : kFactRules) m.emplace(r.pattern, std::regex(r.pattern, flags));
    for (const auto& r : kCandidateRules) m.emplace(r.pattern, std::regex(r.pattern, flags));
    m.emplace(kCausePattern, std::regex(kCausePattern, flags));
    return m;
  }();
  return cache.at(pattern);
}

}  // namespace

std::vector<FactAtom> DeterministicExtractor::FactsIn(std::string_view text,
                                                      const std::string& suspect) const {
  const std::string str(text);
  Scan scan(suspect);
  for (const auto& rule : kFactRules) {
    const auto& re = Compiled(rule.pattern);
    for (auto it = std::sregex_iterator(str.begin(), str.end(), re); it != std::sregex_iterator();
         ++it) {
      rule.handler(*it, scan);
    }
  }
  std::smatch cause;
  if (scan.acts() > 0 && std::regex_search(str, cause, Compiled(kCausePattern))) {
    std::string act = "a" + std::to_string(scan.acts());
    for (int r = 1; r <= scan.results(); ++r) {
      scan.Suspect(ElementKind::kCauses, "Causes", IdPair{act, "r" + std::to_string(r)}, cause);
    }
  }
  return scan.Take();
}

ArgumentTuple DeterministicExtractor::Extract(const CaseRecord& record, AgentRole role) const {
  const std::string suspect = record.suspect_ids.empty() ? "s1" : record.suspect_ids.front();
  ArgumentTuple out;
  out.role = role;
  out.facts = FactsIn(record.narrative, suspect);
  const unsigned mask = role == AgentRole::kProsecutor ? kProsecution : kDefence;
  for (const auto& rule : kCandidateRules) {
    if (!(rule.roles & mask)) continue;
    if (std::regex_search(record.narrative, Compiled(rule.pattern))) {
      (IsGeneralArticle(rule.article) ? out.candidate_general : out.candidate_specific)
          .insert(rule.article);
    }
  }
  return out;
}

}  // namespace lexcheck
