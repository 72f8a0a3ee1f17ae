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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "fixtures.h"
#include "lexcheck/adjudicator.h"
#include "lexcheck/errors.h"
#include "lexcheck/metrics.h"
#include "lexcheck/perturbation.h"

namespace lexcheck {
namespace {

using testing::DataPath;
using testing::FixtureCase;
using testing::FixtureCases;
using testing::OracleStatutes;
using testing::ReadText;
using testing::SampleKb;

const std::vector<PerturbationSpec>& FixtureSpecs() {
  static const auto specs = LoadSpecs(DataPath("fixtures/specs.json"));
  return specs;
}

RuleRegistry FixtureRegistry() {
  auto registry = RuleRegistry::Builtin();
  registry.LoadComposites(nlohmann::json::parse(ReadText(DataPath("fixtures/composites.json"))));
  return registry;
}

const std::vector<PerturbationPair>& FixtureCorpus() {
  static const auto pairs = BuildPairCorpus(FixtureCases(), FixtureSpecs(), 7, FixtureRegistry());
  return pairs;
}

PerturbationSpec Spec(std::string id, std::vector<std::string> rules, bool changed_label = false) {
  PerturbationSpec spec;
  spec.perturbation_id = std::move(id);
  spec.rules = std::move(rules);
  spec.changed_label = changed_label;
  if (changed_label) {
    spec.family = PerturbationFamily::kStatutoryElement;
    spec.label_effect = LabelEffect{};
    spec.label_effect->add = {67};
  }
  return spec;
}

std::pair<ArticleSet, ArticleSet> Predicted(const CaseRecord& record) {
  std::pair<ArticleSet, ArticleSet> out;
  for (const auto& j : AdjudicateAll(record, SampleKb(), {}, AdjudicatorConfig{})) {
    out.first.insert(j.general_articles.begin(), j.general_articles.end());
    out.second.insert(j.specific_articles.begin(), j.specific_articles.end());
  }
  return out;
}

ArticleSet Union(const std::pair<ArticleSet, ArticleSet>& sets) {
  ArticleSet out = sets.first;
  out.insert(sets.second.begin(), sets.second.end());
  return out;
}

TEST(SpecTest, FixtureSpecsLoadAndRoundTrip) {
  ASSERT_EQ(FixtureSpecs().size(), 14u);
  for (const auto& spec : FixtureSpecs()) {
    EXPECT_NO_THROW(CheckSpec(spec)) << spec.perturbation_id;
    EXPECT_EQ(SpecFromJson(SpecToJson(spec)), spec) << spec.perturbation_id;
  }
}

TEST(SpecTest, StructuralChecks) {
  auto spec = Spec("bad", {"set_severity:Serious"}, true);
  spec.label_effect.reset();
  EXPECT_THROW(CheckSpec(spec), ValueError);
  EXPECT_FALSE(ParseFamily("Nonsense").has_value());
  EXPECT_EQ(ParseFamily(FamilyName(PerturbationFamily::kStatuteConfusion)),
            PerturbationFamily::kStatuteConfusion);
  EXPECT_EQ(FamilyChangesLabel(PerturbationFamily::kJudicialFairness), false);
  EXPECT_EQ(FamilyChangesLabel(PerturbationFamily::kMentalState), true);
  EXPECT_EQ(ParseAttack(AttackName(AttackTemplate::kRoleHijacking)), AttackTemplate::kRoleHijacking);
}

TEST(RegistryTest, BuiltinsAndComposites) {
  auto registry = FixtureRegistry();
  auto names = registry.Names();
  for (const char* name : {"set_extra_legal", "append_noise", "inject_attack", "set_severity",
                           "set_mental_state", "add_self_defense", "add_self_surrender",
                           "set_amount", "add_fact", "remove_fact", "profile_swap",
                           "surrender_and_confess"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), name), names.end()) << name;
  }
  EXPECT_FALSE(registry.Find("profile_swap")->material);
  EXPECT_TRUE(registry.Find("surrender_and_confess")->material);
  EXPECT_EQ(registry.Find("no_such_rule"), nullptr);
  EXPECT_EQ(SplitRule("set_amount:DrugQuantity=20"),
            (std::pair<std::string, std::string>{"set_amount", "DrugQuantity=20"}));
  EXPECT_EQ(SplitRule("append_noise"), (std::pair<std::string, std::string>{"append_noise", ""}));
}

TEST(RegistryTest, CompositeErrors) {
  auto registry = RuleRegistry::Builtin();
  EXPECT_THROW(registry.LoadComposites(nlohmann::json::parse(
                   R"({"rules": [{"name": "x", "steps": ["nope"]}]})")),
               UnknownRule);
  EXPECT_THROW(registry.LoadComposites(nlohmann::json::parse(
                   R"({"rules": [{"name": "x", "material": false, "steps": ["set_severity:Minor"]}]})")),
               RuleLabelMismatch);
  EXPECT_THROW(registry.LoadComposites(nlohmann::json::parse(R"({"steps": []})")), SchemaError);
}

TEST(ApplyTest, UnknownRuleAndLabelMismatch) {
  const auto& base = FixtureCase("assault-minor");
  auto registry = RuleRegistry::Builtin();
  EXPECT_THROW(ApplyPerturbation(base, Spec("x", {"teleport"}), registry), UnknownRule);
  EXPECT_THROW(ApplyPerturbation(base, Spec("x", {"set_severity:Serious"}), registry),
               RuleLabelMismatch);
  EXPECT_THROW(BuildPairCorpus({base}, {Spec("x", {"teleport"})}, 1, registry), UnknownRule);
  EXPECT_NO_THROW(ApplyPerturbation(base, Spec("x", {"set_severity:Serious"}, true), registry));
}

TEST(ApplyTest, LabelEffectRewritesGold) {
  const auto& base = FixtureCase("assault-serious");
  auto spec = Spec("ms", {"set_mental_state:Negligent"}, true);
  spec.label_effect->add = {235};
  spec.label_effect->remove = {234};
  auto pair = ApplyPerturbation(base, spec, RuleRegistry::Builtin(), 3);
  EXPECT_EQ(pair.perturbation_id, "assault-serious_ms");
  EXPECT_EQ(pair.perturbed_case.case_id, pair.perturbation_id);
  EXPECT_EQ(pair.perturbed_case.gold_specific_articles, (ArticleSet{235}));
  ASSERT_TRUE(pair.label_effect.has_value());
  EXPECT_EQ(pair.label_effect->specific, (ArticleSet{235}));
  EXPECT_NE(pair.perturbed_case.narrative.find("accidentally"), std::string::npos);
  for (const auto& f : pair.perturbed_case.facts) {
    if (f.span) EXPECT_LE(f.span->end, pair.perturbed_case.narrative.size());
  }
}

TEST(ApplyTest, SuspectScopedLabelEffect) {
  const auto& base = FixtureCase("bribery-50000");
  const auto& specs = FixtureSpecs();
  auto spec = *std::find_if(specs.begin(), specs.end(),
                            [](const auto& s) { return s.perturbation_id == "ex-surrender-s1"; });
  ASSERT_TRUE(SpecApplies(base, spec, RuleRegistry::Builtin()));
  auto pair = ApplyPerturbation(base, spec, RuleRegistry::Builtin(), 1);
  EXPECT_TRUE(pair.perturbed_case.suspect_labels.at("s1").general.count(67));
  EXPECT_FALSE(pair.perturbed_case.suspect_labels.at("s2").general.count(67));
  EXPECT_TRUE(pair.perturbed_case.gold_general_articles.count(67));
}

TEST(ApplyTest, PreconditionsAndTemplates) {
  auto registry = FixtureRegistry();
  const auto& specs = FixtureSpecs();
  auto find = [&](const std::string& id) {
    return *std::find_if(specs.begin(), specs.end(),
                         [&](const auto& s) { return s.perturbation_id == id; });
  };
  EXPECT_TRUE(SpecApplies(FixtureCase("assault-serious"), find("ex-self-defense"), registry));
  EXPECT_FALSE(SpecApplies(FixtureCase("assault-negligent-serious"), find("ex-self-defense"), registry));
  EXPECT_FALSE(SpecApplies(FixtureCase("theft-5000"), find("ex-self-defense"), registry));
  EXPECT_TRUE(SpecApplies(FixtureCase("assault-negligent-minor"), find("se-severity-up"), registry));
  EXPECT_FALSE(SpecApplies(FixtureCase("assault-minor"), find("se-severity-up"), registry));
  EXPECT_FALSE(SpecApplies(FixtureCase("assault-self-defense"), find("ms-negligent"), registry));
  EXPECT_FALSE(SpecApplies(FixtureCase("assault-surrender"), find("ex-surrender"), registry));

  EXPECT_EQ(TemplateType(FixtureCase("appendix-g-347")), "drug_crime");
  EXPECT_EQ(TemplateType(FixtureCase("assault-minor")), "injury");
  EXPECT_EQ(TemplateType(FixtureCase("fraud-10000")), "property_crime");
  EXPECT_EQ(TemplateType(FixtureCase("bribery-50000")), "bribery");
  EXPECT_EQ(TemplateType(FixtureCase("smuggling-waste")), "smuggling");
}

TEST(AttackTest, InjectionOnlyAppends) {
  const auto& base = FixtureCase("drug-20");
  for (auto attack : {AttackTemplate::kFabricatedAuthority, AttackTemplate::kVerdictForcing,
                      AttackTemplate::kRoleHijacking, AttackTemplate::kFormatMimicking}) {
    auto attacked = InjectAttack(base, attack, 11);
    EXPECT_EQ(attacked.narrative.rfind(base.narrative, 0), 0u);
    EXPECT_GT(attacked.narrative.size(), base.narrative.size());
    EXPECT_EQ(attacked.facts, base.facts);
    EXPECT_EQ(attacked.gold_specific_articles, base.gold_specific_articles);
    EXPECT_EQ(InjectAttack(base, attack, 11), attacked);
    EXPECT_EQ(Predicted(attacked), Predicted(base));
  }
}

TEST(CorpusTest, SeededAndIndependentOfParallelism) {
  auto registry = FixtureRegistry();
  auto serial = BuildPairCorpus(FixtureCases(), FixtureSpecs(), 7, registry, 1);
  EXPECT_EQ(serial, FixtureCorpus());
  EXPECT_EQ(BuildPairCorpus(FixtureCases(), FixtureSpecs(), 7, registry, 4), serial);
  EXPECT_EQ(BuildPairCorpus(FixtureCases(), FixtureSpecs(), 7, registry, 64), serial);
  EXPECT_NE(BuildPairCorpus(FixtureCases(), FixtureSpecs(), 8, registry, 1), serial);
}

TEST(CorpusTest, CrossProductOrder) {
  std::vector<CaseRecord> bases = {FixtureCase("theft-5000"), FixtureCase("drug-20")};
  std::vector<PerturbationSpec> specs = {Spec("a", {"append_noise"}),
                                         Spec("b", {"set_extra_legal:gender"}),
                                         Spec("c", {"set_extra_legal:wealth=high"})};
  auto pairs = BuildPairCorpus(bases, specs, 1, RuleRegistry::Builtin());
  std::vector<std::string> ids;
  for (const auto& p : pairs) ids.push_back(p.perturbation_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"theft-5000_a", "theft-5000_b", "theft-5000_c",
                                           "drug-20_a", "drug-20_b", "drug-20_c"}));
  bool set = false;
  for (const auto& e : pairs[2].perturbed_case.extra_legal) {
    if (e.name == "wealth") set = e.value == "high";
  }
  EXPECT_TRUE(set);
}

TEST(CorpusTest, PairJsonRoundTrip) {
  ASSERT_FALSE(FixtureCorpus().empty());
  for (const auto& pair : FixtureCorpus()) {
    auto j = PairToJson(pair);
    EXPECT_EQ(PairFromJson(j), pair) << pair.perturbation_id;
    EXPECT_EQ(PairToJson(PairFromJson(nlohmann::json::parse(j.dump()))).dump(), j.dump());
    EXPECT_EQ(j["original_case_id"], pair.base_case.case_id);
  }
}

TEST(CorpusTest, LabelPreservingPairsKeepFactsAndGold) {
  int checked = 0;
  for (const auto& pair : FixtureCorpus()) {
    if (pair.changed_label) continue;
    const auto& base = pair.base_case;
    const auto& perturbed = pair.perturbed_case;
    EXPECT_EQ(perturbed.gold_general_articles, base.gold_general_articles);
    EXPECT_EQ(perturbed.gold_specific_articles, base.gold_specific_articles);
    EXPECT_EQ(perturbed.gold_sentence, base.gold_sentence);
    EXPECT_EQ(perturbed.narrative.rfind(base.narrative, 0), 0u) << pair.perturbation_id;
    CaseRecord same_text = perturbed;
    same_text.narrative = base.narrative;
    same_text.case_id = base.case_id;
    same_text.source_fields = base.source_fields;
    EXPECT_TRUE(ExtraLegalEquivalent(base, same_text)) << pair.perturbation_id;
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

// Label-changing fixture pairs: golds written by the specs agree with a
// brute-force adjudication of the edited facts, and the engine follows.
TEST(CorpusTest, LabelChangingPairsMatchOracleGold) {
  std::vector<SetPair> shift;
  std::vector<SetPair> correctness;
  std::set<PerturbationFamily> families;
  for (const auto& pair : FixtureCorpus()) {
    if (!pair.changed_label) continue;
    const auto& perturbed = pair.perturbed_case;
    auto oracle = OracleStatutes(SampleKb(), perturbed);
    EXPECT_EQ(oracle.first, perturbed.gold_general_articles) << pair.perturbation_id;
    EXPECT_EQ(oracle.second, perturbed.gold_specific_articles) << pair.perturbation_id;

    auto before = Predicted(pair.base_case);
    auto after = Predicted(perturbed);
    shift.push_back({Union(before), Union(after)});
    correctness.push_back({Union(after), Union(oracle)});
    families.insert(pair.family);
  }
  EXPECT_EQ(families, (std::set<PerturbationFamily>{PerturbationFamily::kStatutoryElement,
                                                    PerturbationFamily::kMentalState,
                                                    PerturbationFamily::kExceptionCondition}));
  ASSERT_GE(shift.size(), 10u);
  EXPECT_EQ(ChangeAlignment(shift).value(), 1.0);
  EXPECT_EQ(StatuteCorrectness(correctness).value(), 1.0);
}

TEST(CorpusTest, OracleAgreesWithBaseGold) {
  for (const auto& record : FixtureCases()) {
    auto oracle = OracleStatutes(SampleKb(), record);
    EXPECT_EQ(oracle.first, record.gold_general_articles) << record.case_id;
    EXPECT_EQ(oracle.second, record.gold_specific_articles) << record.case_id;
  }
}

}  // namespace
}  // namespace lexcheck
