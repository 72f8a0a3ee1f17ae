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

// Paired original/perturbed cases. Edits are named operators applied in
// order; label-preserving operators only touch extra-legal attributes and
// appended narrative text, material operators change facts and gold labels.

#ifndef LEXCHECK_PERTURBATION_H_
#define LEXCHECK_PERTURBATION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lexcheck/case_model.h"

namespace lexcheck {

enum class PerturbationFamily {
  kJudicialFairness,
  kBenignRobustness,
  kMajorPremise,
  kMinorPremise,
  kConclusionLevel,
  kStatutoryElement,
  kMentalState,
  kExceptionCondition,
  kStatuteConfusion,
};

std::string_view FamilyName(PerturbationFamily family);
std::optional<PerturbationFamily> ParseFamily(std::string_view name);
// nullopt when the family allows both.
std::optional<bool> FamilyChangesLabel(PerturbationFamily family);

enum class AttackTemplate {
  kFabricatedAuthority,
  kVerdictForcing,
  kRoleHijacking,
  kFormatMimicking,
};

std::string_view AttackName(AttackTemplate attack);
std::optional<AttackTemplate> ParseAttack(std::string_view name);

struct LabelEffect {
  std::string description;
  // Post-edit gold sets; when unset they follow from the base gold and the
  // add/remove lists.
  std::optional<ArticleSet> general;
  std::optional<ArticleSet> specific;
  ArticleSet add;
  ArticleSet remove;
  // Suspect whose per-suspect label the add/remove lists touch.
  std::string suspect;

  bool operator==(const LabelEffect&) const = default;
};

struct PerturbationSpec {
  std::string perturbation_id;
  PerturbationFamily family = PerturbationFamily::kJudicialFairness;
  // "name" or "name:argument"
  std::vector<std::string> rules;
  bool changed_label = false;
  std::optional<LabelEffect> label_effect;
  std::optional<AttackTemplate> attack_template;
  // Legal-relevance categories, also the metric breakdown groups.
  std::vector<std::string> categories;
  // Crime-template families the spec applies to; empty means all.
  std::vector<std::string> template_types;
  // Base-case conditions, each "Pred=value", "article:N" or either form
  // negated with a leading '!'.
  std::vector<std::string> preconditions;

  bool operator==(const PerturbationSpec&) const = default;
};

PerturbationSpec SpecFromJson(const nlohmann::json& j);
nlohmann::ordered_json SpecToJson(const PerturbationSpec& spec);
// Reads a JSON list or one spec per line.
std::vector<PerturbationSpec> LoadSpecs(const std::string& path);

// Structural checks; throws ValueError.
void CheckSpec(const PerturbationSpec& spec);

struct PerturbationPair {
  std::string perturbation_id;
  std::string template_type;
  std::vector<std::string> rules;
  std::vector<std::string> categories;
  PerturbationFamily family = PerturbationFamily::kJudicialFairness;
  std::optional<AttackTemplate> attack_template;
  bool changed_label = false;
  std::optional<LabelEffect> label_effect;
  CaseRecord base_case;
  CaseRecord perturbed_case;

  bool operator==(const PerturbationPair&) const = default;
};

// The pair interchange record: perturbation_id, original_case_id,
// template_type, perturbation_rules, perturbation_categories (categories
// plus "family=..." and "attack=..." tokens), changed_label, label_effect,
// base_case, perturbed_case.
nlohmann::ordered_json PairToJson(const PerturbationPair& pair);
PerturbationPair PairFromJson(const nlohmann::json& j);

// Crime-template family of a case: the template_type source field, or one
// inferred from its offense articles.
std::string TemplateType(const CaseRecord& record);

// ---- edit operators ----------------------------------------------------

struct EditContext {
  std::mt19937_64* rng = nullptr;
  std::string suspect;  // first suspect of the case
};

struct EditOperator {
  std::string name;
  // Material edits may only appear in label-changing specs.
  bool material = false;
  std::function<bool(const CaseRecord&, const std::string& arg)> applies;
  std::function<void(CaseRecord&, const std::string& arg, EditContext&)> apply;
};

class RuleRegistry {
 public:
  // Registry holding the built-in operators.
  static RuleRegistry Builtin();

  void Register(EditOperator op);
  // Composite rules from {"rules": [{"name", "material", "steps": [...]}]},
  // each step itself a registered rule.
  void LoadComposites(const nlohmann::json& doc);

  const EditOperator* Find(std::string_view name) const;
  std::vector<std::string> Names() const;

 private:
  std::map<std::string, EditOperator, std::less<>> ops_;
};

// Splits "name:argument".
std::pair<std::string, std::string> SplitRule(std::string_view rule);

// Throws UnknownRule and RuleLabelMismatch.
PerturbationPair ApplyPerturbation(const CaseRecord& base, const PerturbationSpec& spec,
                                   const RuleRegistry& registry, std::uint64_t seed = 0);

// Appends adversarial text; facts and gold labels stay as they are.
CaseRecord InjectAttack(const CaseRecord& base, AttackTemplate attack, std::uint64_t payload_seed);

// True when every rule of the spec applies to the base and the base's
// template family is accepted.
bool SpecApplies(const CaseRecord& base, const PerturbationSpec& spec, const RuleRegistry& registry);

// Bases in order, each with its applicable specs in order. Deterministic
// for a seed regardless of `parallelism`.
std::vector<PerturbationPair> BuildPairCorpus(const std::vector<CaseRecord>& bases,
                                              const std::vector<PerturbationSpec>& specs,
                                              std::uint64_t seed, const RuleRegistry& registry,
                                              int parallelism = 1);

}  // namespace lexcheck

#endif  // LEXCHECK_PERTURBATION_H_
