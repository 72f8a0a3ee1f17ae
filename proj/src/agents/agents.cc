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

#include <algorithm>
#include <cstdlib>

#include "lexcheck/agents.h"
#include "lexcheck/errors.h"

namespace lexcheck {

namespace prompt_assets {
const std::vector<std::pair<std::string_view, std::string_view>>& All();
}  // namespace prompt_assets

namespace {

using nlohmann::ordered_json;

bool SameClaim(const FactAtom& a, const FactAtom& b) {
  return a.kind == b.kind && a.subject_id == b.subject_id && a.predicate == b.predicate &&
         a.value == b.value;
}

bool InSomeGroup(const ExclusivityAxioms& axioms, const std::string& predicate) {
  for (const auto& g : axioms) {
    for (const auto& m : g.members) {
      if (m.predicate == predicate) return true;
    }
  }
  return false;
}

bool Conflicting(const FactAtom& a, const FactAtom& b, const StatuteKB* kb) {
  if (a.subject_id != b.subject_id || a.predicate != b.predicate || a.value == b.value) return false;
  if (std::holds_alternative<IdPair>(a.value) || std::holds_alternative<IdPair>(b.value)) {
    return false;
  }
  if (kb && std::holds_alternative<std::string>(a.value) &&
      std::holds_alternative<std::string>(b.value)) {
    return InSomeGroup(kb->exclusivity_axioms, a.predicate);
  }
  return true;
}

}  // namespace

std::string_view AgentRoleName(AgentRole role) {
  return role == AgentRole::kProsecutor ? "prosecutor" : "defense";
}

ArticleSet ArgumentTuple::Candidates() const {
  ArticleSet out = candidate_general;
  out.insert(candidate_specific.begin(), candidate_specific.end());
  return out;
}

ordered_json ArgumentToJson(const ArgumentTuple& arg) {
  ordered_json out;
  out["role"] = AgentRoleName(arg.role);
  auto facts = ordered_json::array();
  for (const auto& f : arg.facts) facts.push_back(FactToJson(f));
  out["facts"] = std::move(facts);
  out["general_articles"] = arg.candidate_general;
  out["specific_articles"] = arg.candidate_specific;
  out["dropped"] = arg.dropped;
  return out;
}

std::optional<ExtractorBackend> ParseExtractorBackend(std::string_view name) {
  if (name == "deterministic") return ExtractorBackend::kDeterministic;
  if (name == "external") return ExtractorBackend::kExternal;
  return std::nullopt;
}

void CheckExtractorConfig(const ExtractorConfig& config) {
  if (config.backend == ExtractorBackend::kExternal) {
    if (config.endpoint_url.empty()) throw ValueError("external backend needs an endpoint url");
    if (config.api_key_env_var.empty()) throw ValueError("external backend needs an api key variable");
  }
  if (config.timeout_seconds <= 0) throw ValueError("timeout must be positive");
  if (config.max_retries < 0) throw ValueError("max_retries must be >= 0");
  if (config.max_in_flight < 1) throw ValueError("max_in_flight must be >= 1");
  if (!config.prompt_template_id.empty()) PromptTemplate(config.prompt_template_id);
}

std::vector<std::string> PromptTemplateIds() {
  std::vector<std::string> out;
  for (const auto& [id, text] : prompt_assets::All()) out.emplace_back(id);
  return out;
}

std::string_view PromptTemplate(std::string_view id) {
  for (const auto& [name, text] : prompt_assets::All()) {
    if (name == id) return text;
  }
  throw ValueError("unknown prompt template: " + std::string(id));
}

std::string RenderPrompt(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      std::size_t close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        auto it = vars.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

std::unique_ptr<ArgumentExtractor> MakeExtractor(const ExtractorConfig& config) {
  CheckExtractorConfig(config);
  if (config.backend == ExtractorBackend::kExternal) {
    return std::make_unique<ExternalExtractor>(config);
  }
  return std::make_unique<DeterministicExtractor>();
}

MergedArguments MergeArguments(const ArgumentTuple& p, const ArgumentTuple& d, const StatuteKB* kb) {
  MergedArguments out;
  for (const auto* side : {&p, &d}) {
    for (const auto& f : side->facts) {
      bool seen = std::any_of(out.facts.begin(), out.facts.end(),
                              [&](const FactAtom& g) { return SameClaim(f, g); });
      if (!seen) out.facts.push_back(f);
    }
    auto c = side->Candidates();
    out.candidates.insert(c.begin(), c.end());
  }
  for (const auto& a : p.facts) {
    for (const auto& b : d.facts) {
      if (Conflicting(a, b, kb)) out.conflicts.emplace_back(a, b);
    }
  }
  return out;
}

ArticleSet ClusterDebate(const ArticleSet& candidates, const ClusterTable& clusters) {
  ArticleSet out = candidates;
  for (const auto& cluster : clusters) {
    bool touched = std::any_of(cluster.articles.begin(), cluster.articles.end(),
                               [&](ArticleNo a) { return candidates.count(a) > 0; });
    if (touched) out.insert(cluster.articles.begin(), cluster.articles.end());
  }
  return out;
}

}  // namespace lexcheck
