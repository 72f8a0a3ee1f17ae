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

// Prosecutor and defense argument extraction. Each agent turns a case
// narrative into typed facts, every one anchored to a narrative span, plus
// candidate articles. The deterministic backend is a fixed pattern table;
// the external backend calls a chat-completion service and re-grounds
// whatever facts it claims.

#ifndef LEXCHECK_AGENTS_H_
#define LEXCHECK_AGENTS_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lexcheck/case_model.h"
#include "lexcheck/clusters.h"
#include "lexcheck/statute_kb.h"

namespace lexcheck {

enum class AgentRole { kProsecutor, kDefense };

std::string_view AgentRoleName(AgentRole role);

struct ArgumentTuple {
  AgentRole role = AgentRole::kProsecutor;
  std::vector<FactAtom> facts;
  ArticleSet candidate_general;
  ArticleSet candidate_specific;
  // Claimed facts that could not be located in the narrative.
  std::vector<std::string> dropped;

  ArticleSet Candidates() const;
  bool operator==(const ArgumentTuple&) const = default;
};

nlohmann::ordered_json ArgumentToJson(const ArgumentTuple& arg);

enum class ExtractorBackend { kDeterministic, kExternal };

std::optional<ExtractorBackend> ParseExtractorBackend(std::string_view name);

struct ExtractorConfig {
  ExtractorBackend backend = ExtractorBackend::kDeterministic;
  std::string endpoint_url;
  std::string model_name;
  std::string api_key_env_var = "LEXCHECK_API_KEY";
  // Empty picks the statute selector for the role.
  std::string prompt_template_id;
  double timeout_seconds = 60;
  int max_retries = 2;
  int retry_backoff_ms = 500;
  int max_in_flight = 4;
  double temperature = 0;
};

// Throws ValueError.
void CheckExtractorConfig(const ExtractorConfig& config);

// ---- prompt templates ------------------------------------------------

std::vector<std::string> PromptTemplateIds();
// Throws ValueError for an unknown id.
std::string_view PromptTemplate(std::string_view id);
// Replaces each {name} placeholder found in `vars`; other braces stay.
std::string RenderPrompt(std::string_view tmpl, const std::map<std::string, std::string>& vars);

// ---- extractors ------------------------------------------------------

class ArgumentExtractor {
 public:
  virtual ~ArgumentExtractor() = default;
  virtual ArgumentTuple Extract(const CaseRecord& record, AgentRole role) const = 0;
};

// Keyword and pattern rules over the narrative. Pure function of
// (narrative, role, suspect).
class DeterministicExtractor final : public ArgumentExtractor {
 public:
  ArgumentTuple Extract(const CaseRecord& record, AgentRole role) const override;

  // Facts found in `text`, with spans relative to it.
  std::vector<FactAtom> FactsIn(std::string_view text, const std::string& suspect) const;
};

struct HttpReply {
  int status = 0;
  std::string body;
};

// (url, json body, headers, timeout seconds) -> reply. Throws ServiceError
// on transport failure.
using HttpTransport = std::function<HttpReply(
    const std::string& url, const std::string& body,
    const std::vector<std::pair<std::string, std::string>>& headers, double timeout)>;

HttpTransport DefaultHttpTransport();

class ExternalExtractor final : public ArgumentExtractor {
 public:
  // Throws ValueError on a bad config or when the key variable is unset.
  explicit ExternalExtractor(ExtractorConfig config, HttpTransport transport = DefaultHttpTransport());

  ArgumentTuple Extract(const CaseRecord& record, AgentRole role) const override;

  // One chat completion; retries with exponential backoff.
  std::string Complete(const std::string& prompt) const;

 private:
  ExtractorConfig config_;
  HttpTransport transport_;
  std::string api_key_;
  std::shared_ptr<std::counting_semaphore<>> in_flight_;
};

std::unique_ptr<ArgumentExtractor> MakeExtractor(const ExtractorConfig& config);

// Text of the first candidate message in a chat-completion response.
// Throws ParseError.
std::string ExtractMessageText(std::string_view response_body);

// {"general_articles": [...], "specific_articles": [...]} anywhere in the
// text. Throws ParseError.
std::pair<ArticleSet, ArticleSet> ParseArticleSelection(std::string_view text);

// ---- combining agents ------------------------------------------------

struct MergedArguments {
  std::vector<FactAtom> facts;
  ArticleSet candidates;
  std::vector<std::pair<FactAtom, FactAtom>> conflicts;
};

// With a KB, enum values of predicates outside every exclusive group may
// coexist.
MergedArguments MergeArguments(const ArgumentTuple& p, const ArgumentTuple& d,
                               const StatuteKB* kb = nullptr);

// Adds every member of any cluster that meets the candidate set.
ArticleSet ClusterDebate(const ArticleSet& candidates, const ClusterTable& clusters);

}  // namespace lexcheck

#endif  // LEXCHECK_AGENTS_H_
