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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "lexcheck/agents.h"
#include "lexcheck/errors.h"

namespace lexcheck {
namespace {

std::string Lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Balanced {...} starting at `open`, skipping braces inside strings.
std::optional<std::string_view> ObjectAt(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return text.substr(open, i - open + 1);
  }
  return std::nullopt;
}

ArticleSet ArticleList(const nlohmann::json& list, const char* field) {
  if (!list.is_array()) throw ParseError(std::string(field) + " is not a list");
  ArticleSet out;
  for (const auto& a : list) {
    if (a.is_number_integer()) {
      out.insert(a.get<ArticleNo>());
    } else if (a.is_string() && !a.get<std::string>().empty() &&
               a.get<std::string>().find_first_not_of("0123456789") == std::string::npos) {
      out.insert(std::stoi(a.get<std::string>()));
    } else {
      throw ParseError(std::string(field) + " holds a non-article entry: " + a.dump());
    }
  }
  return out;
}

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& sem) : sem_(sem) { sem_.acquire(); }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

}  // namespace

std::string ExtractMessageText(std::string_view response_body) {
  auto doc = nlohmann::json::parse(response_body, nullptr, false);
  if (doc.is_discarded()) throw ParseError("service response is not JSON");
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const auto& first = doc["choices"][0];
    if (first.contains("message") && first["message"].contains("content") &&
        first["message"]["content"].is_string()) {
      return first["message"]["content"].get<std::string>();
    }
  }
  if (doc.contains("content") && doc["content"].is_array() && !doc["content"].empty() &&
      doc["content"][0].contains("text") && doc["content"][0]["text"].is_string()) {
    return doc["content"][0]["text"].get<std::string>();
  }
  throw ParseError("service response has no candidate message");
}

std::pair<ArticleSet, ArticleSet> ParseArticleSelection(std::string_view text) {
  bool saw_object = false;
  for (std::size_t i = text.find('{'); i != std::string_view::npos; i = text.find('{', i + 1)) {
    auto obj = ObjectAt(text, i);
    if (!obj) break;
    auto doc = nlohmann::json::parse(*obj, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) continue;
    saw_object = true;
    if (!doc.contains("general_articles") && !doc.contains("specific_articles")) continue;
    if (!doc.contains("general_articles")) throw ParseError("response lacks general_articles");
    if (!doc.contains("specific_articles")) throw ParseError("response lacks specific_articles");
    return {ArticleList(doc["general_articles"], "general_articles"),
            ArticleList(doc["specific_articles"], "specific_articles")};
  }
  throw ParseError(saw_object ? "response lacks general_articles and specific_articles"
                              : "response holds no JSON object");
}

HttpTransport DefaultHttpTransport() {
  return [](const std::string& url, const std::string& body,
            const std::vector<std::pair<std::string, std::string>>& headers,
            double timeout) -> HttpReply {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ServiceError("endpoint url lacks a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    std::string base = url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client client(base);
    auto secs = static_cast<time_t>(timeout);
    auto usecs = static_cast<time_t>((timeout - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Post(path, h, body, "application/json");
    if (!res) throw ServiceError("request to " + base + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  };
}

ExternalExtractor::ExternalExtractor(ExtractorConfig config, HttpTransport transport)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      in_flight_(std::make_shared<std::counting_semaphore<>>(config_.max_in_flight)) {
  config_.backend = ExtractorBackend::kExternal;
  CheckExtractorConfig(config_);
  const char* key = std::getenv(config_.api_key_env_var.c_str());
  if (!key || !*key) {
    throw ValueError("environment variable " + config_.api_key_env_var + " is not set");
  }
  api_key_ = key;
}

std::string ExternalExtractor::Complete(const std::string& prompt) const {
  nlohmann::ordered_json request;
  request["model"] = config_.model_name;
  request["messages"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"role", "user"}, {"content", prompt}}});
  request["temperature"] = config_.temperature;
  const std::string body = request.dump();
  const std::vector<std::pair<std::string, std::string>> headers = {
      {"Authorization", "Bearer " + api_key_}};

  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long>(config_.retry_backoff_ms) << (attempt - 1)));
    }
    HttpReply reply;
    try {
      SlotGuard slot(*in_flight_);
      reply = transport_(config_.endpoint_url, body, headers, config_.timeout_seconds);
    } catch (const ServiceError& e) {
      last_error = e.what();
      continue;
    }
    if (reply.status == 200) return ExtractMessageText(reply.body);
    last_error = "HTTP " + std::to_string(reply.status);
    if (reply.status != 429 && reply.status < 500) break;
  }
  throw ServiceError("service call failed: " + last_error);
}

ArgumentTuple ExternalExtractor::Extract(const CaseRecord& record, AgentRole role) const {
  const std::string suffix = role == AgentRole::kProsecutor ? "prosecutor" : "defense";
  const std::map<std::string, std::string> vars = {{"case_text", record.narrative}};
  ArgumentTuple out;
  out.role = role;

  std::string selector_id = config_.prompt_template_id.empty()
                                ? "statute_selector_" + suffix
                                : config_.prompt_template_id;
  auto [general, specific] =
      ParseArticleSelection(Complete(RenderPrompt(PromptTemplate(selector_id), vars)));
  out.candidate_general = std::move(general);
  out.candidate_specific = std::move(specific);

  const std::string claimed =
      Complete(RenderPrompt(PromptTemplate("fact_extractor_" + suffix), vars));
  const std::string suspect = record.suspect_ids.empty() ? "s1" : record.suspect_ids.front();
  const std::string narrative = Lower(record.narrative);
  for (auto fact : DeterministicExtractor().FactsIn(claimed, suspect)) {
    std::string phrase = claimed.substr(fact.span->begin, fact.span->end - fact.span->begin);
    auto at = narrative.find(Lower(phrase));
    if (at == std::string::npos) {
      out.dropped.push_back(fact.predicate + "=" + FactValueToString(fact.value) + " (\"" + phrase +
                            "\")");
      continue;
    }
    fact.span = SourceSpan{at, at + phrase.size()};
    out.facts.push_back(std::move(fact));
  }
  return out;
}

}  // namespace lexcheck
