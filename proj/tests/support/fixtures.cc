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

#include "fixtures.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oracle.h"

namespace lexcheck::testing {

std::string DataPath(std::string_view relative) {
  return std::string(LEXCHECK_DATA_DIR) + "/" + std::string(relative);
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<nlohmann::json> ReadJsonLines(const std::string& path) {
  std::istringstream in(ReadText(path));
  std::vector<nlohmann::json> out;
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

const StatuteKB& SampleKb() {
  static const StatuteKB kb = [] {
    StatuteKB k = LoadKbFile(DataPath("kb/sample.rules"));
    auto report = ValidateKb(k, LoadProbes(DataPath("kb/probes.jsonl")));
    if (!report.ok()) throw std::runtime_error("sample KB failed validation");
    return k;
  }();
  return kb;
}

const std::vector<CaseRecord>& FixtureCases() {
  static const std::vector<CaseRecord> cases = [] {
    std::vector<CaseRecord> out;
    for (const auto& j : ReadJsonLines(DataPath("fixtures/cases.jsonl"))) {
      out.push_back(ParseCase(j, DetectCaseSchema(j)));
    }
    return out;
  }();
  return cases;
}

const CaseRecord& FixtureCase(std::string_view case_id) {
  for (const auto& c : FixtureCases()) {
    if (c.case_id == case_id) return c;
  }
  throw std::out_of_range("no fixture case " + std::string(case_id));
}

std::vector<ConstraintRef> AllClauseRefs(const StatuteKB& kb) {
  std::vector<ConstraintRef> refs;
  for (const auto& [no, article] : kb.articles) {
    for (const auto& clause : article.clauses) refs.push_back({&article, &clause});
  }
  return refs;
}

std::vector<GroundProblem> GroundAllClauses(const StatuteKB& kb, const CaseRecord& record,
                                            const std::string& suspect) {
  auto refs = AllClauseRefs(kb);
  auto slice = RefineFacts(FactsForSuspect(record, suspect), refs, kb, ConflictPolicy::kRecord);
  return Encode(slice, refs, kb);
}

std::pair<ArticleSet, ArticleSet> OracleStatutes(const StatuteKB& kb, const CaseRecord& record) {
  std::pair<ArticleSet, ArticleSet> out;
  for (const auto& suspect : record.suspect_ids) {
    for (const auto& problem : GroundAllClauses(kb, record, suspect)) {
      std::vector<bool> active(problem.constraints.size(), true);
      if (!OracleSatisfiable(problem, kb.exclusivity_axioms, active)) continue;
      ArticleNo a = problem.clause_id.article;
      (IsGeneralArticle(a) ? out.first : out.second).insert(a);
    }
  }
  return out;
}

}  // namespace lexcheck::testing
