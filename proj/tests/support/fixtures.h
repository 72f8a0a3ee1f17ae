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

// Shipped fixture files, loaded once per process.

#ifndef LEXCHECK_TESTS_FIXTURES_H_
#define LEXCHECK_TESTS_FIXTURES_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexcheck/case_model.h"
#include "lexcheck/compiler.h"
#include "lexcheck/kb_validator.h"
#include "lexcheck/statute_kb.h"

namespace lexcheck::testing {

std::string DataPath(std::string_view relative);

std::string ReadText(const std::string& path);

// One JSON value per non-blank line.
std::vector<nlohmann::json> ReadJsonLines(const std::string& path);

// The sample KB, validated against its probes.
const StatuteKB& SampleKb();

// data/fixtures/cases.jsonl
const std::vector<CaseRecord>& FixtureCases();

const CaseRecord& FixtureCase(std::string_view case_id);

// Refs to every clause of the KB, without the validation requirement.
std::vector<ConstraintRef> AllClauseRefs(const StatuteKB& kb);

// Every clause of `kb` grounded against the record's facts for `suspect`.
std::vector<GroundProblem> GroundAllClauses(const StatuteKB& kb, const CaseRecord& record,
                                            const std::string& suspect);

// Statutes of every clause whose ground problem the brute-force oracle
// finds satisfiable, over all suspects of the record.
std::pair<ArticleSet, ArticleSet> OracleStatutes(const StatuteKB& kb, const CaseRecord& record);

}  // namespace lexcheck::testing

#endif  // LEXCHECK_TESTS_FIXTURES_H_
