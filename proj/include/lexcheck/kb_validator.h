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

#ifndef LEXCHECK_KB_VALIDATOR_H_
#define LEXCHECK_KB_VALIDATOR_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexcheck/case_model.h"
#include "lexcheck/statute_kb.h"

namespace lexcheck {

struct ValidationIssue {
  std::string check;     // e.g. "vacuous", "contradictory", "activation"
  std::string location;  // clause id, article number or probe id
  std::string detail;
  bool error = true;     // warnings do not block validation

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> syntactic;
  std::vector<ValidationIssue> semantic;
  std::vector<ValidationIssue> case_level;
  std::size_t probe_count = 0;

  std::size_t ErrorCount() const;
  bool ok() const { return ErrorCount() == 0; }
  nlohmann::ordered_json ToJson() const;
};

// A probe case and the clauses it is expected to activate.
struct ProbeCase {
  CaseRecord record;
  std::string suspect;  // empty: first suspect
  std::vector<ClauseId> expected;
};

// One JSON object per line: {"case": {...}, "expect": ["347.4"], "suspect": "S1"}.
std::vector<ProbeCase> LoadProbes(const std::string& path);
ProbeCase ParseProbe(const nlohmann::json& line);

struct ValidatorOptions {
  // Share of probes a clause may fire on before it counts as overly broad.
  double overly_broad_threshold = 0.95;
  // Breadth is not judged on fewer probes than this.
  std::size_t min_probes_for_breadth = 5;
  int atom_cap = 16;
  // Contradiction search over adjustment subsets stops at this many
  // adjustments per clause.
  std::size_t max_adjustments = 12;
};

// Runs the syntactic, semantic and case-level checks and sets
// kb.validated() iff no check reports an error.
ValidationReport ValidateKb(StatuteKB& kb, const std::vector<ProbeCase>& probes,
                            const ValidatorOptions& options = {});

// Whether a clause fires on a probe: article guard, clause guard and no
// exception all hold, and the adjusted interval is nonempty.
std::vector<ClauseId> ActivatedClauses(const StatuteKB& kb, const CaseRecord& record,
                                       const std::string& suspect);

}  // namespace lexcheck

#endif  // LEXCHECK_KB_VALIDATOR_H_
