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

#ifndef LEXCHECK_CLI_H_
#define LEXCHECK_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lexcheck/adjudicator.h"
#include "lexcheck/agents.h"

namespace lexcheck {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

enum class CandidateMode { kExhaustive, kAgents };

struct RunConfig {
  std::string kb_path;
  std::string input_path;
  std::string output_path;  // empty: standard output
  std::string probes_path;
  std::string specs_path;
  std::string rules_path;   // composite perturbation rules
  std::string predictions_path;
  std::string clusters_path;
  std::string tsv_path;
  std::string baseline_group;
  std::uint64_t seed = 0;
  ExtractorConfig extractor;
  PointPolicy point_policy = PointPolicy::kMid;
  CandidateMode candidates = CandidateMode::kExhaustive;
  bool repair = false;
  int parallelism = 1;
};

int CmdKbValidate(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdAdjudicate(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdExtract(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdPerturb(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdEvaluate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (without the program name) and dispatches.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lexcheck

#endif  // LEXCHECK_CLI_H_
