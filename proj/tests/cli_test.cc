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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "lexcheck/cli.h"

namespace lexcheck {
namespace {

using testing::DataPath;
using testing::ReadText;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::path(::testing::TempDir()) / name).string();
}

const std::string kKb = DataPath("kb/sample.rules");
const std::string kCases = DataPath("fixtures/cases.jsonl");
const std::string kSpecs = DataPath("fixtures/specs.json");
const std::string kRules = DataPath("fixtures/composites.json");

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"frobnicate"}).code, 2);
  EXPECT_EQ(Cli({"adjudicate", "--kb", kKb}).code, 2);
  EXPECT_EQ(Cli({"adjudicate", "--kb", "/no/such.rules", "--in", kCases}).code, 2);
  EXPECT_EQ(Cli({"adjudicate", "--kb", kKb, "--in", kCases, "--point-policy", "max"}).code, 2);
  EXPECT_EQ(Cli({"perturb", "--in", kCases, "--specs", kSpecs, "--parallelism", "0"}).code, 2);
  EXPECT_EQ(Cli({"adjudicate", "--kb", kKb, "--in", kCases, "--backend", "external"}).code, 2);

  std::string bad = TempPath("bad.rules");
  std::ofstream(bad) << "article 1 {\n";
  auto run = Cli({"kb-validate", "--kb", bad});
  EXPECT_EQ(run.code, 2);
  EXPECT_NE(run.err.find("syntax error at 2:1"), std::string::npos);
}

TEST(CliTest, HelpExitsZero) {
  auto run = Cli({"--help"});
  EXPECT_EQ(run.code, 0);
  EXPECT_NE(run.out.find("adjudicate"), std::string::npos);
}

TEST(CliTest, KeyIsNeverAFlag) {
  for (const char* flag : {"--api-key", "--key", "--api-key-env", "--token"}) {
    EXPECT_EQ(Cli({"extract", "--in", kCases, "--backend", "external", "--endpoint",
                   "http://127.0.0.1:1/v1", flag, "secret"})
                  .code,
              2)
        << flag;
  }
  for (const char* cmd : {"adjudicate", "extract"}) {
    auto help = Cli({cmd, "--help"}).out;
    EXPECT_EQ(help.find("key"), std::string::npos) << cmd;
  }
}

TEST(CliTest, MissingKeyIsADomainError) {
  unsetenv("LEXCHECK_API_KEY");
  auto run = Cli({"extract", "--in", kCases, "--backend", "external", "--endpoint",
                  "http://127.0.0.1:1/v1"});
  EXPECT_EQ(run.code, 1);
  EXPECT_NE(run.err.find("LEXCHECK_API_KEY"), std::string::npos);
}

TEST(CliTest, KbValidateCodes) {
  auto ok = Cli({"kb-validate", "--kb", kKb, "--probes", DataPath("kb/probes.jsonl")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NO_THROW(nlohmann::json::parse(ok.out));
  EXPECT_EQ(Cli({"kb-validate", "--kb", DataPath("fixtures/defective.rules")}).code, 1);
  EXPECT_EQ(Cli({"adjudicate", "--kb", DataPath("fixtures/defective.rules"), "--in", kCases}).code, 1);
}

TEST(CliTest, AdjudicateWritesOneJudgmentPerSuspect) {
  auto run = Cli({"adjudicate", "--kb", kKb, "--in", kCases});
  ASSERT_EQ(run.code, 0) << run.err;
  std::istringstream lines(run.out);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("chosen_clauses"));
    ++n;
  }
  std::size_t expected = 0;
  for (const auto& record : testing::FixtureCases()) expected += record.suspect_ids.size();
  EXPECT_EQ(n, expected);
}

TEST(CliTest, PipelineRuns) {
  std::string pairs = TempPath("pairs.jsonl");
  std::string judgments = TempPath("judgments.jsonl");
  std::string tsv = TempPath("report.tsv");
  ASSERT_EQ(Cli({"perturb", "--in", kCases, "--specs", kSpecs, "--rules", kRules, "--seed", "7",
                 "--out", pairs})
                .code,
            0);
  ASSERT_EQ(Cli({"adjudicate", "--kb", kKb, "--in", pairs, "--out", judgments}).code, 0);
  auto report = Cli({"evaluate", "--in", pairs, "--predictions", judgments, "--clusters",
                     DataPath("clusters.json"), "--baseline-group", "extra_legal", "--tsv", tsv});
  ASSERT_EQ(report.code, 0) << report.err;
  EXPECT_TRUE(nlohmann::json::parse(report.out).contains("groups"));
  EXPECT_NE(ReadText(tsv).find("overall\tall"), std::string::npos);

  EXPECT_EQ(Cli({"evaluate", "--in", pairs, "--predictions", judgments, "--baseline-group",
                 "no_such_group"})
                .code,
            1);
}

TEST(CliTest, OutputsAreByteIdenticalAcrossRunsAndParallelism) {
  auto perturb = [](const std::string& parallelism) {
    return Cli({"perturb", "--in", kCases, "--specs", kSpecs, "--rules", kRules, "--seed", "42",
                "--parallelism", parallelism})
        .out;
  };
  auto p1 = perturb("1");
  ASSERT_FALSE(p1.empty());
  EXPECT_EQ(perturb("1"), p1);
  EXPECT_EQ(perturb("8"), p1);

  std::string pairs = TempPath("repro_pairs.jsonl");
  std::ofstream(pairs, std::ios::binary) << p1;
  auto adjudicate = [&](const std::string& parallelism) {
    return Cli({"adjudicate", "--kb", kKb, "--in", pairs, "--parallelism", parallelism}).out;
  };
  auto a1 = adjudicate("1");
  ASSERT_FALSE(a1.empty());
  EXPECT_EQ(adjudicate("1"), a1);
  EXPECT_EQ(adjudicate("8"), a1);
}

TEST(CliTest, BinaryExitCodes) {
  auto status = [](const std::string& args) {
    int raw = std::system((std::string(LEXCHECK_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("kb-validate --kb " + kKb), 0);
  EXPECT_EQ(status("kb-validate --kb " + DataPath("fixtures/defective.rules")), 1);
  EXPECT_EQ(status("kb-validate"), 2);
}

}  // namespace
}  // namespace lexcheck
