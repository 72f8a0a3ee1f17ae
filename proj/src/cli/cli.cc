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

#include "lexcheck/cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexcheck/clusters.h"
#include "lexcheck/errors.h"
#include "lexcheck/kb_validator.h"
#include "lexcheck/metrics.h"
#include "lexcheck/perturbation.h"
#include "lexcheck/statute_kb.h"

namespace lexcheck {
namespace {

using nlohmann::ordered_json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteOutput(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::ios_base::failure("cannot write " + config.output_path);
  file << text;
  if (!file) throw std::ios_base::failure("cannot write " + config.output_path);
}

// One record per line, or a single JSON document (object or list).
std::vector<nlohmann::json> ReadRecords(const std::string& path) {
  std::string text = ReadFile(path);
  std::vector<nlohmann::json> out;
  std::istringstream lines(text);
  std::string line;
  bool line_mode = true;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      line_mode = false;
      break;
    }
    out.push_back(std::move(j));
  }
  if (line_mode) return out;
  out.clear();
  auto doc = nlohmann::json::parse(text);
  if (doc.is_array()) {
    for (auto& j : doc) out.push_back(std::move(j));
  } else {
    out.push_back(std::move(doc));
  }
  return out;
}

bool IsPair(const nlohmann::json& j) { return j.is_object() && j.contains("perturbed_case"); }

std::string RecordLabel(const nlohmann::json& j, std::size_t index) {
  for (const char* key : {"case_id", "id", "filename"}) {
    if (j.is_object() && j.contains(key) && j[key].is_string()) return j[key].get<std::string>();
  }
  return "record " + std::to_string(index + 1);
}

std::string Lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads; the first failure by
// index is rethrown.
template <typename Fn>
void ParallelFor(std::size_t n, int workers, Fn&& fn) {
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename Fn>
int Guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

std::vector<ProbeCase> MaybeProbes(const RunConfig& config) {
  if (config.probes_path.empty()) return {};
  return LoadProbes(config.probes_path);
}

// Cases to judge: plain records, or both sides of every pair, first
// occurrence of each id kept.
struct CaseInput {
  std::string label;
  std::optional<CaseRecord> record;
  std::string error;
};

std::vector<CaseInput> CollectCases(const std::vector<nlohmann::json>& records) {
  std::vector<CaseInput> out;
  std::set<std::string> seen;
  auto add = [&](const nlohmann::json& j, std::size_t index) {
    CaseInput input{RecordLabel(j, index), std::nullopt, ""};
    try {
      CaseRecord record = ParseCase(j, DetectCaseSchema(j));
      if (!seen.insert(record.case_id).second) return;
      input.label = record.case_id;
      input.record = std::move(record);
    } catch (const Error& e) {
      input.error = e.what();
    }
    out.push_back(std::move(input));
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (IsPair(records[i])) {
      add(records[i]["base_case"], i);
      add(records[i]["perturbed_case"], i);
    } else {
      add(records[i], i);
    }
  }
  return out;
}

std::string ErrorLine(const std::string& label, const std::string& message) {
  ordered_json j;
  j["case_id"] = label;
  j["error"] = message;
  return j.dump();
}

ordered_json MergedToJson(const MergedArguments& merged) {
  ordered_json j;
  auto facts = ordered_json::array();
  for (const auto& f : merged.facts) facts.push_back(FactToJson(f));
  j["facts"] = std::move(facts);
  j["candidates"] = merged.candidates;
  auto conflicts = ordered_json::array();
  for (const auto& [a, b] : merged.conflicts) conflicts.push_back({FactToJson(a), FactToJson(b)});
  j["conflicts"] = std::move(conflicts);
  return j;
}

}  // namespace

int CmdKbValidate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    StatuteKB kb = LoadKbFile(config.kb_path);
    auto report = ValidateKb(kb, MaybeProbes(config));
    WriteOutput(config, report.ToJson().dump(2) + '\n', out);
    if (!report.ok()) {
      err << "knowledge base has " << report.ErrorCount() << " validation error(s)\n";
      return kExitDomain;
    }
    return kExitOk;
  });
}

int CmdAdjudicate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    StatuteKB kb = LoadKbFile(config.kb_path);
    auto report = ValidateKb(kb, MaybeProbes(config));
    if (!report.ok()) throw KBNotValidated();
    ClusterTable clusters;
    if (!config.clusters_path.empty()) clusters = LoadClusters(config.clusters_path);

    std::shared_ptr<ArgumentExtractor> extractor;
    if (config.candidates == CandidateMode::kAgents || config.repair) {
      extractor = MakeExtractor(config.extractor);
    }
    AdjudicatorConfig adjudicator;
    adjudicator.point_policy = config.point_policy;
    adjudicator.repair = config.repair;
    if (config.repair) {
      adjudicator.extractor = [extractor](const CaseRecord& record, const std::string& suspect,
                                          const std::vector<Diagnostic>&) {
        auto facts = extractor->Extract(record, AgentRole::kProsecutor).facts;
        CaseRecord view = record;
        view.facts = std::move(facts);
        return FactsForSuspect(view, suspect);
      };
    }

    auto cases = CollectCases(ReadRecords(config.input_path));
    std::vector<std::vector<std::string>> lines(cases.size());
    ParallelFor(cases.size(), config.parallelism, [&](std::size_t i) {
      const auto& input = cases[i];
      if (!input.record) {
        lines[i].push_back(ErrorLine(input.label, input.error));
        return;
      }
      try {
        CaseRecord record = *input.record;
        ArticleSet candidates;
        if (config.candidates == CandidateMode::kAgents) {
          auto merged = MergeArguments(extractor->Extract(record, AgentRole::kProsecutor),
                                       extractor->Extract(record, AgentRole::kDefense), &kb);
          candidates = clusters.empty() ? merged.candidates
                                        : ClusterDebate(merged.candidates, clusters);
          if (record.facts.empty()) record.facts = merged.facts;
          // No proposal at all would otherwise mean "every article".
          if (candidates.empty()) {
            Judgment none;
            none.case_id = record.case_id;
            none.consequence = std::string(kNoApplicableClause);
            for (const auto& s : record.suspect_ids) {
              none.suspect_id = s;
              lines[i].push_back(JudgmentToJson(none).dump());
            }
            return;
          }
        }
        for (const auto& j : AdjudicateAll(record, kb, candidates, adjudicator)) {
          lines[i].push_back(JudgmentToJson(j).dump());
        }
      } catch (const Error& e) {
        lines[i] = {ErrorLine(input.label, e.what())};
      }
    });
    std::string text;
    std::size_t failures = 0;
    for (const auto& group : lines) {
      text += Lines(group);
      for (const auto& l : group) failures += l.find("\"error\":") != std::string::npos;
    }
    WriteOutput(config, text, out);
    if (failures > 0) err << failures << " case(s) could not be adjudicated\n";
    return kExitOk;
  });
}

int CmdExtract(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    std::optional<StatuteKB> kb;
    if (!config.kb_path.empty()) kb = LoadKbFile(config.kb_path);
    auto extractor = MakeExtractor(config.extractor);
    auto cases = CollectCases(ReadRecords(config.input_path));
    std::vector<std::string> lines(cases.size());
    ParallelFor(cases.size(), config.parallelism, [&](std::size_t i) {
      const auto& input = cases[i];
      if (!input.record) {
        lines[i] = ErrorLine(input.label, input.error);
        return;
      }
      try {
        auto p = extractor->Extract(*input.record, AgentRole::kProsecutor);
        auto d = extractor->Extract(*input.record, AgentRole::kDefense);
        ordered_json j;
        j["case_id"] = input.record->case_id;
        j["prosecutor"] = ArgumentToJson(p);
        j["defense"] = ArgumentToJson(d);
        j["merged"] = MergedToJson(MergeArguments(p, d, kb ? &*kb : nullptr));
        lines[i] = j.dump();
      } catch (const Error& e) {
        lines[i] = ErrorLine(input.label, e.what());
      }
    });
    WriteOutput(config, Lines(lines), out);
    return kExitOk;
  });
}

int CmdPerturb(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    std::vector<CaseRecord> bases;
    for (const auto& j : ReadRecords(config.input_path)) {
      bases.push_back(ParseCase(j, DetectCaseSchema(j)));
    }
    auto specs = LoadSpecs(config.specs_path);
    auto registry = RuleRegistry::Builtin();
    if (!config.rules_path.empty()) {
      registry.LoadComposites(nlohmann::json::parse(ReadFile(config.rules_path)));
    }
    std::set<std::string> unknown;
    for (const auto& spec : specs) {
      for (const auto& rule : spec.rules) {
        auto name = SplitRule(rule).first;
        if (!registry.Find(name)) unknown.insert(name);
      }
    }
    if (!unknown.empty()) {
      err << "error: unknown perturbation rule(s):";
      for (const auto& name : unknown) err << ' ' << name;
      err << '\n';
      return kExitDomain;
    }
    auto pairs = BuildPairCorpus(bases, specs, config.seed, registry, config.parallelism);
    std::string text;
    for (const auto& p : pairs) text += PairToJson(p).dump() + '\n';
    WriteOutput(config, text, out);
    return kExitOk;
  });
}

int CmdEvaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    EvaluationInput input;
    for (const auto& j : ReadRecords(config.input_path)) {
      if (IsPair(j)) {
        input.pairs.push_back(PairFromJson(j));
      } else {
        input.cases.push_back(ParseCase(j, DetectCaseSchema(j)));
      }
    }
    input.predictions = LoadPredictions(config.predictions_path);
    if (!config.clusters_path.empty()) input.clusters = LoadClusters(config.clusters_path);
    input.baseline_group = config.baseline_group;
    auto report = Evaluate(input);
    WriteOutput(config, ReportToJson(report).dump(2) + '\n', out);
    if (!config.tsv_path.empty()) {
      std::ofstream tsv(config.tsv_path, std::ios::binary | std::ios::trunc);
      if (!tsv) throw std::ios_base::failure("cannot write " + config.tsv_path);
      tsv << ReportToTsv(report);
    }
    return kExitOk;
  });
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver-verified statute applicability and perturbation evaluation", "lexcheck"};
  app.require_subcommand(1);
  RunConfig config;
  config.parallelism = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string backend = "deterministic";
  std::string point_policy = "mid";
  std::string candidates = "exhaustive";

  auto existing = CLI::ExistingFile;
  auto add_kb = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--kb", config.kb_path, "Statute knowledge base (rule language)");
    if (required) opt->required();
  };
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", config.output_path, "Output file (default: standard output)");
  };
  auto add_parallel = [&](CLI::App* cmd) {
    cmd->add_option("--parallelism", config.parallelism, "Worker threads")
        ->check(CLI::PositiveNumber);
  };
  auto add_backend = [&](CLI::App* cmd) {
    cmd->add_option("--backend", backend, "Extractor backend")
        ->check(CLI::IsMember({"deterministic", "external"}));
    cmd->add_option("--endpoint", config.extractor.endpoint_url, "External service URL");
    cmd->add_option("--model", config.extractor.model_name, "External model name");
  };

  auto* validate = app.add_subcommand("kb-validate", "Validate a knowledge base");
  add_kb(validate, true);
  validate->add_option("--probes", config.probes_path, "Probe cases (one per line)");
  add_out(validate);

  auto* adjudicate = app.add_subcommand("adjudicate", "Judge cases against a knowledge base");
  add_kb(adjudicate, true);
  adjudicate->add_option("--in", config.input_path, "Cases or perturbation pairs")->required();
  adjudicate->add_option("--probes", config.probes_path, "Probe cases for KB validation");
  adjudicate->add_option("--candidates", candidates, "Candidate articles")
      ->check(CLI::IsMember({"exhaustive", "agents"}));
  adjudicate->add_option("--clusters", config.clusters_path, "Statute clusters for the debate step");
  adjudicate->add_option("--point-policy", point_policy, "Point sentence policy")
      ->check(CLI::IsMember({"min", "mid"}));
  adjudicate->add_flag("--repair", config.repair, "Re-extract facts on conflicting-fact cores");
  add_backend(adjudicate);
  add_out(adjudicate);
  add_parallel(adjudicate);

  auto* extract = app.add_subcommand("extract", "Run the prosecutor and defense extractors");
  add_kb(extract, false);
  extract->add_option("--in", config.input_path, "Cases")->required();
  add_backend(extract);
  add_out(extract);
  add_parallel(extract);

  auto* perturb = app.add_subcommand("perturb", "Build a paired perturbation corpus");
  perturb->add_option("--in", config.input_path, "Base cases")->required();
  perturb->add_option("--specs", config.specs_path, "Perturbation specs")->required();
  perturb->add_option("--rules", config.rules_path, "Composite rule definitions");
  perturb->add_option("--seed", config.seed, "Random seed");
  add_out(perturb);
  add_parallel(perturb);

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  evaluate->add_option("--in", config.input_path, "Perturbation pairs or cases")->required();
  evaluate->add_option("--predictions", config.predictions_path, "Predictions or judgments")
      ->required();
  evaluate->add_option("--clusters", config.clusters_path, "Statute clusters");
  evaluate->add_option("--baseline-group", config.baseline_group,
                       "Category that bias magnitude is measured against");
  evaluate->add_option("--tsv", config.tsv_path, "Also write a flat table");
  add_out(evaluate);

  for (auto* cmd : {validate, adjudicate, extract, perturb, evaluate}) {
    for (auto* opt : cmd->get_options()) {
      const auto& name = opt->get_name();
      if (name == "--kb" || name == "--in" || name == "--probes" || name == "--specs" ||
          name == "--rules" || name == "--predictions" || name == "--clusters") {
        opt->check(existing);
      }
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  config.extractor.backend = *ParseExtractorBackend(backend);
  config.point_policy = *ParsePointPolicy(point_policy);
  config.candidates = candidates == "agents" ? CandidateMode::kAgents : CandidateMode::kExhaustive;
  try {
    CheckExtractorConfig(config.extractor);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (validate->parsed()) return CmdKbValidate(config, out, err);
  if (adjudicate->parsed()) return CmdAdjudicate(config, out, err);
  if (extract->parsed()) return CmdExtract(config, out, err);
  if (perturb->parsed()) return CmdPerturb(config, out, err);
  return CmdEvaluate(config, out, err);
}

}  // namespace lexcheck
