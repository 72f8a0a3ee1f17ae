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

#include "lexcheck/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lexcheck/errors.h"

namespace lexcheck {
namespace {

using nlohmann::ordered_json;

ArticleSet Union(const ArticleSet& a, const ArticleSet& b) {
  ArticleSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

std::int64_t Overlap(const ArticleSet& a, const ArticleSet& b) {
  return std::count_if(a.begin(), a.end(), [&](ArticleNo x) { return b.count(x) > 0; });
}

ArticleSet Restrict(const ArticleSet& s, const ArticleSet& to) {
  ArticleSet out;
  for (auto a : s) {
    if (to.count(a)) out.insert(a);
  }
  return out;
}

double SetF1(const ArticleSet& pred, const ArticleSet& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  auto tp = static_cast<double>(Overlap(pred, gold));
  return 2 * tp / static_cast<double>(pred.size() + gold.size());
}

ArticleSet ArticlesFrom(const nlohmann::json& j, const char* field) {
  ArticleSet out;
  if (!j.contains(field)) return out;
  if (!j[field].is_array()) throw SchemaError(field, "expected a list of article numbers");
  for (const auto& a : j[field]) {
    if (!a.is_number_integer()) throw ValueError(std::string(field) + ": non-integer article");
    out.insert(a.get<ArticleNo>());
  }
  return out;
}

NamedMetric Rate(std::string name, const Ratio& r) {
  return {std::move(name), r.value(), static_cast<double>(r.numerator), r.denominator};
}

NamedMetric Value(std::string name, std::optional<double> v) {
  return {std::move(name), v, std::nullopt, std::nullopt};
}

NamedMetric Mean(std::string name, double sum, std::int64_t n) {
  std::optional<double> v;
  if (n > 0) v = sum / static_cast<double>(n);
  return {std::move(name), v, sum, n};
}

void AddPRF1(std::vector<NamedMetric>& out, const std::string& prefix, const PRF1& m) {
  out.push_back({prefix + "precision", m.precision(), static_cast<double>(m.tp), m.tp + m.fp});
  out.push_back({prefix + "recall", m.recall(), static_cast<double>(m.tp), m.tp + m.fn});
  out.push_back(Value(prefix + "f1", m.f1()));
}

void AddCluster(std::vector<NamedMetric>& out, const ClusterMetrics& m) {
  out.push_back(Rate("positive_exactness", m.positive_exactness));
  out.push_back(Value("macro_exactness", m.macro_exactness));
  out.push_back(Rate("gold_omission", m.gold_omission));
  out.push_back(Rate("wrong_similar_selection", m.wrong_similar_selection));
  out.push_back(Rate("false_activation", m.false_activation));
}

}  // namespace

ArticleSet PredictionRecord::Statutes() const { return Union(predicted_general, predicted_specific); }

ordered_json PredictionToJson(const PredictionRecord& p) {
  ordered_json j;
  j["case_id"] = p.case_id;
  j["predicted_general"] = p.predicted_general;
  j["predicted_specific"] = p.predicted_specific;
  j["predicted_sentence_months"] =
      p.predicted_sentence_months ? ordered_json(*p.predicted_sentence_months) : ordered_json(nullptr);
  j["valid"] = p.valid;
  j["paired_with"] = p.paired_with ? ordered_json(*p.paired_with) : ordered_json(nullptr);
  return j;
}

PredictionRecord PredictionFromJson(const nlohmann::json& j) {
  PredictionRecord p;
  if (!j.contains("case_id") || !j["case_id"].is_string()) throw SchemaError("case_id", "missing");
  p.case_id = j["case_id"].get<std::string>();
  p.predicted_general = ArticlesFrom(j, "predicted_general");
  p.predicted_specific = ArticlesFrom(j, "predicted_specific");
  if (j.contains("predicted_sentence_months") && !j["predicted_sentence_months"].is_null()) {
    const auto& m = j["predicted_sentence_months"];
    if (!m.is_number_integer() || m.get<std::int64_t>() < 0) {
      throw ValueError("predicted_sentence_months must be a non-negative integer");
    }
    p.predicted_sentence_months = m.get<std::int64_t>();
  }
  p.valid = j.value("valid", false);
  if (j.contains("paired_with") && j["paired_with"].is_string()) {
    p.paired_with = j["paired_with"].get<std::string>();
  }
  return p;
}

PredictionRecord PredictionFromJudgment(const Judgment& judgment) {
  PredictionRecord p;
  p.case_id = judgment.case_id;
  p.predicted_general = judgment.general_articles;
  p.predicted_specific = judgment.specific_articles;
  p.predicted_sentence_months = judgment.point_sentence_months;
  p.valid = judgment.valid;
  return p;
}

void AddPrediction(PredictionTable& table, const PredictionRecord& p) {
  auto [it, fresh] = table.try_emplace(p.case_id, p);
  if (fresh) return;
  auto& merged = it->second;
  merged.predicted_general.insert(p.predicted_general.begin(), p.predicted_general.end());
  merged.predicted_specific.insert(p.predicted_specific.begin(), p.predicted_specific.end());
  if (!merged.predicted_sentence_months) merged.predicted_sentence_months = p.predicted_sentence_months;
  merged.valid = merged.valid && p.valid;
  if (!merged.paired_with) merged.paired_with = p.paired_with;
}

PredictionTable LoadPredictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  PredictionTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line);
    // Judgment records carry general_articles/specific_articles instead.
    if (!j.contains("predicted_general") && j.contains("general_articles")) {
      j["predicted_general"] = j["general_articles"];
      j["predicted_specific"] = j["specific_articles"];
      j["predicted_sentence_months"] = j["point_sentence_months"];
    }
    AddPrediction(table, PredictionFromJson(j));
  }
  return table;
}

std::optional<double> Ratio::value() const {
  if (denominator == 0) return std::nullopt;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

Ratio Invariance(const std::vector<SetPair>& pairs) {
  if (pairs.empty()) throw EmptyInput("invariance");
  Ratio r{0, static_cast<std::int64_t>(pairs.size())};
  for (const auto& p : pairs) r.numerator += p.first == p.second;
  return r;
}

Ratio ChangeAlignment(const std::vector<SetPair>& pairs) {
  if (pairs.empty()) throw EmptyInput("change_alignment");
  Ratio r{0, static_cast<std::int64_t>(pairs.size())};
  for (const auto& p : pairs) r.numerator += p.first != p.second;
  return r;
}

Ratio StatuteCorrectness(const std::vector<SetPair>& pairs) {
  if (pairs.empty()) throw EmptyInput("statute_correctness");
  Ratio r{0, static_cast<std::int64_t>(pairs.size())};
  for (const auto& p : pairs) r.numerator += p.first == p.second;
  return r;
}

std::optional<double> PRF1::precision() const { return Ratio{tp, tp + fp}.value(); }
std::optional<double> PRF1::recall() const { return Ratio{tp, tp + fn}.value(); }

std::optional<double> PRF1::f1() const {
  auto p = precision();
  auto r = recall();
  if (!r) return std::nullopt;
  if (!p || *p + *r == 0) return 0.0;
  return 2 * *p * *r / (*p + *r);
}

PRF1 ProvisionPRF1(const std::vector<SetPair>& pairs) {
  if (pairs.empty()) throw EmptyInput("provision_prf1");
  PRF1 m;
  for (const auto& [pred, gold] : pairs) {
    auto tp = Overlap(pred, gold);
    m.tp += tp;
    m.fp += static_cast<std::int64_t>(pred.size()) - tp;
    m.fn += static_cast<std::int64_t>(gold.size()) - tp;
  }
  return m;
}

AttackMetrics ComputeAttackMetrics(const std::vector<AttackCase>& cases) {
  if (cases.empty()) throw EmptyInput("attack_metrics");
  AttackMetrics m;
  const auto n = static_cast<std::int64_t>(cases.size());
  m.crr.denominator = n;
  m.invariance.denominator = n;
  std::vector<SetPair> attacked;
  for (const auto& c : cases) {
    bool clean_ok = c.clean_prediction == c.gold;
    bool attacked_ok = c.attacked_prediction == c.gold;
    if (clean_ok) {
      ++m.asr.denominator;
      m.asr.numerator += !attacked_ok;
      m.crr.numerator += attacked_ok;
    }
    m.invariance.numerator += c.clean_prediction == c.attacked_prediction;
    attacked.push_back({c.attacked_prediction, c.gold});
  }
  m.prf1 = ProvisionPRF1(attacked);
  return m;
}

double BiasMagnitude(const std::map<std::string, GroupScore>& groups,
                     const std::string& baseline_group) {
  auto base = groups.find(baseline_group);
  if (base == groups.end()) throw MissingBaseline(baseline_group);
  double total = 0;
  for (const auto& [name, g] : groups) {
    if (name != baseline_group) total += g.weight;
  }
  if (total == 0) return 0;
  double out = 0;
  for (const auto& [name, g] : groups) {
    if (name == baseline_group) continue;
    out += g.weight / total * std::abs(g.score - base->second.score);
  }
  return out;
}

SentencingMetrics ComputeSentencingMetrics(const std::vector<SentenceCase>& cases) {
  if (cases.empty()) throw EmptyInput("sentencing_metrics");
  SentencingMetrics m;
  m.valid_ratio.denominator = static_cast<std::int64_t>(cases.size());
  for (const auto& c : cases) {
    m.valid_ratio.numerator += c.valid;
    const auto* months = c.gold ? std::get_if<std::int64_t>(&*c.gold) : nullptr;
    if (!months || !c.predicted_months) {
      ++m.excluded;
      continue;
    }
    double err = static_cast<double>(*c.predicted_months - *months);
    m.squared_error_sum += err * err;
    ++m.scored;
  }
  if (m.scored > 0) m.rmse_months = std::sqrt(m.squared_error_sum / static_cast<double>(m.scored));
  return m;
}

ClusterMetrics ComputeClusterMetrics(const std::vector<SetPair>& pairs,
                                     const ClusterTable& clusters) {
  if (pairs.empty()) throw EmptyInput("cluster_metrics");
  ClusterMetrics m;
  double macro_sum = 0;
  int macro_n = 0;
  for (const auto& cluster : clusters) {
    ClusterBreakdown b{cluster.name, {}, {}, {}, {}};
    for (const auto& [pred, gold] : pairs) {
      ArticleSet p = Restrict(pred, cluster.articles);
      ArticleSet g = Restrict(gold, cluster.articles);
      if (g.empty()) {
        ++b.false_activation.denominator;
        b.false_activation.numerator += !p.empty();
        continue;
      }
      ++b.exactness.denominator;
      ++b.omission.denominator;
      ++b.wrong_selection.denominator;
      b.exactness.numerator += p == g;
      b.omission.numerator += Overlap(p, g) < static_cast<std::int64_t>(g.size());
      b.wrong_selection.numerator += Overlap(p, g) < static_cast<std::int64_t>(p.size());
    }
    auto add = [](Ratio& into, const Ratio& from) {
      into.numerator += from.numerator;
      into.denominator += from.denominator;
    };
    add(m.positive_exactness, b.exactness);
    add(m.gold_omission, b.omission);
    add(m.wrong_similar_selection, b.wrong_selection);
    add(m.false_activation, b.false_activation);
    if (auto v = b.exactness.value()) {
      macro_sum += *v;
      ++macro_n;
    }
    m.per_cluster.push_back(std::move(b));
  }
  if (macro_n > 0) m.macro_exactness = macro_sum / macro_n;
  return m;
}

double CaseMatchScore(const PredictionRecord& prediction, const CaseRecord& gold) {
  return (SetF1(prediction.predicted_general, gold.gold_general_articles) +
          SetF1(prediction.predicted_specific, gold.gold_specific_articles)) /
         2;
}

const std::vector<std::string>& FamilyMetrics(PerturbationFamily family) {
  static const std::vector<std::string> kFairness = {"invariance", "bias_magnitude"};
  static const std::vector<std::string> kSurface = {"overall_score", "invariance", "bias_magnitude"};
  static const std::vector<std::string> kAttack = {"asr", "crr", "invariance", "attack_f1"};
  static const std::vector<std::string> kShouldChange = {"overall_score", "change_alignment",
                                                         "statute_correctness", "bias_magnitude"};
  static const std::vector<std::string> kConfusion = {"positive_exactness", "macro_exactness",
                                                      "gold_omission", "wrong_similar_selection"};
  switch (family) {
    case PerturbationFamily::kJudicialFairness:
      return kFairness;
    case PerturbationFamily::kBenignRobustness:
    case PerturbationFamily::kMinorPremise:
      return kSurface;
    case PerturbationFamily::kMajorPremise:
    case PerturbationFamily::kConclusionLevel:
      return kAttack;
    case PerturbationFamily::kStatutoryElement:
    case PerturbationFamily::kMentalState:
    case PerturbationFamily::kExceptionCondition:
      return kShouldChange;
    case PerturbationFamily::kStatuteConfusion:
      return kConfusion;
  }
  return kFairness;
}

namespace {

struct ScoredPair {
  const PerturbationPair* pair;
  const PredictionRecord* base;
  const PredictionRecord* perturbed;
};

// Metrics over one slice of the pair corpus. Every metric that has inputs is
// computed; `only`, when set, restricts the output to those names.
std::vector<NamedMetric> PairMetrics(const std::vector<ScoredPair>& slice,
                                     const ClusterTable& clusters,
                                     const std::vector<std::string>* only,
                                     std::optional<double> bias) {
  std::vector<NamedMetric> out;
  auto wanted = [&](std::string_view name) {
    return !only || std::find(only->begin(), only->end(), name) != only->end();
  };
  double score_sum = 0;
  double general_sum = 0;
  double specific_sum = 0;
  Ratio changed{0, static_cast<std::int64_t>(slice.size())};
  std::vector<SetPair> preserving;
  std::vector<SetPair> changing;
  std::vector<SetPair> corrected;
  std::vector<SetPair> perturbed_vs_gold;
  std::vector<AttackCase> attacks;
  for (const auto& s : slice) {
    const auto& gold = s.pair->perturbed_case;
    score_sum += CaseMatchScore(*s.perturbed, gold);
    general_sum += SetF1(s.perturbed->predicted_general, gold.gold_general_articles);
    specific_sum += SetF1(s.perturbed->predicted_specific, gold.gold_specific_articles);
    SetPair before_after{s.base->Statutes(), s.perturbed->Statutes()};
    changed.numerator += before_after.first != before_after.second;
    (s.pair->changed_label ? changing : preserving).push_back(before_after);
    if (s.pair->changed_label) corrected.push_back({s.perturbed->Statutes(), gold.GoldStatutes()});
    perturbed_vs_gold.push_back({s.perturbed->Statutes(), gold.GoldStatutes()});
    if (s.pair->attack_template) {
      attacks.push_back({s.base->Statutes(), s.perturbed->Statutes(), gold.GoldStatutes()});
    }
  }
  const auto n = static_cast<std::int64_t>(slice.size());
  if (wanted("overall_score")) out.push_back(Mean("overall_score", score_sum, n));
  if (!only) {
    out.push_back(Mean("general_score", general_sum, n));
    out.push_back(Mean("specific_score", specific_sum, n));
    out.push_back(Rate("changed", changed));
  }
  if (wanted("invariance") && !preserving.empty()) {
    out.push_back(Rate("invariance", Invariance(preserving)));
  }
  if (wanted("change_alignment") && !changing.empty()) {
    out.push_back(Rate("change_alignment", ChangeAlignment(changing)));
  }
  if (wanted("statute_correctness") && !corrected.empty()) {
    out.push_back(Rate("statute_correctness", StatuteCorrectness(corrected)));
  }
  if (!attacks.empty() && (wanted("asr") || wanted("crr") || wanted("attack_f1"))) {
    auto a = ComputeAttackMetrics(attacks);
    Ratio clean_acc{a.asr.denominator, static_cast<std::int64_t>(attacks.size())};
    Ratio attack_acc{0, static_cast<std::int64_t>(attacks.size())};
    for (const auto& c : attacks) attack_acc.numerator += c.attacked_prediction == c.gold;
    if (!only) {
      out.push_back(Rate("clean_accuracy", clean_acc));
      out.push_back(Rate("attack_accuracy", attack_acc));
    }
    out.push_back(Rate("asr", a.asr));
    out.push_back(Rate("crr", a.crr));
    out.push_back(Rate("attack_invariance", a.invariance));
    AddPRF1(out, "attack_", a.prf1);
  }
  if (wanted("positive_exactness") && !clusters.empty() && !perturbed_vs_gold.empty()) {
    AddCluster(out, ComputeClusterMetrics(perturbed_vs_gold, clusters));
  }
  if (wanted("bias_magnitude") && bias) out.push_back(Value("bias_magnitude", bias));
  return out;
}

}  // namespace

MetricReport Evaluate(const EvaluationInput& input) {
  // Coverage first, so the caller sees every missing id at once.
  std::set<std::string> missing;
  auto need = [&](const std::string& id) {
    if (!input.predictions.count(id)) missing.insert(id);
  };
  for (const auto& p : input.pairs) {
    need(p.base_case.case_id);
    need(p.perturbed_case.case_id);
  }
  for (const auto& c : input.cases) need(c.case_id);
  if (!missing.empty()) throw MissingPredictions({missing.begin(), missing.end()});
  if (input.pairs.empty() && input.cases.empty()) throw EmptyInput("evaluate");

  MetricReport report;
  report.notes["averaging"] = "micro";
  report.notes["changed"] = "union of general and specific sets compared as sets";
  report.notes["overall_score"] = "mean over pairs of the mean general/specific set-F1";
  report.notes["rmse"] = "Life and Death golds excluded and counted";
  report.notes["bias_groups"] = "perturbation categories scored by overall_score, weighted by pair count";

  // Clean cases: explicit inputs plus every distinct base case, by id.
  std::map<std::string, const CaseRecord*> clean;
  for (const auto& c : input.cases) clean.emplace(c.case_id, &c);
  for (const auto& p : input.pairs) clean.emplace(p.base_case.case_id, &p.base_case);
  if (!clean.empty()) {
    MetricGroup g{"clean", "all", 0, {}};
    g.pairs = static_cast<std::int64_t>(clean.size());
    std::vector<SetPair> general;
    std::vector<SetPair> specific;
    std::vector<SetPair> all;
    std::vector<SentenceCase> sentences;
    for (const auto& [id, c] : clean) {
      const auto& pred = input.predictions.at(id);
      general.push_back({pred.predicted_general, c->gold_general_articles});
      specific.push_back({pred.predicted_specific, c->gold_specific_articles});
      all.push_back({pred.Statutes(), c->GoldStatutes()});
      sentences.push_back({pred.predicted_sentence_months, c->gold_sentence, pred.valid});
    }
    AddPRF1(g.metrics, "general_", ProvisionPRF1(general));
    AddPRF1(g.metrics, "specific_", ProvisionPRF1(specific));
    g.metrics.push_back(Rate("exact_match", StatuteCorrectness(all)));
    auto s = ComputeSentencingMetrics(sentences);
    g.metrics.push_back({"rmse_months", s.rmse_months, s.squared_error_sum, s.scored});
    g.metrics.push_back({"sentencing_excluded", static_cast<double>(s.excluded), std::nullopt, std::nullopt});
    g.metrics.push_back(Rate("valid_ratio", s.valid_ratio));
    if (!input.clusters.empty()) {
      auto cm = ComputeClusterMetrics(all, input.clusters);
      AddCluster(g.metrics, cm);
      report.groups.push_back(std::move(g));
      for (const auto& b : cm.per_cluster) {
        if (b.exactness.denominator + b.false_activation.denominator == 0) continue;
        MetricGroup cg{"clean_cluster", b.cluster, b.exactness.denominator, {}};
        cg.metrics.push_back(Rate("exactness", b.exactness));
        cg.metrics.push_back(Rate("omission", b.omission));
        cg.metrics.push_back(Rate("wrong_selection", b.wrong_selection));
        cg.metrics.push_back(Rate("false_activation", b.false_activation));
        report.groups.push_back(std::move(cg));
      }
    } else {
      report.groups.push_back(std::move(g));
    }
  }
  if (input.pairs.empty()) return report;

  // Stable order for floating sums regardless of input order.
  std::vector<ScoredPair> scored;
  for (const auto& p : input.pairs) {
    scored.push_back({&p, &input.predictions.at(p.base_case.case_id),
                      &input.predictions.at(p.perturbed_case.case_id)});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredPair& a, const ScoredPair& b) {
    return a.pair->perturbed_case.case_id < b.pair->perturbed_case.case_id;
  });

  std::map<std::string, std::vector<ScoredPair>> by_category;
  std::map<PerturbationFamily, std::vector<ScoredPair>> by_family;
  std::map<std::string, std::vector<ScoredPair>> by_attack;
  for (const auto& s : scored) {
    for (const auto& c : s.pair->categories) by_category[c].push_back(s);
    by_family[s.pair->family].push_back(s);
    if (s.pair->attack_template) by_attack[std::string(AttackName(*s.pair->attack_template))].push_back(s);
  }

  std::optional<double> bias;
  if (!input.baseline_group.empty()) {
    std::map<std::string, GroupScore> groups;
    for (const auto& [name, slice] : by_category) {
      double sum = 0;
      for (const auto& s : slice) sum += CaseMatchScore(*s.perturbed, s.pair->perturbed_case);
      groups[name] = {sum / static_cast<double>(slice.size()), static_cast<double>(slice.size())};
    }
    bias = BiasMagnitude(groups, input.baseline_group);
    report.notes["baseline_group"] = input.baseline_group;
  }

  report.groups.push_back({"overall", "all", static_cast<std::int64_t>(scored.size()),
                           PairMetrics(scored, input.clusters, nullptr, bias)});
  for (const auto& [family, slice] : by_family) {
    report.groups.push_back({"family", std::string(FamilyName(family)),
                             static_cast<std::int64_t>(slice.size()),
                             PairMetrics(slice, input.clusters, &FamilyMetrics(family), bias)});
  }
  for (const auto& [name, slice] : by_category) {
    report.groups.push_back({"category", name, static_cast<std::int64_t>(slice.size()),
                             PairMetrics(slice, input.clusters, nullptr, std::nullopt)});
  }
  for (const auto& [name, slice] : by_attack) {
    report.groups.push_back({"attack", name, static_cast<std::int64_t>(slice.size()),
                             PairMetrics(slice, {}, nullptr, std::nullopt)});
  }
  return report;
}

ordered_json ReportToJson(const MetricReport& report) {
  ordered_json j;
  j["notes"] = ordered_json::object();
  for (const auto& [k, v] : report.notes) j["notes"][k] = v;
  auto groups = ordered_json::array();
  for (const auto& g : report.groups) {
    ordered_json gj;
    gj["axis"] = g.axis;
    gj["name"] = g.name;
    gj["count"] = g.pairs;
    auto metrics = ordered_json::array();
    for (const auto& m : g.metrics) {
      ordered_json mj;
      mj["metric"] = m.name;
      mj["value"] = m.value ? ordered_json(*m.value) : ordered_json(nullptr);
      if (m.numerator) mj["numerator"] = *m.numerator;
      if (m.denominator) mj["denominator"] = *m.denominator;
      metrics.push_back(std::move(mj));
    }
    gj["metrics"] = std::move(metrics);
    groups.push_back(std::move(gj));
  }
  j["groups"] = std::move(groups);
  return j;
}

std::string ReportToTsv(const MetricReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "axis\tgroup\tcount\tmetric\tvalue\tnumerator\tdenominator\n";
  for (const auto& g : report.groups) {
    for (const auto& m : g.metrics) {
      out << g.axis << '\t' << g.name << '\t' << g.pairs << '\t' << m.name << '\t';
      if (m.value) out << *m.value;
      out << '\t';
      if (m.numerator) out << *m.numerator;
      out << '\t';
      if (m.denominator) out << *m.denominator;
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace lexcheck
