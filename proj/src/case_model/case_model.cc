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

#include "lexcheck/case_model.h"

#include <algorithm>
#include <regex>
#include <sstream>

#include "lexcheck/errors.h"

namespace lexcheck {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::pair<ElementKind, std::string_view> kKindNames[] = {
    {ElementKind::kActor, "Actor"},
    {ElementKind::kVictim, "Victim"},
    {ElementKind::kAct, "Act"},
    {ElementKind::kResult, "Result"},
    {ElementKind::kCauses, "Causes"},
    {ElementKind::kMentalState, "MentalState"},
    {ElementKind::kProtectedInterest, "ProtectedInterest"},
    {ElementKind::kAmount, "Amount"},
    {ElementKind::kSeverity, "Severity"},
    {ElementKind::kQualifier, "Qualifier"},
    {ElementKind::kException, "Exception"},
};

const json& Require(const json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) {
    throw SchemaError(field, "required field is missing");
  }
  return *it;
}

ArticleNo ParseArticle(const json& value) {
  if (value.is_number_integer() || value.is_number_unsigned()) {
    auto n = value.get<std::int64_t>();
    if (n < 1) throw ValueError("article number must be positive: " + value.dump());
    return static_cast<ArticleNo>(n);
  }
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (!s.empty() && std::all_of(s.begin(), s.end(), ::isdigit)) {
      auto n = std::stol(s);
      if (n >= 1) return static_cast<ArticleNo>(n);
    }
  }
  throw ValueError("article is not an integer: " + value.dump());
}

std::vector<ArticleNo> ParseArticleList(const json& value, const char* field) {
  if (!value.is_array()) throw SchemaError(field, "expected a list of articles");
  std::vector<ArticleNo> out;
  for (const auto& v : value) out.push_back(ParseArticle(v));
  return out;
}

std::optional<Sentence> ParseSentenceField(const json& value) {
  if (value.is_null()) return std::nullopt;
  if (value.is_number_integer() || value.is_number_unsigned()) {
    auto n = value.get<std::int64_t>();
    if (n < 0) throw ValueError("negative sentence: " + value.dump());
    return Sentence{n};
  }
  if (value.is_number_float()) {
    throw ValueError("sentence months must be an integer: " + value.dump());
  }
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (s == "Life") return Sentence{SpecialSentence::kLife};
    if (s == "Death") return Sentence{SpecialSentence::kDeath};
  }
  throw ValueError("unrecognised sentence value: " + value.dump());
}

ordered_json SentenceToJson(const std::optional<Sentence>& sentence) {
  if (!sentence) return nullptr;
  if (const auto* months = std::get_if<std::int64_t>(&*sentence)) return *months;
  return SentenceToString(*sentence);
}

ordered_json ArticlesToJson(const ArticleSet& articles) {
  ordered_json out = ordered_json::array();
  for (ArticleNo a : articles) out.push_back(a);
  return out;
}

void ApplySplit(CaseRecord& record, const std::vector<ArticleNo>& articles) {
  ArticleSplit split = SplitArticles(articles);
  record.gold_general_articles = std::move(split.general);
  record.gold_specific_articles = std::move(split.specific);
}

void AppendIfPresent(const json& record, const char* field,
                     std::vector<ArticleNo>& out) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) return;
  auto list = ParseArticleList(*it, field);
  out.insert(out.end(), list.begin(), list.end());
}

std::string StringField(const json& value, const char* field) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number()) return value.dump();
  throw SchemaError(field, "expected a string");
}

// LEEC stores per-suspect maps either as JSON objects or as the flattened
// "{A: [1, 2]; B: [3]}" text seen in the published dumps.
std::vector<std::pair<std::string, std::string>> SplitSuspectMapText(
    std::string text) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!text.empty() && text.front() == '{') text.erase(0, 1);
  if (!text.empty() && text.back() == '}') text.pop_back();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\n");
      auto e = s.find_last_not_of(" \t\n");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    out.emplace_back(trim(item.substr(0, colon)), trim(item.substr(colon + 1)));
  }
  return out;
}

CaseRecord ParseLeCaRD(const json& record) {
  CaseRecord out;
  out.case_id = StringField(Require(record, "filename"), "filename");
  out.narrative = StringField(Require(record, "fact"), "fact");
  std::vector<ArticleNo> articles =
      ParseArticleList(Require(record, "article"), "article");
  AppendIfPresent(record, "true_general_articles", articles);
  AppendIfPresent(record, "true_specific_articles", articles);
  ApplySplit(out, articles);
  if (auto it = record.find("result"); it != record.end() && it->is_string()) {
    out.source_fields["result"] = it->get<std::string>();
  }
  if (auto it = record.find("true_sentence_months"); it != record.end()) {
    out.gold_sentence = ParseSentenceField(*it);
  } else if (out.source_fields.count("result")) {
    out.gold_sentence = ParseSentenceText(out.source_fields["result"]);
  }
  return out;
}

CaseRecord ParseLEEC(const json& record) {
  CaseRecord out;
  out.case_id = StringField(Require(record, "pid"), "pid");
  out.narrative = StringField(Require(record, "fact"), "fact");
  for (const char* field : {"qw", "reason", "result"}) {
    if (auto it = record.find(field); it != record.end() && it->is_string()) {
      out.source_fields[field] = it->get<std::string>();
    }
  }
  const json& article = Require(record, "article");
  std::vector<std::pair<std::string, std::vector<ArticleNo>>> per_suspect;
  if (article.is_object()) {
    for (const auto& [suspect, list] : article.items()) {
      per_suspect.emplace_back(suspect, ParseArticleList(list, "article"));
    }
  } else if (article.is_string()) {
    for (const auto& [suspect, list_text] :
         SplitSuspectMapText(article.get<std::string>())) {
      json list = json::parse(list_text, nullptr, false);
      if (list.is_discarded()) throw ValueError("bad article list: " + list_text);
      per_suspect.emplace_back(suspect, ParseArticleList(list, "article"));
    }
  } else {
    throw SchemaError("article", "expected a per-suspect map");
  }
  std::vector<ArticleNo> all;
  for (auto& [suspect, list] : per_suspect) {
    out.suspect_ids.push_back(suspect);
    ArticleSplit split = SplitArticles(list);
    out.suspect_labels[suspect].general = split.general;
    out.suspect_labels[suspect].specific = split.specific;
    all.insert(all.end(), list.begin(), list.end());
  }
  ApplySplit(out, all);
  if (auto it = record.find("charge"); it != record.end()) {
    if (it->is_object()) {
      for (const auto& [suspect, charge] : it->items()) {
        out.suspect_labels[suspect].charge = StringField(charge, "charge");
      }
    } else if (it->is_string()) {
      for (const auto& [suspect, charge] :
           SplitSuspectMapText(it->get<std::string>())) {
        out.suspect_labels[suspect].charge = charge;
      }
    }
  }
  return out;
}

CaseRecord ParseCanonical(const json& record) {
  CaseRecord out;
  out.case_id = StringField(Require(record, "case_id"), "case_id");
  if (auto it = record.find("fact"); it != record.end() && !it->is_null()) {
    out.narrative = StringField(*it, "fact");
  }
  if (auto it = record.find("suspects"); it != record.end()) {
    if (!it->is_array()) throw SchemaError("suspects", "expected a list");
    for (const auto& s : *it) out.suspect_ids.push_back(StringField(s, "suspects"));
  }
  if (auto it = record.find("structured_facts"); it != record.end()) {
    if (!it->is_array()) throw SchemaError("structured_facts", "expected a list");
    for (const auto& f : *it) out.facts.push_back(FactFromJson(f));
  }
  if (auto it = record.find("extra_legal"); it != record.end()) {
    if (!it->is_array()) throw SchemaError("extra_legal", "expected a list");
    for (const auto& e : *it) {
      out.extra_legal.push_back({StringField(Require(e, "name"), "name"),
                                 StringField(Require(e, "value"), "value")});
    }
  }
  std::vector<ArticleNo> articles;
  AppendIfPresent(record, "article", articles);
  AppendIfPresent(record, "true_general_articles", articles);
  AppendIfPresent(record, "true_specific_articles", articles);
  ApplySplit(out, articles);
  if (auto it = record.find("true_sentence_months"); it != record.end()) {
    out.gold_sentence = ParseSentenceField(*it);
  }
  if (auto it = record.find("suspect_labels"); it != record.end()) {
    if (!it->is_object()) throw SchemaError("suspect_labels", "expected a map");
    for (const auto& [suspect, label] : it->items()) {
      std::vector<ArticleNo> list;
      AppendIfPresent(label, "general", list);
      AppendIfPresent(label, "specific", list);
      ArticleSplit split = SplitArticles(list);
      SuspectLabel& dst = out.suspect_labels[suspect];
      dst.general = split.general;
      dst.specific = split.specific;
      if (auto c = label.find("charge"); c != label.end() && c->is_string()) {
        dst.charge = c->get<std::string>();
      }
    }
  }
  if (auto it = record.find("source_fields"); it != record.end()) {
    if (!it->is_object()) throw SchemaError("source_fields", "expected a map");
    for (const auto& [key, value] : it->items()) {
      out.source_fields[key] = StringField(value, "source_fields");
    }
  }
  return out;
}

}  // namespace

ArticleSplit SplitArticles(const std::vector<ArticleNo>& articles) {
  ArticleSplit out;
  for (ArticleNo a : articles) {
    (IsGeneralArticle(a) ? out.general : out.specific).insert(a);
  }
  return out;
}

std::string_view ElementKindName(ElementKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Qualifier";
}

std::optional<ElementKind> ParseElementKind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string FactValueToString(const FactValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return "(" + v.first + ", " + v.second + ")";
        }
      },
      value);
}

std::string SentenceToString(const Sentence& sentence) {
  if (const auto* months = std::get_if<std::int64_t>(&sentence)) {
    return std::to_string(*months);
  }
  return std::get<SpecialSentence>(sentence) == SpecialSentence::kLife ? "Life"
                                                                       : "Death";
}

ArticleSet CaseRecord::GoldStatutes() const {
  ArticleSet out = gold_general_articles;
  out.insert(gold_specific_articles.begin(), gold_specific_articles.end());
  return out;
}

std::string_view CaseSchemaName(CaseSchema schema) {
  switch (schema) {
    case CaseSchema::kLeCaRDv2:
      return "lecardv2";
    case CaseSchema::kLEEC:
      return "leec";
    case CaseSchema::kPerturbation:
      return "perturbation";
  }
  return "perturbation";
}

CaseSchema DetectCaseSchema(const json& record) {
  if (record.contains("case_id")) return CaseSchema::kPerturbation;
  if (record.contains("pid")) return CaseSchema::kLEEC;
  return CaseSchema::kLeCaRDv2;
}

ordered_json FactToJson(const FactAtom& fact) {
  ordered_json out;
  out["kind"] = ElementKindName(fact.kind);
  out["subject"] = fact.subject_id;
  out["predicate"] = fact.predicate;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IdPair>) {
          out["value"] = ordered_json::array({v.first, v.second});
        } else {
          out["value"] = v;
        }
      },
      fact.value);
  if (fact.span) out["span"] = ordered_json::array({fact.span->begin, fact.span->end});
  return out;
}

FactAtom FactFromJson(const json& j) {
  if (!j.is_object()) throw SchemaError("structured_facts", "fact must be an object");
  FactAtom fact;
  const std::string kind = StringField(Require(j, "kind"), "kind");
  auto parsed = ParseElementKind(kind);
  if (!parsed) throw ValueError("unknown element kind: " + kind);
  fact.kind = *parsed;
  fact.subject_id = StringField(Require(j, "subject"), "subject");
  fact.predicate = StringField(Require(j, "predicate"), "predicate");
  const json& v = Require(j, "value");
  if (v.is_boolean()) {
    fact.value = v.get<bool>();
  } else if (v.is_number_integer() || v.is_number_unsigned()) {
    fact.value = v.get<std::int64_t>();
  } else if (v.is_string()) {
    fact.value = v.get<std::string>();
  } else if (v.is_array() && v.size() == 2 && v[0].is_string() && v[1].is_string()) {
    fact.value = IdPair{v[0].get<std::string>(), v[1].get<std::string>()};
  } else {
    throw ValueError("unsupported fact value: " + v.dump());
  }
  if (auto it = j.find("span"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2) throw SchemaError("span", "expected [begin, end]");
    fact.span = SourceSpan{(*it)[0].get<std::size_t>(), (*it)[1].get<std::size_t>()};
  }
  return fact;
}

CaseRecord ParseCase(const json& record, CaseSchema schema) {
  if (!record.is_object()) throw SchemaError("<record>", "expected an object");
  switch (schema) {
    case CaseSchema::kLeCaRDv2:
      return ParseLeCaRD(record);
    case CaseSchema::kLEEC:
      return ParseLEEC(record);
    case CaseSchema::kPerturbation:
      return ParseCanonical(record);
  }
  throw SchemaError("<record>", "unknown schema");
}

ordered_json SerializeCase(const CaseRecord& record, CaseSchema schema) {
  ordered_json out;
  ArticleSet all = record.GoldStatutes();
  switch (schema) {
    case CaseSchema::kLeCaRDv2: {
      out["filename"] = record.case_id;
      out["fact"] = record.narrative;
      out["article"] = ArticlesToJson(all);
      if (auto it = record.source_fields.find("result");
          it != record.source_fields.end()) {
        out["result"] = it->second;
      }
      out["true_sentence_months"] = SentenceToJson(record.gold_sentence);
      out["true_general_articles"] = ArticlesToJson(record.gold_general_articles);
      out["true_specific_articles"] = ArticlesToJson(record.gold_specific_articles);
      break;
    }
    case CaseSchema::kLEEC: {
      const bool numeric = !record.case_id.empty() &&
                           std::all_of(record.case_id.begin(),
                                       record.case_id.end(), ::isdigit);
      if (numeric) {
        out["pid"] = std::stoll(record.case_id);
      } else {
        out["pid"] = record.case_id;
      }
      for (const char* field : {"qw"}) {
        if (auto it = record.source_fields.find(field);
            it != record.source_fields.end()) {
          out[field] = it->second;
        }
      }
      out["fact"] = record.narrative;
      for (const char* field : {"reason", "result"}) {
        if (auto it = record.source_fields.find(field);
            it != record.source_fields.end()) {
          out[field] = it->second;
        }
      }
      ordered_json charge = ordered_json::object();
      ordered_json article = ordered_json::object();
      for (const auto& suspect : record.suspect_ids) {
        auto it = record.suspect_labels.find(suspect);
        SuspectLabel label = it == record.suspect_labels.end() ? SuspectLabel{} : it->second;
        if (!label.charge.empty()) charge[suspect] = label.charge;
        ArticleSet both = label.general;
        both.insert(label.specific.begin(), label.specific.end());
        article[suspect] = ArticlesToJson(both);
      }
      out["charge"] = charge;
      out["article"] = article;
      break;
    }
    case CaseSchema::kPerturbation: {
      out["case_id"] = record.case_id;
      out["suspects"] = record.suspect_ids;
      out["fact"] = record.narrative;
      ordered_json facts = ordered_json::array();
      for (const auto& f : record.facts) facts.push_back(FactToJson(f));
      out["structured_facts"] = std::move(facts);
      ordered_json extra = ordered_json::array();
      for (const auto& e : record.extra_legal) {
        extra.push_back(ordered_json{{"name", e.name}, {"value", e.value}});
      }
      out["extra_legal"] = std::move(extra);
      out["article"] = ArticlesToJson(all);
      out["true_general_articles"] = ArticlesToJson(record.gold_general_articles);
      out["true_specific_articles"] = ArticlesToJson(record.gold_specific_articles);
      out["true_sentence_months"] = SentenceToJson(record.gold_sentence);
      if (!record.suspect_labels.empty()) {
        ordered_json labels = ordered_json::object();
        for (const auto& [suspect, label] : record.suspect_labels) {
          ordered_json l;
          l["general"] = ArticlesToJson(label.general);
          l["specific"] = ArticlesToJson(label.specific);
          if (!label.charge.empty()) l["charge"] = label.charge;
          labels[suspect] = std::move(l);
        }
        out["suspect_labels"] = std::move(labels);
      }
      if (!record.source_fields.empty()) out["source_fields"] = record.source_fields;
      break;
    }
  }
  return out;
}

bool ExtraLegalEquivalent(const CaseRecord& a, const CaseRecord& b) {
  return a.suspect_ids == b.suspect_ids && a.facts == b.facts &&
         a.gold_general_articles == b.gold_general_articles &&
         a.gold_specific_articles == b.gold_specific_articles &&
         a.gold_sentence == b.gold_sentence &&
         a.suspect_labels == b.suspect_labels;
}

std::vector<std::string> ValidateCase(const CaseRecord& record) {
  std::vector<std::string> out;
  if (record.case_id.empty()) out.push_back("case_id: must be nonempty");
  for (ArticleNo a : record.gold_general_articles) {
    if (record.gold_specific_articles.count(a)) {
      out.push_back("general/specific overlap: " + std::to_string(a));
    }
  }
  std::set<std::string> suspects(record.suspect_ids.begin(),
                                 record.suspect_ids.end());
  if (suspects.size() != record.suspect_ids.size()) {
    out.push_back("suspects: duplicate suspect id");
  }
  if (record.gold_sentence) {
    if (const auto* m = std::get_if<std::int64_t>(&*record.gold_sentence); m && *m < 0) {
      out.push_back("true_sentence_months: negative sentence");
    }
  }

  std::set<std::string> declared = suspects;
  std::set<std::string> acts;
  std::set<std::string> results;
  for (const auto& f : record.facts) {
    if (f.kind == ElementKind::kVictim) declared.insert(f.subject_id);
    if (f.kind == ElementKind::kResult) {
      declared.insert(f.subject_id);
      results.insert(f.subject_id);
    }
    if (f.kind == ElementKind::kAct) {
      if (const auto* p = std::get_if<IdPair>(&f.value)) {
        declared.insert(p->first);
        acts.insert(p->first);
      }
    }
  }

  for (std::size_t i = 0; i < record.facts.size(); ++i) {
    const FactAtom& f = record.facts[i];
    const std::string where = "facts[" + std::to_string(i) + "]";
    if (!declared.count(f.subject_id)) {
      out.push_back("undeclared subject: " + where + " (" + f.subject_id + ")");
    }
    switch (f.kind) {
      case ElementKind::kAmount: {
        const auto* n = std::get_if<std::int64_t>(&f.value);
        if (!n || *n < 0) {
          out.push_back("amount must be a non-negative integer: " + where);
        }
        break;
      }
      case ElementKind::kSeverity: {
        const auto* s = std::get_if<std::string>(&f.value);
        if (!s || std::find(std::begin(kSeverityValues), std::end(kSeverityValues),
                            *s) == std::end(kSeverityValues)) {
          out.push_back("severity out of domain: " + where);
        }
        break;
      }
      case ElementKind::kMentalState: {
        const auto* s = std::get_if<std::string>(&f.value);
        if (!s || std::find(std::begin(kMentalStateValues),
                            std::end(kMentalStateValues),
                            *s) == std::end(kMentalStateValues)) {
          out.push_back("mental state out of domain: " + where);
        }
        break;
      }
      case ElementKind::kCauses: {
        const auto* p = std::get_if<IdPair>(&f.value);
        if (!p || !acts.count(p->first) || !results.count(p->second)) {
          std::string detail = p ? " (" + p->first + " -> " + p->second + ")" : "";
          out.push_back("dangling causation reference: " + where + detail);
        }
        break;
      }
      default:
        break;
    }
  }
  std::set<std::string> names;
  for (const auto& e : record.extra_legal) names.insert(e.name);
  for (std::size_t i = 0; i < record.facts.size(); ++i) {
    if (names.count(record.facts[i].predicate)) {
      out.push_back("extra-legal attribute used as fact predicate: facts[" +
                    std::to_string(i) + "] (" + record.facts[i].predicate + ")");
    }
  }
  return out;
}

namespace {

// Chinese numerals up to 99, plus ASCII digits.
std::optional<std::int64_t> ParseChineseNumber(std::string_view text) {
  static const std::pair<std::string_view, int> kDigits[] = {
      {"零", 0}, {"一", 1}, {"二", 2}, {"两", 2}, {"三", 3}, {"四", 4},
      {"五", 5}, {"六", 6}, {"七", 7}, {"八", 8}, {"九", 9}};
  if (!text.empty() && std::all_of(text.begin(), text.end(), ::isdigit)) {
    return std::stoll(std::string(text));
  }
  std::int64_t total = 0;
  std::int64_t pending = -1;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.substr(i, 3) == "十") {
      total += (pending < 0 ? 1 : pending) * 10;
      pending = -1;
      i += 3;
      continue;
    }
    bool matched = false;
    for (const auto& [glyph, value] : kDigits) {
      if (text.substr(i, glyph.size()) == glyph) {
        pending = value;
        i += glyph.size();
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }
  if (pending >= 0) total += pending;
  return total;
}

}  // namespace

std::optional<Sentence> ParseSentenceText(std::string_view text) {
  const std::string s(text);
  struct Hit {
    std::size_t pos;
    Sentence sentence;
  };
  std::optional<Hit> best;
  auto offer = [&](std::size_t pos, Sentence sentence) {
    if (!best || pos < best->pos) best = Hit{pos, sentence};
  };

  static const std::regex kLife(R"(life imprisonment|无期徒刑)", std::regex::icase);
  static const std::regex kDeath(R"(death penalty|sentenced to death|死刑)",
                                 std::regex::icase);
  static const std::regex kEnglish(
      R"((\d+)\s*years?(?:\s*(?:and\s*)?(\d+)\s*months?)?|(\d+)\s*months?)",
      std::regex::icase);
  static const std::string kNum = "((?:零|一|二|两|三|四|五|六|七|八|九|十|[0-9])+)";
  static const std::regex kChinese("(?:有期徒刑|拘役|管制)" + kNum + "(年|个月)(?:" +
                                   kNum + "个月)?");
  std::smatch m;
  if (std::regex_search(s, m, kLife)) {
    offer(m.position(0), SpecialSentence::kLife);
  }
  if (std::regex_search(s, m, kDeath)) {
    offer(m.position(0), SpecialSentence::kDeath);
  }
  if (std::regex_search(s, m, kEnglish)) {
    std::int64_t months = 0;
    if (m[1].matched) {
      months = std::stoll(m[1].str()) * 12;
      if (m[2].matched) months += std::stoll(m[2].str());
    } else {
      months = std::stoll(m[3].str());
    }
    offer(m.position(0), months);
  }
  if (std::regex_search(s, m, kChinese)) {
    auto first = ParseChineseNumber(m[1].str());
    if (first) {
      std::int64_t months = m[2].str() == "年" ? *first * 12 : *first;
      if (m[3].matched) {
        if (auto extra = ParseChineseNumber(m[3].str())) months += *extra;
      }
      offer(m.position(0), months);
    }
  }
  if (!best) return std::nullopt;
  return best->sentence;
}

std::vector<FactAtom> FactsForSuspect(const CaseRecord& record, std::string_view suspect) {
  if (suspect.empty()) return record.facts;
  std::set<std::string> others;
  for (const auto& s : record.suspect_ids) {
    if (s != suspect) others.insert(s);
  }
  std::set<std::string> other_acts;
  for (const auto& f : record.facts) {
    if (f.kind != ElementKind::kAct || !others.count(f.subject_id)) continue;
    if (const auto* p = std::get_if<IdPair>(&f.value)) other_acts.insert(p->first);
  }
  std::vector<FactAtom> out;
  for (const auto& f : record.facts) {
    if (others.count(f.subject_id) || other_acts.count(f.subject_id)) continue;
    if (f.kind == ElementKind::kCauses) {
      if (const auto* p = std::get_if<IdPair>(&f.value); p && other_acts.count(p->first)) continue;
    }
    out.push_back(f);
  }
  return out;
}

}  // namespace lexcheck
