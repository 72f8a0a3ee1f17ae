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

#include "lexcheck/statute_kb.h"

#include <algorithm>
#include <charconv>

#include "lexcheck/errors.h"

namespace lexcheck {

PenaltySpec PenaltySpec::Closed(std::int64_t lower, std::int64_t upper) {
  PenaltySpec p;
  p.lower_months = lower;
  p.upper = upper;
  return p;
}

std::optional<std::int64_t> PenaltySpec::MaxMonths() const {
  if (const auto* n = std::get_if<std::int64_t>(&upper)) {
    return *n - (upper_strict ? 1 : 0);
  }
  return std::nullopt;
}

bool PenaltySpec::IsEmpty() const {
  auto hi = MaxMonths();
  return hi && MinMonths() > *hi;
}

bool PenaltySpec::Contains(std::int64_t months) const {
  if (months < MinMonths()) return false;
  auto hi = MaxMonths();
  return !hi || months <= *hi;
}

std::string PenaltySpec::ToString() const {
  return std::string(lower_strict ? "(" : "[") + std::to_string(lower_months) + ", " +
         SentenceToString(upper) + (upper_strict ? ")" : "]");
}

std::string ClauseId::ToString() const {
  return std::to_string(article) + "." + std::to_string(index);
}

std::optional<ClauseId> ClauseId::Parse(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  ClauseId id;
  auto a = std::from_chars(text.data(), text.data() + dot, id.article);
  auto b = std::from_chars(text.data() + dot + 1, text.data() + text.size(), id.index);
  if (a.ec != std::errc() || a.ptr != text.data() + dot || b.ec != std::errc() ||
      b.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return id;
}

GuardExpr Clause::EffectiveGuard() const {
  std::vector<GuardExpr> parts{guard};
  for (const auto& x : exceptions) parts.push_back(GuardExpr::Not(x));
  return GuardExpr::And(std::move(parts));
}

bool PredicateDecl::Admits(const Constant& value) const {
  switch (type) {
    case ValueType::kBool:
      return std::holds_alternative<bool>(value);
    case ValueType::kInt:
      return std::holds_alternative<std::int64_t>(value);
    case ValueType::kEnum: {
      const auto* s = std::get_if<std::string>(&value);
      return s && std::find(values.begin(), values.end(), *s) != values.end();
    }
  }
  return false;
}

const Clause* StatuteArticle::FindClause(int index) const {
  for (const auto& c : clauses) {
    if (c.id.index == index) return &c;
  }
  return nullptr;
}

const PredicateDecl* StatuteKB::FindPredicate(std::string_view name) const {
  auto it = predicates.find(std::string(name));
  return it == predicates.end() ? nullptr : &it->second;
}

const Clause* StatuteKB::FindClause(const ClauseId& id) const {
  auto it = articles.find(id.article);
  return it == articles.end() ? nullptr : it->second.FindClause(id.index);
}

std::size_t StatuteKB::ClauseCount() const {
  std::size_t n = 0;
  for (const auto& [no, art] : articles) n += art.clauses.size();
  return n;
}

ConstraintSearch SearchConstraints(const ArticleSet& candidates, const StatuteKB& kb) {
  if (!kb.validated()) throw KBNotValidated();
  ConstraintSearch out;
  for (ArticleNo no : candidates) {
    auto it = kb.articles.find(no);
    if (it == kb.articles.end()) {
      out.unknown_articles.push_back(no);
      continue;
    }
    for (const auto& clause : it->second.clauses) {
      out.constraints.push_back({&it->second, &clause});
    }
  }
  return out;
}

}  // namespace lexcheck
