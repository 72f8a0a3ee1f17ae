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

#include "lexcheck/guard.h"

#include <algorithm>
#include <cctype>

namespace lexcheck {
namespace {

bool IsBareIdentifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  static const std::set<std::string> kReserved = {
      "true", "false", "exists", "caused", "in", "act", "result", "Life", "Death"};
  if (kReserved.count(s)) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Precedence: | = 1, & = 2, everything else binds tighter.
int Precedence(const GuardExpr& e) {
  switch (e.kind) {
    case GuardExpr::Kind::kOr:
      return 1;
    case GuardExpr::Kind::kAnd:
      return 2;
    default:
      return 3;
  }
}

void Print(const GuardExpr& e, std::string& out);

void PrintChild(const GuardExpr& child, int parent_prec, std::string& out) {
  if (Precedence(child) <= parent_prec) {
    out += "(";
    Print(child, out);
    out += ")";
  } else {
    Print(child, out);
  }
}

void Print(const GuardExpr& e, std::string& out) {
  using K = GuardExpr::Kind;
  switch (e.kind) {
    case K::kTrue:
      out += "true";
      return;
    case K::kFalse:
      out += "false";
      return;
    case K::kCaused:
      out += "caused";
      return;
    case K::kAtom:
      out += e.atom.ToString();
      return;
    case K::kNot:
      out += "!";
      PrintChild(e.children[0], 2, out);
      return;
    case K::kExists:
      out += e.scope == ExistsScope::kAct ? "exists act (" : "exists result (";
      Print(e.children[0], out);
      out += ")";
      return;
    case K::kAnd:
    case K::kOr: {
      const char* sep = e.kind == K::kAnd ? " & " : " | ";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += sep;
        PrintChild(e.children[i], Precedence(e), out);
      }
      return;
    }
  }
}

template <typename Fn>
void Walk(const GuardExpr& e, bool enter_exists, Fn&& fn) {
  fn(e);
  if (e.kind == GuardExpr::Kind::kExists && !enter_exists) return;
  for (const auto& c : e.children) Walk(c, enter_exists, fn);
}

}  // namespace

std::string_view CompareOpSymbol(CompareOp op) {
  switch (op) {
    case CompareOp::kLt:
      return "<";
    case CompareOp::kLe:
      return "<=";
    case CompareOp::kEq:
      return "==";
    case CompareOp::kGe:
      return ">=";
    case CompareOp::kGt:
      return ">";
  }
  return "==";
}

bool Compare(std::int64_t lhs, CompareOp op, std::int64_t rhs) {
  switch (op) {
    case CompareOp::kLt:
      return lhs < rhs;
    case CompareOp::kLe:
      return lhs <= rhs;
    case CompareOp::kEq:
      return lhs == rhs;
    case CompareOp::kGe:
      return lhs >= rhs;
    case CompareOp::kGt:
      return lhs > rhs;
  }
  return false;
}

std::string ConstantToString(const Constant& c) {
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  if (const auto* n = std::get_if<std::int64_t>(&c)) return std::to_string(*n);
  const auto& s = std::get<std::string>(c);
  return IsBareIdentifier(s) ? s : Quote(s);
}

std::string Atom::ToString() const {
  if (IsBoolean() && std::get<bool>(value)) return predicate;
  return predicate + " " + std::string(CompareOpSymbol(op)) + " " +
         ConstantToString(value);
}

Truth KleeneNot(Truth t) {
  switch (t) {
    case Truth::kTrue:
      return Truth::kFalse;
    case Truth::kFalse:
      return Truth::kTrue;
    default:
      return Truth::kUnknown;
  }
}

Truth KleeneAnd(Truth a, Truth b) {
  if (a == Truth::kFalse || b == Truth::kFalse) return Truth::kFalse;
  if (a == Truth::kTrue && b == Truth::kTrue) return Truth::kTrue;
  return Truth::kUnknown;
}

Truth KleeneOr(Truth a, Truth b) {
  if (a == Truth::kTrue || b == Truth::kTrue) return Truth::kTrue;
  if (a == Truth::kFalse && b == Truth::kFalse) return Truth::kFalse;
  return Truth::kUnknown;
}

std::string_view TruthName(Truth t) {
  switch (t) {
    case Truth::kTrue:
      return "true";
    case Truth::kFalse:
      return "false";
    default:
      return "unknown";
  }
}

GuardExpr GuardExpr::True() { return GuardExpr{}; }

GuardExpr GuardExpr::False() {
  GuardExpr e;
  e.kind = Kind::kFalse;
  return e;
}

GuardExpr GuardExpr::MakeAtom(Atom atom) {
  GuardExpr e;
  e.kind = Kind::kAtom;
  e.atom = std::move(atom);
  return e;
}

namespace {

GuardExpr MakeNary(GuardExpr::Kind kind, std::vector<GuardExpr> children) {
  std::vector<GuardExpr> flat;
  for (auto& c : children) {
    if (c.kind == kind) {
      for (auto& cc : c.children) flat.push_back(std::move(cc));
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) {
    return kind == GuardExpr::Kind::kAnd ? GuardExpr::True() : GuardExpr::False();
  }
  if (flat.size() == 1) return std::move(flat.front());
  GuardExpr e;
  e.kind = kind;
  e.children = std::move(flat);
  return e;
}

}  // namespace

GuardExpr GuardExpr::And(std::vector<GuardExpr> children) {
  return MakeNary(Kind::kAnd, std::move(children));
}

GuardExpr GuardExpr::Or(std::vector<GuardExpr> children) {
  return MakeNary(Kind::kOr, std::move(children));
}

GuardExpr GuardExpr::Not(GuardExpr child) {
  if (child.kind == Kind::kTrue) return False();
  if (child.kind == Kind::kFalse) return True();
  if (child.kind == Kind::kNot) return std::move(child.children[0]);
  GuardExpr e;
  e.kind = Kind::kNot;
  e.children.push_back(std::move(child));
  return e;
}

GuardExpr GuardExpr::Exists(ExistsScope scope, GuardExpr body) {
  GuardExpr e;
  e.kind = Kind::kExists;
  e.scope = scope;
  e.children.push_back(std::move(body));
  return e;
}

GuardExpr GuardExpr::Caused() {
  GuardExpr e;
  e.kind = Kind::kCaused;
  return e;
}

std::string GuardExpr::ToString() const {
  std::string out;
  Print(*this, out);
  return out;
}

int GuardExpr::Depth() const {
  int deepest = 0;
  for (const auto& c : children) deepest = std::max(deepest, c.Depth());
  return deepest + 1;
}

std::vector<Atom> TopLevelAtoms(const GuardExpr& expr) {
  std::vector<Atom> out;
  Walk(expr, false, [&](const GuardExpr& e) {
    if (e.kind == GuardExpr::Kind::kAtom &&
        std::find(out.begin(), out.end(), e.atom) == out.end()) {
      out.push_back(e.atom);
    }
  });
  return out;
}

std::vector<Atom> AllAtoms(const GuardExpr& expr) {
  std::vector<Atom> out;
  Walk(expr, true, [&](const GuardExpr& e) {
    if (e.kind == GuardExpr::Kind::kAtom &&
        std::find(out.begin(), out.end(), e.atom) == out.end()) {
      out.push_back(e.atom);
    }
  });
  return out;
}

std::vector<GuardExpr> TopLevelExistentials(const GuardExpr& expr) {
  std::vector<GuardExpr> out;
  Walk(expr, false, [&](const GuardExpr& e) {
    if (e.kind == GuardExpr::Kind::kExists &&
        std::find(out.begin(), out.end(), e) == out.end()) {
      out.push_back(e);
    }
  });
  return out;
}

std::set<std::string> PredicateNames(const GuardExpr& expr) {
  std::set<std::string> out;
  for (const auto& a : AllAtoms(expr)) out.insert(a.predicate);
  return out;
}

}  // namespace lexcheck
