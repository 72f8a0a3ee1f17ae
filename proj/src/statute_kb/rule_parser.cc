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

// Recursive-descent parser for the rule language. The grammar is described
// in docs/rule_language.md.

#include <cctype>
#include <fstream>
#include <sstream>

#include "lexcheck/errors.h"
#include "lexcheck/statute_kb.h"

namespace lexcheck {
namespace {

enum class Tok { kIdent, kInt, kString, kPunct, kEnd };

struct Token {
  Tok type = Tok::kEnd;
  std::string text;
  std::int64_t number = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    for (;;) {
      SkipSpaceAndComments();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.type = Tok::kIdent;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += Advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.type = Tok::kInt;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          t.text += Advance();
        }
        if (t.text.size() > 15) throw SyntaxError(t.line, t.column, "integer too large");
        t.number = std::stoll(t.text);
      } else if (c == '"') {
        t.type = Tok::kString;
        Advance();
        for (;;) {
          if (pos_ >= src_.size() || src_[pos_] == '\n') {
            throw SyntaxError(t.line, t.column, "unterminated string");
          }
          char d = Advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= src_.size()) throw SyntaxError(line_, col_, "bad escape");
            d = Advance();
          }
          t.text += d;
        }
      } else {
        t.type = Tok::kPunct;
        static const char* kTwo[] = {"==", "!=", "<=", ">="};
        for (const char* two : kTwo) {
          if (src_.substr(pos_, 2) == two) t.text = two;
        }
        if (t.text.empty()) {
          static const std::string kOne = "{}()[],;:=<>&|!";
          if (kOne.find(c) == std::string::npos) {
            throw SyntaxError(t.line, t.column, std::string("unexpected character '") + c + "'");
          }
          t.text = std::string(1, c);
        }
        for (std::size_t i = 0; i < t.text.size(); ++i) Advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char Advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void SkipSpaceAndComments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else if (c == '#' || src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') Advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  StatuteKB Document() {
    StatuteKB kb;
    while (Peek().type != Tok::kEnd) {
      const Token& head = Peek();
      if (IsWord("predicate")) {
        Next();
        PredicateDecl decl = PredicateBody();
        if (kb.predicates.count(decl.name)) {
          throw SyntaxError(head.line, head.column, "predicate declared twice: " + decl.name);
        }
        kb.predicates.emplace(decl.name, std::move(decl));
      } else if (IsWord("extralegal")) {
        Next();
        do {
          kb.extra_legal_names.insert(Ident("attribute name"));
        } while (Accept(","));
        Expect(";");
      } else if (IsWord("exclusive")) {
        Next();
        kb.exclusivity_axioms.push_back(ExclusiveBody());
      } else if (IsWord("article")) {
        Next();
        StatuteArticle art = ArticleBody();
        if (kb.articles.count(art.article_no)) {
          throw DuplicateClauseId("article " + std::to_string(art.article_no) +
                                  " declared twice");
        }
        kb.articles.emplace(art.article_no, std::move(art));
      } else {
        Fail(head, "expected 'predicate', 'extralegal', 'exclusive' or 'article'");
      }
    }
    return kb;
  }

 private:
  const Token& Peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& Next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool IsWord(std::string_view w, std::size_t ahead = 0) const {
    return Peek(ahead).type == Tok::kIdent && Peek(ahead).text == w;
  }
  bool IsPunct(std::string_view p) const {
    return Peek().type == Tok::kPunct && Peek().text == p;
  }
  bool Accept(std::string_view p) {
    if (!IsPunct(p)) return false;
    Next();
    return true;
  }
  [[noreturn]] static void Fail(const Token& t, const std::string& what) {
    std::string got = t.type == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, t.column, what + ", got " + got);
  }
  void Expect(std::string_view p) {
    if (!Accept(p)) Fail(Peek(), "expected '" + std::string(p) + "'");
  }
  void ExpectWord(std::string_view w) {
    if (!IsWord(w)) Fail(Peek(), "expected '" + std::string(w) + "'");
    Next();
  }
  std::string Ident(const std::string& what) {
    if (Peek().type != Tok::kIdent) Fail(Peek(), "expected " + what);
    return Next().text;
  }
  std::int64_t Integer(const std::string& what) {
    if (Peek().type != Tok::kInt) Fail(Peek(), "expected " + what);
    return Next().number;
  }
  std::string Name(const std::string& what) {
    if (Peek().type != Tok::kIdent && Peek().type != Tok::kString) {
      Fail(Peek(), "expected " + what);
    }
    return Next().text;
  }

  Constant Value() {
    const Token& t = Peek();
    if (t.type == Tok::kInt) return Next().number;
    if (t.type == Tok::kString) return Next().text;
    if (t.type == Tok::kIdent) {
      if (t.text == "true") return (Next(), true);
      if (t.text == "false") return (Next(), false);
      return Next().text;
    }
    Fail(t, "expected a value");
  }

  PredicateDecl PredicateBody() {
    PredicateDecl decl;
    decl.name = Ident("predicate name");
    Expect(":");
    const Token& t = Peek();
    if (IsWord("bool")) {
      Next();
      decl.type = ValueType::kBool;
    } else if (IsWord("int")) {
      Next();
      decl.type = ValueType::kInt;
    } else if (IsWord("enum")) {
      Next();
      decl.type = ValueType::kEnum;
      Expect("{");
      do {
        decl.values.push_back(Name("enum value"));
      } while (Accept(","));
      Expect("}");
    } else {
      Fail(t, "expected 'bool', 'int' or 'enum'");
    }
    Expect(";");
    return decl;
  }

  ExclusiveGroup ExclusiveBody() {
    ExclusiveGroup group;
    if (Peek().type == Tok::kIdent) {
      group.label = Next().text;
      Expect("{");
      do {
        group.members.push_back(Atom{group.label, CompareOp::kEq, Name("value")});
      } while (Accept(","));
    } else {
      if (Peek().type == Tok::kString) group.label = Next().text;
      Expect("{");
      do {
        const Token& at = Peek();
        GuardExpr e = AtomExpr();
        if (e.kind != GuardExpr::Kind::kAtom) Fail(at, "expected a positive atom");
        group.members.push_back(e.atom);
      } while (Accept(","));
    }
    Expect("}");
    Expect(";");
    return group;
  }

  StatuteArticle ArticleBody() {
    StatuteArticle art;
    const Token& num = Peek();
    art.article_no = static_cast<ArticleNo>(Integer("article number"));
    if (art.article_no < 1) Fail(num, "article numbers start at 1");
    if (Peek().type == Tok::kString) art.title = Next().text;
    Expect("{");
    bool have_guard = false;
    while (!Accept("}")) {
      const Token& t = Peek();
      if (IsWord("guard")) {
        if (have_guard) Fail(t, "article guard given twice");
        have_guard = true;
        Next();
        Expect(":");
        art.article_guard = Expr();
        Expect(";");
      } else if (IsWord("defaults")) {
        Next();
        Expect("{");
        while (!Accept("}")) {
          std::string pred = Ident("predicate name");
          Expect("=");
          art.field_defaults[pred] = Value();
          Expect(";");
        }
      } else if (IsWord("clause")) {
        Next();
        Clause clause = ClauseBody(art.article_no);
        if (art.FindClause(clause.id.index)) {
          throw DuplicateClauseId("duplicate clause id " + clause.id.ToString());
        }
        art.clauses.push_back(std::move(clause));
      } else {
        Fail(t, "expected 'guard', 'defaults' or 'clause'");
      }
    }
    return art;
  }

  Clause ClauseBody(ArticleNo article) {
    Clause clause;
    clause.id.article = article;
    clause.id.index = static_cast<int>(Integer("clause index"));
    Expect("{");
    bool have_guard = false;
    while (!Accept("}")) {
      const Token& t = Peek();
      if (IsWord("label")) {
        Next();
        Expect(":");
        if (Peek().type != Tok::kString) Fail(Peek(), "expected a quoted label");
        clause.consequence_label = Next().text;
      } else if (IsWord("guard")) {
        if (have_guard) Fail(t, "clause guard given twice");
        have_guard = true;
        Next();
        Expect(":");
        clause.guard = Expr();
      } else if (IsWord("unless")) {
        Next();
        Expect(":");
        clause.exceptions.push_back(Expr());
      } else if (IsWord("penalty")) {
        if (clause.penalty) Fail(t, "penalty given twice");
        Next();
        Expect(":");
        clause.penalty = Interval();
      } else if (IsWord("priority")) {
        Next();
        Expect(":");
        clause.priority = static_cast<int>(Integer("priority"));
      } else if (IsWord("aggravate") || IsWord("mitigate")) {
        AdjustmentDelta adj;
        adj.direction = IsWord("aggravate") ? AdjustDirection::kRaiseLower
                                            : AdjustDirection::kLowerUpper;
        Next();
        adj.name = Ident("adjustment name");
        ExpectWord("delta_months");
        adj.delta_months = Integer("month delta");
        ExpectWord("when");
        adj.trigger = Expr();
        clause.adjustments.push_back(std::move(adj));
      } else {
        Fail(t, "expected a clause item");
      }
      Expect(";");
    }
    return clause;
  }

  PenaltySpec Interval() {
    PenaltySpec p;
    if (Accept("(")) {
      p.lower_strict = true;
    } else {
      Expect("[");
    }
    p.lower_months = Integer("lower bound in months");
    Expect(",");
    if (IsWord("Life")) {
      Next();
      p.upper = SpecialSentence::kLife;
    } else if (IsWord("Death")) {
      Next();
      p.upper = SpecialSentence::kDeath;
    } else {
      p.upper = Integer("upper bound in months, 'Life' or 'Death'");
    }
    if (Accept(")")) {
      p.upper_strict = true;
    } else {
      Expect("]");
    }
    return p;
  }

  GuardExpr Expr() {
    std::vector<GuardExpr> terms{Conj()};
    while (Accept("|")) terms.push_back(Conj());
    return GuardExpr::Or(std::move(terms));
  }

  GuardExpr Conj() {
    std::vector<GuardExpr> terms{Unary()};
    while (Accept("&")) terms.push_back(Unary());
    return GuardExpr::And(std::move(terms));
  }

  GuardExpr Unary() {
    if (Accept("!")) return GuardExpr::Not(Unary());
    return Primary();
  }


  GuardExpr Primary() {
    const Token& t = Peek();
    if (Accept("(")) {
      GuardExpr e = Expr();
      Expect(")");
      return e;
    }
    if (IsWord("true")) return (Next(), GuardExpr::True());
    if (IsWord("false")) return (Next(), GuardExpr::False());
    if (IsWord("caused")) return (Next(), GuardExpr::Caused());
    if (IsWord("exists")) {
      Next();
      ExistsScope scope;
      if (IsWord("act")) {
        scope = ExistsScope::kAct;
      } else if (IsWord("result")) {
        scope = ExistsScope::kResult;
      } else {
        Fail(Peek(), "expected 'act' or 'result'");
      }
      Next();
      Expect("(");
      GuardExpr body = Expr();
      Expect(")");
      return GuardExpr::Exists(scope, std::move(body));
    }
    if (t.type != Tok::kIdent) Fail(t, "expected a condition");
    return AtomExpr();
  }

  GuardExpr AtomExpr() {
    const Token& name_tok = Peek();
    std::string pred = Ident("predicate name");
    static const std::set<std::string> kReserved = {"true", "false", "exists", "caused",
                                                    "in"};
    if (kReserved.count(pred)) Fail(name_tok, "reserved word used as predicate");
    if (IsWord("in")) {
      Next();
      Expect("{");
      std::vector<GuardExpr> alts;
      do {
        alts.push_back(Equality(pred, Value()));
      } while (Accept(","));
      Expect("}");
      return GuardExpr::Or(std::move(alts));
    }
    static const std::pair<const char*, CompareOp> kOps[] = {
        {"==", CompareOp::kEq}, {"=", CompareOp::kEq},  {"<", CompareOp::kLt},
        {"<=", CompareOp::kLe}, {">=", CompareOp::kGe}, {">", CompareOp::kGt}};
    if (Accept("!=")) return GuardExpr::Not(Equality(pred, Value()));
    for (const auto& [sym, op] : kOps) {
      if (!IsPunct(sym)) continue;
      Next();
      const Token& vt = Peek();
      Constant v = Value();
      if (op == CompareOp::kEq) return Equality(pred, v);
      if (!std::holds_alternative<std::int64_t>(v)) {
        Fail(vt, "ordering comparisons need an integer");
      }
      return GuardExpr::MakeAtom(Atom{pred, op, v});
    }
    return GuardExpr::MakeAtom(Atom{pred, CompareOp::kEq, true});
  }

  static GuardExpr Equality(const std::string& pred, const Constant& v) {
    if (const auto* b = std::get_if<bool>(&v)) {
      GuardExpr pos = GuardExpr::MakeAtom(Atom{pred, CompareOp::kEq, true});
      return *b ? pos : GuardExpr::Not(std::move(pos));
    }
    return GuardExpr::MakeAtom(Atom{pred, CompareOp::kEq, v});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string QuoteText(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

bool IsSingleEnumGroup(const ExclusiveGroup& g) {
  if (g.label.empty() || g.members.empty()) return false;
  for (const auto& m : g.members) {
    if (m.predicate != g.label || m.op != CompareOp::kEq ||
        !std::holds_alternative<std::string>(m.value)) {
      return false;
    }
  }
  return true;
}

}  // namespace

StatuteKB ParseKb(std::string_view text) {
  return Parser(Lexer(text).Run()).Document();
}

StatuteKB LoadKbFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseKb(buf.str());
}

std::string SerializeKb(const StatuteKB& kb) {
  std::ostringstream out;
  for (const auto& [name, decl] : kb.predicates) {
    out << "predicate " << name << ": ";
    switch (decl.type) {
      case ValueType::kBool:
        out << "bool";
        break;
      case ValueType::kInt:
        out << "int";
        break;
      case ValueType::kEnum:
        out << "enum {";
        for (std::size_t i = 0; i < decl.values.size(); ++i) {
          out << (i ? ", " : "") << ConstantToString(decl.values[i]);
        }
        out << "}";
        break;
    }
    out << ";\n";
  }
  if (!kb.extra_legal_names.empty()) {
    out << "extralegal ";
    bool first = true;
    for (const auto& n : kb.extra_legal_names) {
      out << (first ? "" : ", ") << n;
      first = false;
    }
    out << ";\n";
  }
  for (const auto& g : kb.exclusivity_axioms) {
    out << "exclusive ";
    if (IsSingleEnumGroup(g)) {
      out << g.label << " {";
      for (std::size_t i = 0; i < g.members.size(); ++i) {
        out << (i ? ", " : "") << ConstantToString(g.members[i].value);
      }
    } else {
      if (!g.label.empty()) out << QuoteText(g.label) << " ";
      out << "{";
      for (std::size_t i = 0; i < g.members.size(); ++i) {
        out << (i ? ", " : "") << g.members[i].ToString();
      }
    }
    out << "};\n";
  }
  for (const auto& [no, art] : kb.articles) {
    out << "\narticle " << no;
    if (!art.title.empty()) out << " " << QuoteText(art.title);
    out << " {\n";
    if (art.article_guard.kind != GuardExpr::Kind::kTrue) {
      out << "  guard: " << art.article_guard.ToString() << ";\n";
    }
    if (!art.field_defaults.empty()) {
      out << "  defaults {";
      for (const auto& [pred, v] : art.field_defaults) {
        out << " " << pred << " = " << ConstantToString(v) << ";";
      }
      out << " }\n";
    }
    for (const auto& c : art.clauses) {
      out << "  clause " << c.id.index << " {\n";
      if (!c.consequence_label.empty()) {
        out << "    label: " << QuoteText(c.consequence_label) << ";\n";
      }
      if (c.guard.kind != GuardExpr::Kind::kTrue) {
        out << "    guard: " << c.guard.ToString() << ";\n";
      }
      for (const auto& x : c.exceptions) out << "    unless: " << x.ToString() << ";\n";
      if (c.penalty) out << "    penalty: " << c.penalty->ToString() << ";\n";
      for (const auto& a : c.adjustments) {
        out << "    "
            << (a.direction == AdjustDirection::kRaiseLower ? "aggravate " : "mitigate ")
            << a.name << " delta_months " << a.delta_months << " when "
            << a.trigger.ToString() << ";\n";
      }
      if (c.priority) out << "    priority: " << *c.priority << ";\n";
      out << "  }\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace lexcheck
