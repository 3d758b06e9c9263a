// Copyright 2026 The logrepair Authors
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

#include "logrepair/parser.hpp"

#include <algorithm>
#include <cctype>

#include "logrepair/error.hpp"

namespace logrepair {
namespace {

enum class Tok { kIdent, kNumber, kSymbol, kEnd };

struct Token {
  Tok type = Tok::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> Lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_')) {
        ++j;
      }
      t.type = Tok::kIdent;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      size_t j = i;
      while (j < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[j])) ||
              text[j] == '.')) {
        ++j;
      }
      t.type = Tok::kNumber;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else {
      static const char* kTwo[] = {"<=", ">=", "<>", "!="};
      t.type = Tok::kSymbol;
      for (const char* two : kTwo) {
        if (text.compare(i, 2, two) == 0) t.text = two;
      }
      if (t.text.empty()) {
        if (std::string("=<>(),;+-*").find(c) == std::string::npos) {
          throw SyntaxError(line, col,
                            std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

std::string Upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

Predicate Negate(Predicate p) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::kTrue: return Predicate::False();
    case K::kFalse: return Predicate::True();
    case K::kAnd:
    case K::kOr: {
      std::vector<Predicate> kids;
      for (auto& c : p.children) kids.push_back(Negate(std::move(c)));
      return p.kind == K::kAnd ? Predicate::Or(std::move(kids))
                               : Predicate::And(std::move(kids));
    }
    case K::kAtom:
      switch (p.op) {
        case CmpOp::kLt: p.op = CmpOp::kGe; return p;
        case CmpOp::kLe: p.op = CmpOp::kGt; return p;
        case CmpOp::kGe: p.op = CmpOp::kLt; return p;
        case CmpOp::kGt: p.op = CmpOp::kLe; return p;
        case CmpOp::kEq: {
          Predicate lt = p;
          lt.op = CmpOp::kLt;
          Predicate gt = p;
          gt.op = CmpOp::kGt;
          return Predicate::Or({std::move(lt), std::move(gt)});
        }
      }
  }
  return p;
}

class Parser {
 public:
  Parser(const std::string& text, const Schema& schema)
      : tokens_(Lex(text)), schema_(schema) {}

  QueryLog Parse() {
    std::vector<Query> queries;
    while (Peek().type != Tok::kEnd) {
      if (IsSymbol(";")) {
        Next();
        continue;
      }
      queries.push_back(Statement());
    }
    return QueryLog(schema_, std::move(queries));
  }

 private:
  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() { return tokens_[pos_++]; }
  bool IsSymbol(const char* s) const {
    return Peek().type == Tok::kSymbol && Peek().text == s;
  }
  bool IsKeyword(const char* k) const {
    return Peek().type == Tok::kIdent && Upper(Peek().text) == k;
  }
  [[noreturn]] void Fail(const std::string& msg) const {
    throw SyntaxError(Peek().line, Peek().column, msg);
  }
  [[noreturn]] void Fail(const Token& at, ErrorCode code,
                         const std::string& msg) const {
    throw Error(code, "line " + std::to_string(at.line) + ", column " +
                          std::to_string(at.column) + ": " + msg);
  }
  void ExpectSymbol(const char* s) {
    if (!IsSymbol(s)) Fail(std::string("expected '") + s + "'");
    Next();
  }
  void ExpectKeyword(const char* k) {
    if (!IsKeyword(k)) Fail(std::string("expected ") + k);
    Next();
  }
  std::string Identifier() {
    if (Peek().type != Tok::kIdent) Fail("expected identifier");
    return Next().text;
  }
  int Attribute(bool allow_id) {
    const Token& t = Peek();
    std::string name = Identifier();
    if (name == "id" && allow_id) return kIdAttr;
    int j = schema_.IndexOf(name);
    if (j < 0) Fail(t, ErrorCode::kUnknownAttribute, name);
    return j;
  }
  Decimal Number() {
    if (Peek().type != Tok::kNumber) Fail("expected number");
    const Token& t = Next();
    auto d = Decimal::Parse(t.text);
    if (!d) {
      throw SyntaxError(t.line, t.column,
                        "invalid number '" + t.text + "' (at most " +
                            std::to_string(Decimal::kDigits) +
                            " fractional digits)");
    }
    return *d;
  }
  Decimal SignedNumber() {
    bool neg = false;
    while (IsSymbol("-") || IsSymbol("+")) {
      if (Next().text == "-") neg = !neg;
    }
    Decimal d = Number();
    return neg ? -d : d;
  }

  Query Statement() {
    Query q;
    if (IsKeyword("UPDATE")) {
      Next();
      q.kind = QueryKind::kUpdate;
      q.table = Identifier();
      ExpectKeyword("SET");
      do {
        const Token& at = Peek();
        SetClause s;
        s.attr = Attribute(false);
        if (q.SetFor(s.attr)) {
          throw SyntaxError(at.line, at.column,
                            "attribute assigned twice: " +
                                schema_.name(s.attr));
        }
        ExpectSymbol("=");
        s.expr = Expr();
        q.set.push_back(std::move(s));
      } while (IsSymbol(",") && (Next(), true));
      q.where = OptionalWhere();
    } else if (IsKeyword("INSERT")) {
      Next();
      q.kind = QueryKind::kInsert;
      ExpectKeyword("INTO");
      q.table = Identifier();
      std::vector<int> columns;
      if (IsSymbol("(")) {
        Next();
        do {
          columns.push_back(Attribute(false));
        } while (IsSymbol(",") && (Next(), true));
        ExpectSymbol(")");
      } else {
        for (int j = 0; j < schema_.width(); ++j) columns.push_back(j);
      }
      std::vector<int> sorted = columns;
      std::sort(sorted.begin(), sorted.end());
      bool permutation = static_cast<int>(sorted.size()) == schema_.width();
      for (int j = 0; permutation && j < schema_.width(); ++j) {
        permutation = sorted[j] == j;
      }
      if (!permutation) Fail("INSERT must list every attribute exactly once");
      ExpectKeyword("VALUES");
      ExpectSymbol("(");
      std::vector<Decimal> given;
      do {
        given.push_back(SignedNumber());
      } while (IsSymbol(",") && (Next(), true));
      ExpectSymbol(")");
      if (given.size() != columns.size()) {
        Fail("INSERT has " + std::to_string(given.size()) + " values for " +
             std::to_string(columns.size()) + " attributes");
      }
      q.values.assign(schema_.width(), Decimal());
      q.value_slots.assign(schema_.width(), -1);
      for (size_t k = 0; k < columns.size(); ++k) {
        q.values[columns[k]] = given[k];
      }
      for (int j = 0; j < schema_.width(); ++j) q.value_slots[j] = next_slot_++;
    } else if (IsKeyword("DELETE")) {
      Next();
      q.kind = QueryKind::kDelete;
      ExpectKeyword("FROM");
      q.table = Identifier();
      q.where = OptionalWhere();
    } else {
      Fail("expected UPDATE, INSERT or DELETE");
    }
    ExpectSymbol(";");
    return q;
  }

  Predicate OptionalWhere() {
    if (!IsKeyword("WHERE")) return Predicate::True();
    Next();
    return Or();
  }

  Predicate Or() {
    std::vector<Predicate> kids{And()};
    while (IsKeyword("OR")) {
      Next();
      kids.push_back(And());
    }
    return kids.size() == 1 ? std::move(kids[0]) : Predicate::Or(std::move(kids));
  }

  Predicate And() {
    std::vector<Predicate> kids{Not()};
    while (IsKeyword("AND")) {
      Next();
      kids.push_back(Not());
    }
    if (kids.size() == 1) return std::move(kids[0]);
    // BETWEEN yields an AND node; flatten it into the enclosing conjunction.
    std::vector<Predicate> flat;
    for (auto& k : kids) {
      if (k.kind == Predicate::Kind::kAnd) {
        for (auto& g : k.children) flat.push_back(std::move(g));
      } else {
        flat.push_back(std::move(k));
      }
    }
    return Predicate::And(std::move(flat));
  }

  Predicate Not() {
    if (IsKeyword("NOT")) {
      Next();
      return Negate(Not());
    }
    if (IsSymbol("(")) {
      Next();
      Predicate p = Or();
      ExpectSymbol(")");
      return p;
    }
    if (IsKeyword("TRUE")) {
      Next();
      return Predicate::True();
    }
    if (IsKeyword("FALSE")) {
      Next();
      return Predicate::False();
    }
    return Comparison();
  }

  Predicate Comparison() {
    LinExpr lhs = Expr(true);
    if (IsKeyword("BETWEEN")) {
      Next();
      Decimal lo = SignedNumber();
      ExpectKeyword("AND");
      Decimal hi = SignedNumber();
      Predicate a = Predicate::Atom(lhs, CmpOp::kGe, lo, next_slot_++);
      Predicate b = Predicate::Atom(lhs, CmpOp::kLe, hi, next_slot_++);
      return Predicate::And({std::move(a), std::move(b)});
    }
    if (Peek().type != Tok::kSymbol) Fail("expected comparison operator");
    std::string op = Next().text;
    CmpOp cmp;
    bool negate = false;
    if (op == "<") {
      cmp = CmpOp::kLt;
    } else if (op == "<=") {
      cmp = CmpOp::kLe;
    } else if (op == "=") {
      cmp = CmpOp::kEq;
    } else if (op == ">=") {
      cmp = CmpOp::kGe;
    } else if (op == ">") {
      cmp = CmpOp::kGt;
    } else if (op == "<>" || op == "!=") {
      cmp = CmpOp::kEq;
      negate = true;
    } else {
      --pos_;
      Fail("expected comparison operator");
    }
    if (Peek().type == Tok::kIdent) {
      Fail("right-hand side of a comparison must be a number");
    }
    Decimal rhs = SignedNumber();
    if ((Peek().type == Tok::kIdent && !IsKeyword("AND") && !IsKeyword("OR")) ||
        IsSymbol("*")) {
      Fail("right-hand side of a comparison must be a number");
    }
    Predicate atom = Predicate::Atom(std::move(lhs), cmp, rhs, next_slot_++);
    return negate ? Negate(std::move(atom)) : atom;
  }

  // sum of terms; each term is a product of at most one attribute and at
  // most one literal.
  LinExpr Expr(bool allow_id = true) {
    LinExpr e;
    bool have_constant = false;
    bool first = true;
    for (;;) {
      bool neg = false;
      if (first) {
        while (IsSymbol("-") || IsSymbol("+")) {
          if (Next().text == "-") neg = !neg;
        }
      } else if (IsSymbol("+") || IsSymbol("-")) {
        neg = Next().text == "-";
      } else {
        break;
      }
      first = false;
      const Token& start = Peek();
      int attr = -2;
      bool have_literal = false;
      Decimal literal;
      for (;;) {
        if (Peek().type == Tok::kNumber ||
            ((IsSymbol("-") || IsSymbol("+")) &&
             tokens_[pos_ + 1].type == Tok::kNumber && have_literal == false &&
             attr != -2)) {
          if (have_literal) {
            Fail("several literals in one term");
          }
          literal = SignedNumber();
          have_literal = true;
        } else if (Peek().type == Tok::kIdent && !IsKeyword("AND") &&
                   !IsKeyword("OR") && !IsKeyword("WHERE") &&
                   !IsKeyword("BETWEEN")) {
          const Token& at = Peek();
          int a = Attribute(allow_id);
          if (attr != -2) {
            Fail(at, ErrorCode::kNonLinearExpression,
                 "product of attributes is not linear");
          }
          attr = a;
        } else {
          Fail("expected attribute or number");
        }
        if (!IsSymbol("*")) break;
        Next();
      }
      if (attr == -2) {
        if (have_constant) {
          throw SyntaxError(start.line, start.column,
                            "several constants in one expression");
        }
        have_constant = true;
        e.constant = neg ? -literal : literal;
        e.constant_slot = next_slot_++;
        continue;
      }
      if (e.TermFor(attr)) {
        throw SyntaxError(start.line, start.column,
                          "attribute repeated in expression");
      }
      Term t;
      t.attr = attr;
      if (have_literal) {
        t.coeff = neg ? -literal : literal;
        t.slot = next_slot_++;
      } else {
        t.coeff = Decimal::FromInt(neg ? -1 : 1);
      }
      e.terms.push_back(t);
    }
    if (first) Fail("expected expression");
    return e;
  }

  std::vector<Token> tokens_;
  const Schema& schema_;
  size_t pos_ = 0;
  int next_slot_ = 0;
};

std::string AttrName(int attr, const Schema& schema) {
  return attr == kIdAttr ? "id" : schema.name(attr);
}

std::string RenderExpr(const LinExpr& e, const Schema& schema) {
  std::string out;
  bool first = true;
  for (const Term& t : e.terms) {
    bool neg = t.coeff < Decimal();
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    out += AttrName(t.attr, schema);
    if (t.slot >= 0) out += " * " + t.coeff.Abs().ToString();
    first = false;
  }
  if (e.constant_slot >= 0 || e.terms.empty()) {
    bool neg = e.constant < Decimal();
    if (first) {
      out += e.constant.ToString();
    } else {
      out += (neg ? " - " : " + ") + e.constant.Abs().ToString();
    }
  }
  return out;
}

std::string RenderPred(const Predicate& p, const Schema& schema, bool nested) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::kTrue: return "TRUE";
    case K::kFalse: return "FALSE";
    case K::kAtom:
      return RenderExpr(p.lhs, schema) + " " + CmpOpText(p.op) + " " +
             p.rhs.ToString();
    case K::kAnd:
    case K::kOr: {
      if (p.children.empty()) return p.kind == K::kAnd ? "TRUE" : "FALSE";
      std::string sep = p.kind == K::kAnd ? " AND " : " OR ";
      std::string out;
      for (size_t i = 0; i < p.children.size(); ++i) {
        if (i) out += sep;
        bool paren = p.kind == K::kAnd &&
                     p.children[i].kind == K::kOr &&
                     !p.children[i].children.empty();
        out += paren ? "(" + RenderPred(p.children[i], schema, true) + ")"
                     : RenderPred(p.children[i], schema, true);
      }
      (void)nested;
      return out;
    }
  }
  return "";
}

}  // namespace

QueryLog parse_log(const std::string& text, const Schema& schema) {
  return Parser(text, schema).Parse();
}

std::string render(const Predicate& p, const Schema& schema) {
  return RenderPred(p, schema, false);
}

std::string render(const Query& q, const Schema& schema) {
  std::string out;
  switch (q.kind) {
    case QueryKind::kUpdate:
      out = "UPDATE " + q.table + " SET ";
      for (size_t i = 0; i < q.set.size(); ++i) {
        if (i) out += ", ";
        out += schema.name(q.set[i].attr) + " = " +
               RenderExpr(q.set[i].expr, schema);
      }
      break;
    case QueryKind::kInsert:
      out = "INSERT INTO " + q.table + " VALUES (";
      for (size_t i = 0; i < q.values.size(); ++i) {
        if (i) out += ", ";
        out += q.values[i].ToString();
      }
      return out + ");";
    case QueryKind::kDelete:
      out = "DELETE FROM " + q.table;
      break;
  }
  if (q.where.kind != Predicate::Kind::kTrue) {
    out += " WHERE " + render(q.where, schema);
  }
  return out + ";";
}

std::string render(const QueryLog& log) {
  std::string out;
  for (const Query& q : log.queries()) out += render(q, log.schema()) + "\n";
  return out;
}

}  // namespace logrepair
