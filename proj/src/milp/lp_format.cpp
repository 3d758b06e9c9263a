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

#include "logrepair/milp/lp_format.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <unordered_set>

#include "logrepair/error.hpp"

namespace logrepair::milp {
namespace {

std::string Num(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool Reserved(const std::string& lower) {
  static const std::unordered_set<std::string> kWords = {
      "inf", "infinity", "free", "st", "end", "bounds", "binary", "binaries",
      "minimize", "maximize", "subject", "to", "min", "max", "bin"};
  return kWords.count(lower) > 0;
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

class NameTable {
 public:
  std::string Make(const std::string& raw, const std::string& fallback) {
    std::string s;
    for (char c : raw) {
      s += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
    }
    if (s.empty()) s = fallback;
    if (std::isdigit(static_cast<unsigned char>(s[0]))) s = "_" + s;
    if (Reserved(Lower(s))) s += "_";
    std::string out = s;
    for (int k = 2; !used_.insert(out).second; ++k) out = s + "_" + std::to_string(k);
    return out;
  }

 private:
  std::unordered_set<std::string> used_;
};

void WriteTerms(std::string& out, const std::vector<std::pair<int, double>>& terms,
                const std::vector<std::string>& names) {
  int on_line = 0;
  for (const auto& [j, a] : terms) {
    if (on_line == 8) {
      out += "\n   ";
      on_line = 0;
    }
    out += a < 0 ? " - " : " + ";
    out += Num(std::abs(a));
    out += " ";
    out += names[j];
    ++on_line;
  }
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  NameTable table;
  std::vector<std::string> names(model.num_vars());
  for (const VarRef& v : model.vars()) {
    names[v.id] = table.Make(v.name, "v" + std::to_string(v.id));
  }
  std::string out = "\\ logrepair model: " + std::to_string(model.num_vars()) +
                    " vars, " + std::to_string(model.num_constraints()) +
                    " rows\nMinimize\n obj:";
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.objective()[j] != 0) obj.push_back({j, model.objective()[j]});
  }
  WriteTerms(out, obj, names);
  if (model.objective_constant() != 0) {
    double c = model.objective_constant();
    out += c < 0 ? " - " : " + ";
    out += Num(std::abs(c));
  }
  out += "\nSubject To\n";
  for (int i = 0; i < model.num_constraints(); ++i) {
    const LinConstraint& c = model.constraints()[i];
    out += " " + table.Make(c.tag, "c" + std::to_string(i)) + ":";
    WriteTerms(out, c.terms, names);
    out += c.op == Sense::kLe ? " <= " : c.op == Sense::kGe ? " >= " : " = ";
    out += Num(c.rhs);
    out += "\n";
  }
  out += "Bounds\n";
  for (const VarRef& v : model.vars()) {
    const std::string& n = names[v.id];
    if (v.lo == -kInf && v.hi == kInf) {
      out += " " + n + " free\n";
    } else if (v.lo == v.hi) {
      out += " " + n + " = " + Num(v.lo) + "\n";
    } else {
      out += " " + Num(v.lo) + " <= " + n + " <= " + Num(v.hi) + "\n";
    }
  }
  bool any = false;
  for (const VarRef& v : model.vars()) {
    if (v.kind != VarKind::kBinary) continue;
    if (!any) out += "Binaries\n";
    any = true;
    out += " " + names[v.id] + "\n";
  }
  out += "End\n";
  return out;
}

namespace {

struct Token {
  enum Kind { kName, kNumber, kOp, kColon, kEnd } kind = kEnd;
  std::string text;
  double value = 0;
  int line = 0;
  int column = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  // Returns the tokens of one logical line (comments stripped).
  std::vector<Token> Line(int line_no, const std::string& line) {
    std::vector<Token> out;
    size_t i = 0;
    auto col = [&](size_t p) { return static_cast<int>(p) + 1; };
    while (i < line.size()) {
      char c = line[i];
      if (c == '\\') break;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token t;
      t.line = line_no;
      t.column = col(i);
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < line.size() &&
               (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_' ||
                line[j] == '.')) {
          ++j;
        }
        t.text = line.substr(i, j - i);
        std::string low = Lower(t.text);
        if (low == "inf" || low == "infinity") {
          t.kind = Token::kNumber;
          t.value = kInf;
        } else {
          t.kind = Token::kName;
        }
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const char* begin = line.c_str() + i;
        char* end = nullptr;
        t.value = std::strtod(begin, &end);
        if (end == begin) throw SyntaxError(line_no, col(i), "bad number");
        t.kind = Token::kNumber;
        t.text = std::string(begin, static_cast<const char*>(end));
        i += static_cast<size_t>(end - begin);
      } else if (c == '<' || c == '>' || c == '=') {
        t.kind = Token::kOp;
        t.text = c;
        ++i;
        if (i < line.size() && line[i] == '=') ++i;
        if (t.text == "=" && i < line.size() && (line[i] == '<' || line[i] == '>')) {
          t.text = line[i];
          ++i;
        }
      } else if (c == '+' || c == '-') {
        t.kind = Token::kOp;
        t.text = c;
        ++i;
      } else if (c == ':') {
        t.kind = Token::kColon;
        ++i;
      } else {
        throw SyntaxError(line_no, col(i), std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
    return out;
  }

  const std::string& text() const { return text_; }

 private:
  const std::string& text_;
};

enum class Section { kNone, kObjective, kRows, kBounds, kBinaries, kEnd };

struct PendingVar {
  double lo = 0;
  double hi = kInf;
  bool binary = false;
  bool bounded = false;
};

class Importer {
 public:
  MilpModel Run(const std::string& text) {
    Lexer lexer(text);
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
      size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      std::string line = text.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      std::vector<Token> toks = lexer.Line(line_no, line);
      if (toks.empty()) continue;
      if (Header(toks)) continue;
      for (Token& t : toks) pending_.push_back(std::move(t));
      Drain(false);
    }
    if (section_ != Section::kEnd) throw SyntaxError(line_no, 1, "missing End");
    return Build();
  }

 private:
  bool Header(const std::vector<Token>& toks) {
    if (toks[0].kind != Token::kName) return false;
    std::string w = Lower(toks[0].text);
    Section next = Section::kNone;
    size_t used = 1;
    if (w == "minimize" || w == "minimum" || w == "min") {
      next = Section::kObjective;
    } else if (w == "maximize" || w == "maximum" || w == "max") {
      throw SyntaxError(toks[0].line, toks[0].column, "only Minimize is supported");
    } else if (w == "subject" && toks.size() >= 2 && Lower(toks[1].text) == "to") {
      next = Section::kRows;
      used = 2;
    } else if (w == "st" || w == "s.t.") {
      next = Section::kRows;
    } else if (w == "bounds" || w == "bound") {
      next = Section::kBounds;
    } else if (w == "binaries" || w == "binary" || w == "bin") {
      next = Section::kBinaries;
    } else if (w == "end") {
      next = Section::kEnd;
    } else {
      return false;
    }
    if (toks.size() > used) return false;  // a variable that looks like a keyword
    Drain(true);
    if (static_cast<int>(next) <= static_cast<int>(section_) ||
        (section_ == Section::kNone && next != Section::kObjective) ||
        (section_ == Section::kObjective && next != Section::kRows)) {
      throw SyntaxError(toks[0].line, toks[0].column,
                        "section " + toks[0].text + " out of order");
    }
    section_ = next;
    return true;
  }

  [[noreturn]] void Fail(const Token& t, const std::string& msg) {
    throw SyntaxError(t.line, t.column, msg);
  }

  int VarIndex(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(order_.size());
    index_[name] = id;
    order_.push_back(name);
    vars_.emplace_back();
    return id;
  }

  // Parses "[name:] terms" up to a sense or the end of the buffer.
  // Returns the index one past the last consumed token.
  size_t Terms(size_t i, std::vector<std::pair<int, double>>* terms,
               double* constant) {
    while (i < pending_.size()) {
      const Token& t = pending_[i];
      if (t.kind == Token::kOp && t.text != "+" && t.text != "-") break;
      double sign = 1;
      if (t.kind == Token::kOp) {
        sign = t.text == "-" ? -1 : 1;
        ++i;
        if (i >= pending_.size()) Fail(t, "dangling sign");
      }
      double coeff = 1;
      bool have_num = false;
      if (pending_[i].kind == Token::kNumber) {
        coeff = pending_[i].value;
        have_num = true;
        ++i;
      }
      if (i < pending_.size() && pending_[i].kind == Token::kName) {
        terms->push_back({VarIndex(pending_[i].text), sign * coeff});
        ++i;
      } else if (have_num && constant) {
        *constant += sign * coeff;
      } else {
        Fail(pending_[i < pending_.size() ? i : i - 1], "expected a term");
      }
    }
    return i;
  }

  // Consumes complete statements from the buffer. With `flush`, whatever is
  // left must form a complete statement too.
  void Drain(bool flush) {
    if (pending_.empty()) return;
    switch (section_) {
      case Section::kNone:
      case Section::kEnd:
        Fail(pending_[0], "content outside a section");
      case Section::kObjective:
        if (!flush) return;  // objective may span lines
        {
          size_t i = 0;
          if (pending_.size() >= 2 && pending_[0].kind == Token::kName &&
              pending_[1].kind == Token::kColon) {
            i = 2;
          }
          std::vector<std::pair<int, double>> terms;
          size_t end = Terms(i, &terms, &obj_constant_);
          if (end != pending_.size()) Fail(pending_[end], "unexpected token in objective");
          for (auto& t : terms) objective_.push_back(t);
        }
        pending_.clear();
        return;
      case Section::kRows: {
        // A row is complete once a sense and its rhs have been seen.
        size_t start = 0;
        while (true) {
          size_t sense = start;
          while (sense < pending_.size() &&
                 !(pending_[sense].kind == Token::kOp && pending_[sense].text != "+" &&
                   pending_[sense].text != "-")) {
            ++sense;
          }
          size_t rhs_end = sense + 1;
          if (rhs_end < pending_.size() && pending_[rhs_end].kind == Token::kOp &&
              (pending_[rhs_end].text == "+" || pending_[rhs_end].text == "-")) {
            ++rhs_end;
          }
          if (sense >= pending_.size() || rhs_end >= pending_.size()) break;
          Row(start, sense, sense + 1);
          start = rhs_end + 1;
        }
        pending_.erase(pending_.begin(), pending_.begin() + static_cast<long>(start));
        if (flush && !pending_.empty()) Fail(pending_[0], "incomplete constraint");
        return;
      }
      case Section::kBounds:
        BoundLine();
        pending_.clear();
        return;
      case Section::kBinaries:
        for (const Token& t : pending_) {
          if (t.kind != Token::kName) Fail(t, "expected a variable name");
          vars_[VarIndex(t.text)].binary = true;
        }
        pending_.clear();
        return;
    }
  }

  void Row(size_t start, size_t sense, size_t rhs) {
    std::string name;
    size_t i = start;
    if (sense - start >= 2 && pending_[i].kind == Token::kName &&
        pending_[i + 1].kind == Token::kColon) {
      name = pending_[i].text;
      i += 2;
    }
    std::vector<std::pair<int, double>> terms;
    size_t end = Terms(i, &terms, nullptr);
    if (end != sense) Fail(pending_[end], "unexpected token in constraint");
    if (terms.empty()) Fail(pending_[sense], "constraint without terms");
    const Token& st = pending_[sense];
    Sense op = st.text[0] == '<' ? Sense::kLe : st.text[0] == '>' ? Sense::kGe : Sense::kEq;
    double sign = 1;
    if (pending_[rhs].kind == Token::kOp) {
      sign = pending_[rhs].text == "-" ? -1 : 1;
      ++rhs;
    }
    if (pending_[rhs].kind != Token::kNumber) Fail(pending_[rhs], "expected rhs");
    rows_.push_back({std::move(terms), op, sign * pending_[rhs].value, name});
  }

  // Reads an optionally signed number at `i`, advancing it.
  bool Number(size_t& i, double* v) {
    double sign = 1;
    size_t j = i;
    if (j < pending_.size() && pending_[j].kind == Token::kOp &&
        (pending_[j].text == "+" || pending_[j].text == "-")) {
      sign = pending_[j].text == "-" ? -1 : 1;
      ++j;
    }
    if (j < pending_.size() && pending_[j].kind == Token::kNumber) {
      *v = sign * pending_[j].value;
      i = j + 1;
      return true;
    }
    return false;
  }

  void BoundLine() {
    const auto& p = pending_;
    size_t i = 0;
    double lead = 0;
    bool has_lead = Number(i, &lead);
    std::string lead_op;
    if (has_lead) {
      if (i >= p.size() || p[i].kind != Token::kOp) Fail(p[0], "malformed bound");
      lead_op = p[i++].text;
    }
    if (i >= p.size() || p[i].kind != Token::kName) Fail(p[0], "expected a variable");
    int id = VarIndex(p[i].text);
    if (!bounded_seen_.insert(id).second) Fail(p[i], "variable bounded twice");
    bound_order_.push_back(id);
    PendingVar& v = vars_[id];
    v.bounded = true;
    ++i;
    auto apply = [&](const std::string& op, double value, bool var_on_left) {
      char c = op[0];
      if (c == '=') {
        v.lo = v.hi = value;
      } else if ((c == '<') == var_on_left) {
        v.hi = value;
      } else {
        v.lo = value;
      }
    };
    if (has_lead) apply(lead_op, lead, false);
    if (i < p.size() && p[i].kind == Token::kName && Lower(p[i].text) == "free") {
      if (has_lead) Fail(p[i], "malformed bound");
      v.lo = -kInf;
      v.hi = kInf;
      ++i;
    } else if (i < p.size()) {
      if (p[i].kind != Token::kOp) Fail(p[i], "malformed bound");
      std::string op = p[i++].text;
      double value = 0;
      if (!Number(i, &value)) Fail(p[i < p.size() ? i : p.size() - 1], "expected a number");
      apply(op, value, true);
    }
    if (i != p.size()) Fail(p[i], "trailing tokens in bound");
  }

  MilpModel Build() {
    // Bounds order fixes the ids; anything never bounded follows in order of
    // first appearance.
    std::vector<int> order = bound_order_;
    for (int id = 0; id < static_cast<int>(order_.size()); ++id) {
      if (!bounded_seen_.count(id)) order.push_back(id);
    }
    std::vector<int> remap(order_.size());
    MilpModel m;
    for (int id : order) {
      const PendingVar& v = vars_[id];
      double lo = v.lo, hi = v.hi;
      if (v.binary && !v.bounded) {
        lo = 0;
        hi = 1;
      }
      remap[id] = m.AddVar(order_[id], v.binary ? VarKind::kBinary : VarKind::kContinuous,
                           lo, hi);
    }
    for (const auto& [id, a] : objective_) m.AddObjective(remap[id], a);
    m.set_objective_constant(obj_constant_);
    for (auto& r : rows_) {
      for (auto& t : r.terms) t.first = remap[t.first];
      m.AddConstraint(std::move(r.terms), r.op, r.rhs, r.tag);
    }
    return m;
  }

  Section section_ = Section::kNone;
  std::vector<Token> pending_;
  std::map<std::string, int> index_;
  std::vector<std::string> order_;
  std::vector<PendingVar> vars_;
  std::vector<int> bound_order_;
  std::unordered_set<int> bounded_seen_;
  std::vector<std::pair<int, double>> objective_;
  double obj_constant_ = 0;
  std::vector<LinConstraint> rows_;
};

}  // namespace

MilpModel import_lp(const std::string& text) { return Importer().Run(text); }

}  // namespace logrepair::milp
