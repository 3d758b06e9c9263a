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

#include "logrepair/query.hpp"

#include <map>

#include "logrepair/error.hpp"

namespace logrepair {

const char* SlotKindName(SlotKind kind) {
  switch (kind) {
    case SlotKind::kSetAdditive: return "set-additive";
    case SlotKind::kSetCoefficient: return "set-coefficient";
    case SlotKind::kWhereConstant: return "where-constant";
    case SlotKind::kInsertValue: return "insert-value";
  }
  return "?";
}

const char* CmpOpText(CmpOp op) {
  switch (op) {
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kEq: return "=";
    case CmpOp::kGe: return ">=";
    case CmpOp::kGt: return ">";
  }
  return "?";
}

Decimal LinExpr::Eval(const TupleRow& row) const {
  Decimal sum = constant;
  for (const Term& t : terms) {
    Decimal v = t.attr == kIdAttr ? Decimal::FromInt(row.id)
                                  : row.values[t.attr];
    sum += t.coeff * v;
  }
  return sum;
}

const Term* LinExpr::TermFor(int attr) const {
  for (const Term& t : terms) {
    if (t.attr == attr) return &t;
  }
  return nullptr;
}

Predicate Predicate::Atom(LinExpr lhs, CmpOp op, Decimal rhs, int slot) {
  Predicate p;
  p.kind = Kind::kAtom;
  p.lhs = std::move(lhs);
  p.op = op;
  p.rhs = rhs;
  p.rhs_slot = slot;
  return p;
}

namespace {

// Children of the same connective are spliced in, so AND/OR trees stay flat
// and rendering without parentheses reparses to the same tree.
Predicate Connective(Predicate::Kind kind, std::vector<Predicate> children) {
  Predicate p;
  p.kind = kind;
  for (Predicate& c : children) {
    if (c.kind == kind) {
      for (Predicate& g : c.children) p.children.push_back(std::move(g));
    } else {
      p.children.push_back(std::move(c));
    }
  }
  return p;
}

}  // namespace

Predicate Predicate::And(std::vector<Predicate> children) {
  return Connective(Kind::kAnd, std::move(children));
}

Predicate Predicate::Or(std::vector<Predicate> children) {
  return Connective(Kind::kOr, std::move(children));
}

bool Predicate::Eval(const TupleRow& row) const {
  switch (kind) {
    case Kind::kTrue: return true;
    case Kind::kFalse: return false;
    case Kind::kAtom: {
      Decimal e = lhs.Eval(row);
      switch (op) {
        case CmpOp::kLt: return e < rhs;
        case CmpOp::kLe: return e <= rhs;
        case CmpOp::kEq: return e == rhs;
        case CmpOp::kGe: return e >= rhs;
        case CmpOp::kGt: return e > rhs;
      }
      return false;
    }
    case Kind::kAnd:
      for (const auto& c : children) {
        if (!c.Eval(row)) return false;
      }
      return true;
    case Kind::kOr:
      for (const auto& c : children) {
        if (c.Eval(row)) return true;
      }
      return false;
  }
  return false;
}

int Predicate::AtomCount() const {
  if (kind == Kind::kAtom) return 1;
  int n = 0;
  for (const auto& c : children) n += c.AtomCount();
  return n;
}

void Predicate::CollectAttrs(std::vector<bool>* attrs) const {
  if (kind == Kind::kAtom) {
    for (const Term& t : lhs.terms) {
      if (t.attr != kIdAttr) (*attrs)[t.attr] = true;
    }
  }
  for (const auto& c : children) c.CollectAttrs(attrs);
}

const SetClause* Query::SetFor(int attr) const {
  for (const auto& s : set) {
    if (s.attr == attr) return &s;
  }
  return nullptr;
}

namespace {

void VisitPredicate(Predicate& p, const std::function<void(int&, Decimal&)>& fn) {
  if (p.kind == Predicate::Kind::kAtom) {
    for (Term& t : p.lhs.terms) {
      if (t.slot >= 0) fn(t.slot, t.coeff);
    }
    if (p.lhs.constant_slot >= 0) fn(p.lhs.constant_slot, p.lhs.constant);
    if (p.rhs_slot >= 0) fn(p.rhs_slot, p.rhs);
  }
  for (auto& c : p.children) VisitPredicate(c, fn);
}

}  // namespace

void ForEachLiteral(Query& q, const std::function<void(int&, Decimal&)>& fn) {
  for (auto& s : q.set) {
    for (Term& t : s.expr.terms) {
      if (t.slot >= 0) fn(t.slot, t.coeff);
    }
    if (s.expr.constant_slot >= 0) fn(s.expr.constant_slot, s.expr.constant);
  }
  if (q.kind != QueryKind::kInsert) VisitPredicate(q.where, fn);
  for (size_t i = 0; i < q.values.size(); ++i) fn(q.value_slots[i], q.values[i]);
}

QueryLog::QueryLog(Schema schema, std::vector<Query> queries)
    : schema_(std::move(schema)), queries_(std::move(queries)) {
  Reindex();
}

void QueryLog::Reindex() {
  slots_.clear();
  for (size_t qi = 0; qi < queries_.size(); ++qi) {
    Query& q = queries_[qi];
    q.index = static_cast<int>(qi) + 1;
    std::map<int, int> renamed;
    int position = 0;
    // Classification pass needs the clause of each literal, so walk the
    // parts explicitly rather than through ForEachLiteral.
    auto add = [&](int& slot, Decimal value, Clause clause, SlotKind kind,
                   bool lhs) {
      auto it = renamed.find(slot);
      if (slot >= 0 && it != renamed.end()) {
        slot = it->second;
        return;
      }
      ParamSlot ps;
      ps.slot_id = static_cast<int>(slots_.size());
      ps.original_value = value;
      ps.query_index = q.index;
      ps.clause = clause;
      ps.position = position++;
      ps.kind = kind;
      ps.predicate_lhs = lhs;
      renamed[slot] = ps.slot_id;
      slot = ps.slot_id;
      slots_.push_back(ps);
    };
    for (auto& s : q.set) {
      for (Term& t : s.expr.terms) {
        if (t.slot >= 0) {
          add(t.slot, t.coeff, Clause::kSet, SlotKind::kSetCoefficient, false);
        }
      }
      if (s.expr.constant_slot >= 0) {
        add(s.expr.constant_slot, s.expr.constant, Clause::kSet,
            SlotKind::kSetAdditive, false);
      }
    }
    position = 0;
    std::function<void(Predicate&)> walk = [&](Predicate& p) {
      if (p.kind == Predicate::Kind::kAtom) {
        for (Term& t : p.lhs.terms) {
          if (t.slot >= 0) {
            add(t.slot, t.coeff, Clause::kWhere, SlotKind::kWhereConstant,
                true);
          }
        }
        if (p.lhs.constant_slot >= 0) {
          add(p.lhs.constant_slot, p.lhs.constant, Clause::kWhere,
              SlotKind::kWhereConstant, true);
        }
        if (p.rhs_slot >= 0) {
          add(p.rhs_slot, p.rhs, Clause::kWhere, SlotKind::kWhereConstant,
              false);
        }
      }
      for (auto& c : p.children) walk(c);
    };
    if (q.kind != QueryKind::kInsert) walk(q.where);
    position = 0;
    for (size_t i = 0; i < q.values.size(); ++i) {
      add(q.value_slots[i], q.values[i], Clause::kValues,
          SlotKind::kInsertValue, false);
    }
  }
}

std::vector<int> QueryLog::SlotsOfQuery(int index) const {
  std::vector<int> out;
  for (const auto& s : slots_) {
    if (s.query_index == index) out.push_back(s.slot_id);
  }
  return out;
}

Decimal QueryLog::SlotValue(int slot_id) const {
  // ForEachLiteral only reads here.
  Query& q = const_cast<Query&>(at(slot(slot_id).query_index));
  Decimal found;
  bool hit = false;
  ForEachLiteral(q, [&](int& s, Decimal& v) {
    if (s == slot_id && !hit) {
      found = v;
      hit = true;
    }
  });
  if (!hit) throw Error(ErrorCode::kInvalidArgument, "unknown slot");
  return found;
}

void QueryLog::SetSlotValue(int slot_id, Decimal value) {
  Query& q = mutable_at(slot(slot_id).query_index);
  ForEachLiteral(q, [&](int& s, Decimal& v) {
    if (s == slot_id) v = value;
  });
  slots_[slot_id].original_value = value;
}

namespace {

bool SameExpr(const LinExpr& a, const LinExpr& b, bool values) {
  if (a.terms.size() != b.terms.size()) return false;
  if ((a.constant_slot >= 0) != (b.constant_slot >= 0)) return false;
  if (values && a.constant != b.constant) return false;
  for (size_t i = 0; i < a.terms.size(); ++i) {
    const Term& x = a.terms[i];
    const Term& y = b.terms[i];
    if (x.attr != y.attr || (x.slot >= 0) != (y.slot >= 0)) return false;
    if ((values || x.slot < 0) && x.coeff != y.coeff) return false;
  }
  return true;
}

}  // namespace

bool StructurallyEqual(const Predicate& a, const Predicate& b, bool values) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  if (a.kind == Predicate::Kind::kAtom) {
    if (a.op != b.op || !SameExpr(a.lhs, b.lhs, values)) return false;
    if ((a.rhs_slot >= 0) != (b.rhs_slot >= 0)) return false;
    if (values && a.rhs != b.rhs) return false;
  }
  for (size_t i = 0; i < a.children.size(); ++i) {
    if (!StructurallyEqual(a.children[i], b.children[i], values)) return false;
  }
  return true;
}

bool StructurallyEqual(const Query& a, const Query& b, bool values) {
  if (a.kind != b.kind || a.set.size() != b.set.size() ||
      a.values.size() != b.values.size()) {
    return false;
  }
  for (size_t i = 0; i < a.set.size(); ++i) {
    if (a.set[i].attr != b.set[i].attr ||
        !SameExpr(a.set[i].expr, b.set[i].expr, values)) {
      return false;
    }
  }
  if (values && a.values != b.values) return false;
  if (a.kind != QueryKind::kInsert &&
      !StructurallyEqual(a.where, b.where, values)) {
    return false;
  }
  return true;
}

bool StructurallyEqual(const QueryLog& a, const QueryLog& b, bool values) {
  if (!(a.schema() == b.schema()) || a.size() != b.size()) return false;
  for (int i = 1; i <= a.size(); ++i) {
    if (!StructurallyEqual(a.at(i), b.at(i), values)) return false;
  }
  return true;
}

}  // namespace logrepair
