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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "logrepair/decimal.hpp"
#include "logrepair/relation.hpp"

namespace logrepair {

// Attribute index used for the primary key in predicates.
inline constexpr int kIdAttr = -1;

enum class SlotKind {
  kSetAdditive,
  kSetCoefficient,
  kWhereConstant,
  kInsertValue,
};
const char* SlotKindName(SlotKind kind);

enum class Clause { kSet, kWhere, kValues };

// A numeric literal of the log that a repair may change.
struct ParamSlot {
  int slot_id = -1;
  Decimal original_value;
  int query_index = 0;  // 1-based
  Clause clause = Clause::kSet;
  int position = 0;  // literal order within the clause
  SlotKind kind = SlotKind::kSetAdditive;
  // Literal inside the left-hand side of a comparison. Such literals are
  // recorded but never freed by the encoder.
  bool predicate_lhs = false;
};

struct Term {
  Decimal coeff;
  int attr = 0;   // schema index or kIdAttr
  int slot = -1;  // -1 when the coefficient is the implicit +-1
};

struct LinExpr {
  std::vector<Term> terms;
  Decimal constant;
  int constant_slot = -1;

  Decimal Eval(const TupleRow& row) const;
  bool HasAttributes() const { return !terms.empty(); }
  const Term* TermFor(int attr) const;
};

enum class CmpOp { kLt, kLe, kEq, kGe, kGt };
const char* CmpOpText(CmpOp op);

struct Predicate {
  enum class Kind { kTrue, kFalse, kAtom, kAnd, kOr };
  Kind kind = Kind::kTrue;
  // Atom: lhs op rhs.
  LinExpr lhs;
  CmpOp op = CmpOp::kGe;
  Decimal rhs;
  int rhs_slot = -1;
  std::vector<Predicate> children;

  static Predicate True() { return {}; }
  static Predicate False() {
    Predicate p;
    p.kind = Kind::kFalse;
    return p;
  }
  static Predicate Atom(LinExpr lhs, CmpOp op, Decimal rhs, int slot = -1);
  static Predicate And(std::vector<Predicate> children);
  static Predicate Or(std::vector<Predicate> children);

  bool Eval(const TupleRow& row) const;
  int AtomCount() const;
  // Attributes read by the predicate (excluding the key).
  void CollectAttrs(std::vector<bool>* attrs) const;
};

enum class QueryKind { kUpdate, kInsert, kDelete };

struct SetClause {
  int attr = 0;
  LinExpr expr;
};

struct Query {
  QueryKind kind = QueryKind::kUpdate;
  int index = 0;  // 1-based position in the log
  std::string table;
  std::vector<SetClause> set;       // Update
  Predicate where;                  // Update, Delete
  std::vector<Decimal> values;      // Insert, schema order
  std::vector<int> value_slots;     // Insert

  const SetClause* SetFor(int attr) const;
};

class QueryLog {
 public:
  QueryLog() = default;
  QueryLog(Schema schema, std::vector<Query> queries);

  const Schema& schema() const { return schema_; }
  int size() const { return static_cast<int>(queries_.size()); }
  bool empty() const { return queries_.empty(); }
  // 1-based.
  const Query& at(int index) const { return queries_.at(index - 1); }
  Query& mutable_at(int index) { return queries_.at(index - 1); }
  const std::vector<Query>& queries() const { return queries_; }
  const std::vector<ParamSlot>& slots() const { return slots_; }
  const ParamSlot& slot(int id) const { return slots_.at(id); }
  std::vector<int> SlotsOfQuery(int index) const;

  // Current literal value behind a slot.
  Decimal SlotValue(int slot_id) const;
  // Replaces the literal behind a slot; the slot's original_value follows.
  void SetSlotValue(int slot_id, Decimal value);

  // Rebuilds slot tables after AST edits (slot ids are renumbered in
  // literal order).
  void Reindex();

 private:
  Schema schema_;
  std::vector<Query> queries_;
  std::vector<ParamSlot> slots_;
};

// Calls fn(slot_id, literal) for every literal of q in render order.
void ForEachLiteral(Query& q, const std::function<void(int&, Decimal&)>& fn);

// Same statements, clause shapes, attributes and operators. Literal values
// are compared only when compare_values is true. Slot ids are ignored.
bool StructurallyEqual(const QueryLog& a, const QueryLog& b,
                       bool compare_values);
bool StructurallyEqual(const Query& a, const Query& b, bool compare_values);
bool StructurallyEqual(const Predicate& a, const Predicate& b,
                       bool compare_values);

}  // namespace logrepair
