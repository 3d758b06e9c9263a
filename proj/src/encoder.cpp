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

#include "logrepair/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <unordered_map>

#include "logrepair/error.hpp"
#include "logrepair/milp/lp_format.hpp"
#include "logrepair/milp/solver.hpp"

namespace logrepair {

using milp::Sense;

namespace {

void MergeTerms(std::vector<std::pair<int, double>>* terms) {
  std::sort(terms->begin(), terms->end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  size_t out = 0;
  for (size_t i = 0; i < terms->size();) {
    int id = (*terms)[i].first;
    double sum = 0;
    for (; i < terms->size() && (*terms)[i].first == id; ++i) sum += (*terms)[i].second;
    if (sum != 0) (*terms)[out++] = {id, sum};
  }
  terms->resize(out);
}

}  // namespace

Value Value::Const(Decimal d) {
  Value v;
  v.c = d.ToDouble();
  v.lo = v.hi = v.c;
  v.exact = d;
  return v;
}

Value Value::Var(int id, double lo, double hi) {
  Value v;
  v.terms = {{id, 1.0}};
  v.lo = lo;
  v.hi = hi;
  return v;
}

Value operator+(const Value& a, const Value& b) {
  Value v;
  v.c = a.c + b.c;
  v.terms = a.terms;
  v.terms.insert(v.terms.end(), b.terms.begin(), b.terms.end());
  MergeTerms(&v.terms);
  v.lo = a.lo + b.lo;
  v.hi = a.hi + b.hi;
  if (a.exact && b.exact) v.exact = *a.exact + *b.exact;
  return v;
}

Value operator-(const Value& a, const Value& b) {
  return a + ScaleReal(b, -1.0) ;
}

Value ScaleReal(const Value& a, double k) {
  Value v;
  v.c = a.c * k;
  for (const auto& [id, coef] : a.terms) {
    if (coef * k != 0) v.terms.push_back({id, coef * k});
  }
  v.lo = k >= 0 ? a.lo * k : a.hi * k;
  v.hi = k >= 0 ? a.hi * k : a.lo * k;
  if (a.exact && k == std::round(k) && std::abs(k) < 1e12) {
    v.exact = *a.exact * Decimal::FromInt(static_cast<int64_t>(k));
  }
  return v;
}

Value Scale(const Value& a, Decimal k) {
  Value v = ScaleReal(a, k.ToDouble());
  v.exact.reset();
  if (a.exact) {
    v.exact = *a.exact * k;
    if (v.is_const()) v.c = v.lo = v.hi = v.exact->ToDouble();
  }
  return v;
}

RepairScope RepairScope::All(const QueryLog& log) {
  return Window(1, log.size());
}

RepairScope RepairScope::Window(int first, int last) {
  RepairScope s;
  for (int i = first; i <= last; ++i) s.window.push_back(i);
  return s;
}

std::set<int> RepairScope::FreeSlots(const QueryLog& log) const {
  std::set<int> out;
  if (free_slots) {
    for (int s : *free_slots) {
      if (!log.slot(s).predicate_lhs) out.insert(s);
    }
    return out;
  }
  for (int q : window) {
    if (q < 1 || q > log.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "repair window names query " + std::to_string(q));
    }
    for (int s : log.SlotsOfQuery(q)) {
      if (!log.slot(s).predicate_lhs) out.insert(s);
    }
  }
  return out;
}

const char* RepairStatusName(RepairStatus s) {
  switch (s) {
    case RepairStatus::kRepaired: return "Repaired";
    case RepairStatus::kInfeasible: return "Infeasible";
    case RepairStatus::kTimedOut: return "TimedOut";
    case RepairStatus::kNoRepairFound: return "NoRepairFound";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// EncodingContext

EncodingContext::EncodingContext(milp::MilpModel* model, const QueryLog* log,
                                 Decimal big_m, Decimal epsilon, bool fold)
    : model_(model),
      log_(log),
      big_m_(big_m),
      epsilon_(epsilon),
      fold_(fold),
      slots_(log ? log->slots().size() : 0) {}

int EncodingContext::NewBinary(const std::string& name, bool predicate) {
  std::string n = name;
  if (model_->FindVar(n) >= 0) n += "_" + std::to_string(++counter_);
  if (predicate) ++predicate_binaries_;
  return model_->AddBinary(n);
}

Value EncodingContext::Input(Decimal v, const std::string& name) {
  if (fold_) return Value::Const(v);
  std::string n = name;
  if (model_->FindVar(n) >= 0) n += "_" + std::to_string(++counter_);
  double d = v.ToDouble();
  Value out = Value::Var(model_->AddContinuous(n, d, d), d, d);
  out.exact = v;
  return out;
}

Value EncodingContext::Slot(int slot_id) const {
  if (slot_id >= 0 && slot_id < static_cast<int>(slots_.size()) && slots_[slot_id]) {
    return *slots_[slot_id];
  }
  return Value::Const(log_->SlotValue(slot_id));
}

void EncodingContext::SetSlot(int slot_id, Value v) { slots_.at(slot_id) = std::move(v); }

bool EncodingContext::IsFree(int slot_id) const {
  return slot_id >= 0 && slot_id < static_cast<int>(slots_.size()) &&
         slots_[slot_id].has_value();
}

void EncodingContext::AddRow(const Value& lhs, Sense op, double rhs,
                             const std::string& tag) {
  std::vector<std::pair<int, double>> terms = lhs.terms;
  MergeTerms(&terms);
  double r = rhs - lhs.c;
  if (terms.empty()) {
    const double tol = 1e-9 * std::max(1.0, std::abs(rhs));
    bool ok = op == Sense::kLe   ? 0 <= r + tol
              : op == Sense::kGe ? 0 >= r - tol
                                 : std::abs(r) <= tol;
    if (!ok) infeasible_ = true;
    return;
  }
  model_->AddConstraint(std::move(terms), op, r, tag);
}

void EncodingContext::Pin(const Value& v, Decimal target, const std::string& tag) {
  if (v.is_const()) {
    bool ok = v.exact ? *v.exact == target
                      : std::abs(v.c - target.ToDouble()) <= 1e-9 * std::max(1.0, std::abs(v.c));
    if (!ok) infeasible_ = true;
    return;
  }
  double t = target.ToDouble();
  if (t < v.lo - 1e-9 * std::max(1.0, std::abs(t)) ||
      t > v.hi + 1e-9 * std::max(1.0, std::abs(t))) {
    infeasible_ = true;
    return;
  }
  AddRow(v, Sense::kEq, t, tag);
}

void EncodingContext::ImplyGe(const Value& f, const Value& z, double l,
                              const std::string& tag) {
  if (l <= f.lo) return;
  // f >= l - (1 - z)(l - f.lo)
  AddRow(f - ScaleReal(z, l - f.lo), Sense::kGe, f.lo, tag);
}

void EncodingContext::ImplyLe(const Value& f, const Value& z, double u,
                              const std::string& tag) {
  if (u >= f.hi) return;
  // f <= u + (1 - z)(f.hi - u)
  AddRow(f + ScaleReal(z, f.hi - u), Sense::kLe, f.hi, tag);
}

Value EncodingContext::Materialize(const Value& v, const std::string& name) {
  if (v.terms.size() <= 1) return v;
  std::string n = name;
  if (model_->FindVar(n) >= 0) n += "_" + std::to_string(++counter_);
  int id = model_->AddContinuous(n, v.lo, v.hi);
  Value out = Value::Var(id, v.lo, v.hi);
  out.exact = v.exact;
  AddRow(out - v, Sense::kEq, 0, n + "_def");
  return out;
}

Value EncodingContext::EvalExpr(const LinExpr& e, const std::vector<Value>& attrs,
                                int64_t id, std::vector<int>* bilinear) {
  Value sum = e.constant_slot >= 0 ? Slot(e.constant_slot) : Value::Const(e.constant);
  for (const Term& t : e.terms) {
    Value v = t.attr == kIdAttr ? Value::Const(Decimal::FromInt(id)) : attrs.at(t.attr);
    if (t.slot >= 0 && IsFree(t.slot)) {
      if (v.exact) {
        Value p = Slot(t.slot);
        sum = sum + ScaleReal(p, v.exact->ToDouble());
        continue;
      }
      if (bilinear) bilinear->push_back(t.slot);
    }
    sum = sum + Scale(v, t.coeff);
  }
  if (fold_ && sum.exact && sum.is_const()) return Value::Const(*sum.exact);
  return sum;
}

Value EncodingContext::EncodeAtom(const Predicate& p, const std::vector<Value>& attrs,
                                  int64_t id, const std::string& name) {
  Value lhs = EvalExpr(p.lhs, attrs, id, nullptr);
  Value rhs = p.rhs_slot >= 0 ? Slot(p.rhs_slot) : Value::Const(p.rhs);
  if (fold_ && lhs.is_const() && rhs.is_const() && lhs.exact && rhs.exact) {
    Decimal e = *lhs.exact, r = *rhs.exact;
    bool truth = false;
    switch (p.op) {
      case CmpOp::kLt: truth = e < r; break;
      case CmpOp::kLe: truth = e <= r; break;
      case CmpOp::kEq: truth = e == r; break;
      case CmpOp::kGe: truth = e >= r; break;
      case CmpOp::kGt: truth = e > r; break;
    }
    return Value::Const(Decimal::FromInt(truth ? 1 : 0));
  }
  Value d = lhs - rhs;
  const double eps = epsilon_.ToDouble();
  int b = NewBinary("b_" + name, true);
  Value bv = Value::Var(b, 0, 1);
  Value not_b = Value::Const(Decimal::FromInt(1)) - bv;
  CmpOp op = p.op;
  if (op == CmpOp::kLe || op == CmpOp::kLt) {
    d = ScaleReal(d, -1.0);
    op = op == CmpOp::kLe ? CmpOp::kGe : CmpOp::kGt;
  }
  switch (op) {
    case CmpOp::kGe:
      ImplyGe(d, bv, 0, name + "_t");
      ImplyLe(d, not_b, -eps, name + "_f");
      break;
    case CmpOp::kGt:
      ImplyGe(d, bv, eps, name + "_t");
      ImplyLe(d, not_b, 0, name + "_f");
      break;
    case CmpOp::kEq: {
      // True band of a quarter quantum keeps grid values exact under
      // floating-point noise; false sides sit epsilon away.
      const double delta = Decimal::Quantum().ToDouble() / 4;
      ImplyGe(d, bv, -delta, name + "_tl");
      ImplyLe(d, bv, delta, name + "_th");
      int g = NewBinary("g_" + name, false);
      Value gv = Value::Var(g, 0, 1);
      ImplyGe(d, gv - bv, eps, name + "_fh");
      ImplyLe(d, not_b - gv, -eps, name + "_fl");
      break;
    }
    default:
      break;
  }
  return bv;
}

Value EncodingContext::Combine(bool is_and, std::vector<Value> kids,
                               const std::string& name, bool force_var) {
  std::vector<Value> live;
  for (Value& k : kids) {
    if (k.is_const()) {
      bool one = k.c > 0.5;
      if (is_and && !one) {
        if (!force_var) return Value::Const(Decimal::FromInt(0));
        live.clear();
        live.push_back(k);
        break;
      }
      if (!is_and && one) {
        if (!force_var) return Value::Const(Decimal::FromInt(1));
        live.clear();
        live.push_back(k);
        break;
      }
      continue;
    }
    live.push_back(std::move(k));
  }
  if (!force_var) {
    if (live.empty()) return Value::Const(Decimal::FromInt(is_and ? 1 : 0));
    if (live.size() == 1) return live[0];
  }
  int a = NewBinary("x_" + name, true);
  Value av = Value::Var(a, 0, 1);
  if (live.empty()) {
    model_->Fix(a, is_and ? 1 : 0);
    av.exact = Decimal::FromInt(is_and ? 1 : 0);
    return av;
  }
  Value sum = Value::Const(Decimal());
  bool all_exact = true;
  for (const Value& k : live) {
    // AND: a <= k; OR: a >= k.
    AddRow(av - k, is_and ? Sense::kLe : Sense::kGe, 0, name + (is_and ? "_and" : "_or"));
    sum = sum + k;
    all_exact = all_exact && k.exact.has_value();
  }
  if (is_and) {
    AddRow(av - sum, Sense::kGe, -static_cast<double>(live.size() - 1), name + "_and_all");
  } else {
    AddRow(av - sum, Sense::kLe, 0, name + "_or_any");
  }
  if (all_exact) {
    bool v = is_and;
    for (const Value& k : live) {
      bool one = *k.exact > Decimal();
      v = is_and ? (v && one) : (v || one);
    }
    av.exact = Decimal::FromInt(v ? 1 : 0);
  }
  return av;
}

Value EncodingContext::encode_predicate(const Predicate& p,
                                        const std::vector<Value>& attrs,
                                        int64_t id, const std::string& name) {
  switch (p.kind) {
    case Predicate::Kind::kTrue: return Value::Const(Decimal::FromInt(1));
    case Predicate::Kind::kFalse: return Value::Const(Decimal::FromInt(0));
    case Predicate::Kind::kAtom: {
      Value v = EncodeAtom(p, attrs, id, name);
      return v;
    }
    case Predicate::Kind::kAnd:
    case Predicate::Kind::kOr: {
      std::vector<Value> kids;
      for (size_t i = 0; i < p.children.size(); ++i) {
        kids.push_back(encode_predicate(p.children[i], attrs, id,
                                        name + "_" + std::to_string(i)));
      }
      return Combine(p.kind == Predicate::Kind::kAnd, std::move(kids), name + "n",
                     false);
    }
  }
  return Value::Const(Decimal());
}

Value EncodingContext::encode_match(const Predicate& p, const std::vector<Value>& attrs,
                                    int64_t id, const Value& dead,
                                    const std::string& name) {
  std::vector<Value> kids;
  if (p.kind == Predicate::Kind::kAnd) {
    for (size_t i = 0; i < p.children.size(); ++i) {
      kids.push_back(encode_predicate(p.children[i], attrs, id,
                                      name + "_" + std::to_string(i)));
    }
  } else if (p.kind != Predicate::Kind::kTrue) {
    kids.push_back(encode_predicate(p, attrs, id, name + "_0"));
  }
  if (!dead.is_const() || dead.c > 0.5) {
    kids.push_back(Value::Const(Decimal::FromInt(1)) - dead);
  }
  return Combine(true, std::move(kids), name, !fold_);
}

Value EncodingContext::Select(const Value& x, const Value& a, const Value& b,
                              const std::string& name) {
  if (x.is_const()) return x.c > 0.5 ? a : b;
  const Value one = Value::Const(Decimal::FromInt(1));
  Value u, v;
  if (a.is_const()) {
    u = ScaleReal(x, a.c);
    u.exact.reset();
  } else {
    std::string n = "u_" + name;
    if (model_->FindVar(n) >= 0) n += "_" + std::to_string(++counter_);
    double lo = std::min(0.0, a.lo), hi = std::max(0.0, a.hi);
    u = Value::Var(model_->AddContinuous(n, lo, hi), lo, hi);
    // u = x * a (McCormick, exact for binary x)
    AddRow(u - a + ScaleReal(one - x, a.lo), Sense::kLe, 0, n + "_1");
    AddRow(u - a + ScaleReal(one - x, a.hi), Sense::kGe, 0, n + "_2");
    AddRow(u - ScaleReal(x, a.hi), Sense::kLe, 0, n + "_3");
    AddRow(u - ScaleReal(x, a.lo), Sense::kGe, 0, n + "_4");
  }
  if (b.is_const()) {
    v = ScaleReal(one - x, b.c);
    v.exact.reset();
  } else {
    std::string n = "v_" + name;
    if (model_->FindVar(n) >= 0) n += "_" + std::to_string(++counter_);
    double lo = std::min(0.0, b.lo), hi = std::max(0.0, b.hi);
    v = Value::Var(model_->AddContinuous(n, lo, hi), lo, hi);
    // v = (1 - x) * b
    AddRow(v - b + ScaleReal(x, b.lo), Sense::kLe, 0, n + "_1");
    AddRow(v - b + ScaleReal(x, b.hi), Sense::kGe, 0, n + "_2");
    AddRow(v - ScaleReal(one - x, b.hi), Sense::kLe, 0, n + "_3");
    AddRow(v - ScaleReal(one - x, b.lo), Sense::kGe, 0, n + "_4");
  }
  Value out = u + v;
  out.lo = std::max(out.lo, std::min(a.lo, b.lo));
  out.hi = std::min(out.hi, std::max(a.hi, b.hi));
  out.exact.reset();
  if (x.exact) out.exact = *x.exact > Decimal() ? a.exact : b.exact;
  return out;
}

std::vector<Value> EncodingContext::encode_update(const Query& q,
                                                  const std::vector<Value>& in,
                                                  int64_t id, const Value& x,
                                                  const std::vector<bool>* encoded,
                                                  const std::string& name) {
  std::vector<Value> out = in;
  for (const SetClause& s : q.set) {
    if (encoded && !(*encoded)[s.attr]) continue;
    Value mu = EvalExpr(s.expr, in, id, nullptr);
    if (mu.terms.size() > 4) mu = Materialize(mu, "mu_" + name + "_a" + std::to_string(s.attr));
    out[s.attr] = Select(x, mu, in[s.attr], name + "_a" + std::to_string(s.attr));
  }
  return out;
}

std::vector<Value> EncodingContext::encode_delete(const std::vector<Value>& in,
                                                  const Value& x,
                                                  const std::vector<bool>* encoded,
                                                  const std::string& name) {
  std::vector<Value> out = in;
  const Value sentinel = Value::Const(delete_sentinel());
  for (size_t a = 0; a < in.size(); ++a) {
    if (encoded && !(*encoded)[a]) continue;
    out[a] = Select(x, sentinel, in[a], name + "_a" + std::to_string(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// basic_repair

std::optional<TupleRow> pinned_target(const Relation& dn, const ComplaintSet& c,
                                      int64_t id) {
  if (const Complaint* k = c.ForTuple(id)) {
    if (!k->expected) return std::nullopt;
    TupleRow row = *k->expected;
    row.id = id;
    return row;
  }
  if (const TupleRow* r = dn.Find(id)) return *r;
  return std::nullopt;
}

namespace {

struct Interval {
  double lo = 0;
  double hi = 0;
  bool empty = true;

  void Add(double v) {
    if (empty) {
      lo = hi = v;
      empty = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void Add(const Interval& o) {
    if (o.empty) return;
    Add(o.lo);
    Add(o.hi);
  }
};

Interval Mul(const Interval& a, double lo, double hi) {
  Interval r;
  for (double x : {a.lo, a.hi}) {
    for (double y : {lo, hi}) r.Add(x * y);
  }
  return r;
}

struct Ranges {
  std::vector<Interval> attr;   // over every state and candidate repair
  std::vector<Interval> slot;   // admissible values of free slots
  std::vector<double> weight;   // objective weight per slot
  Interval id;
  Decimal big_m;
};

Interval ExprRange(const LinExpr& e, const std::vector<Interval>& attr,
                   const Interval& id, const QueryLog& log,
                   const std::vector<Interval>& slot, const std::set<int>& free) {
  auto lit = [&](int s, Decimal v) {
    Interval r;
    if (s >= 0 && free.count(s)) return slot[s];
    r.Add(v.ToDouble());
    return r;
  };
  Interval sum = lit(e.constant_slot, e.constant);
  (void)log;
  for (const Term& t : e.terms) {
    const Interval& a = t.attr == kIdAttr ? id : attr[t.attr];
    Interval k = lit(t.slot, t.coeff);
    Interval p = Mul(a, k.lo, k.hi);
    sum.lo += p.lo;
    sum.hi += p.hi;
  }
  return sum;
}

Ranges ComputeRanges(const QueryLog& log, const Trace& trace, const ComplaintSet& c,
                     const std::set<int>& free, bool normalize) {
  const int w = log.schema().width();
  Ranges r;
  r.attr.resize(w);
  for (const Relation& s : trace.states) {
    for (const auto& [id, row] : s.rows()) {
      r.id.Add(static_cast<double>(id));
      for (int a = 0; a < w; ++a) r.attr[a].Add(row.values[a].ToDouble());
    }
  }
  const auto& hint = trace.states[0].domain_hint();
  for (int a = 0; a < w && a < static_cast<int>(hint.size()); ++a) {
    r.attr[a].Add(hint[a].lo.ToDouble());
    r.attr[a].Add(hint[a].hi.ToDouble());
  }
  for (const Complaint& k : c.complaints) {
    if (!k.expected) continue;
    r.id.Add(static_cast<double>(k.tuple_id()));
    for (int a = 0; a < w; ++a) r.attr[a].Add(k.expected->values[a].ToDouble());
  }
  for (auto& iv : r.attr) {
    if (iv.empty) iv.Add(0.0);
  }
  if (r.id.empty) r.id.Add(1.0);
  const std::vector<Interval> base = r.attr;

  r.slot.resize(log.slots().size());
  r.weight.assign(log.slots().size(), 1.0);
  // Slots that do not depend on the propagated ranges.
  for (int s : free) {
    const ParamSlot& ps = log.slot(s);
    double orig = ps.original_value.ToDouble();
    Interval iv;
    iv.Add(orig);
    const Query& q = log.at(ps.query_index);
    switch (ps.kind) {
      case SlotKind::kSetAdditive: {
        // Which SET clause owns this literal?
        for (const SetClause& sc : q.set) {
          if (sc.expr.constant_slot != s) continue;
          const Interval& t = base[sc.attr];
          double width = std::max(1.0, t.hi - t.lo);
          if (sc.expr.HasAttributes()) {
            iv.Add(orig - width);
            iv.Add(orig + width);
          } else {
            iv.Add(t);
            iv.Add(t.lo - 1);
            iv.Add(t.hi + 1);
          }
        }
        break;
      }
      case SlotKind::kSetCoefficient: {
        double span = 2 * (std::abs(orig) + 1);
        iv.Add(orig - span);
        iv.Add(orig + span);
        for (const SetClause& sc : q.set) {
          for (const Term& t : sc.expr.terms) {
            if (t.slot != s) continue;
            const Interval& a = t.attr == kIdAttr ? r.id : base[t.attr];
            r.weight[s] = std::max({1.0, std::abs(a.lo), std::abs(a.hi)});
          }
        }
        break;
      }
      case SlotKind::kInsertValue: {
        for (size_t a = 0; a < q.value_slots.size(); ++a) {
          if (q.value_slots[a] == s) iv.Add(base[a]);
        }
        break;
      }
      case SlotKind::kWhereConstant:
        break;  // below
    }
    r.slot[s] = iv;
  }
  // Forward pass: every value a state can hold under any admissible repair.
  for (const Query& q : log.queries()) {
    if (q.kind == QueryKind::kUpdate) {
      std::vector<Interval> next = r.attr;
      for (const SetClause& sc : q.set) {
        next[sc.attr].Add(ExprRange(sc.expr, r.attr, r.id, log, r.slot, free));
      }
      r.attr = std::move(next);
    } else if (q.kind == QueryKind::kInsert) {
      for (size_t a = 0; a < q.values.size(); ++a) {
        int s = q.value_slots[a];
        if (s >= 0 && free.count(s)) r.attr[a].Add(r.slot[s]);
      }
    }
  }
  // WHERE constants only matter within the range their left side can take.
  std::function<void(const Predicate&)> visit = [&](const Predicate& p) {
    if (p.kind == Predicate::Kind::kAtom) {
      if (p.rhs_slot >= 0 && free.count(p.rhs_slot)) {
        Interval lhs = ExprRange(p.lhs, r.attr, r.id, log, r.slot, free);
        Interval& iv = r.slot[p.rhs_slot];
        iv.Add(lhs.lo - 1);
        iv.Add(lhs.hi + 1);
      }
      return;
    }
    for (const auto& ch : p.children) visit(ch);
  };
  for (const Query& q : log.queries()) visit(q.where);

  double top = 0;
  for (const auto& iv : r.attr) top = std::max(top, iv.hi);
  for (int a = 0; a < w && a < static_cast<int>(hint.size()); ++a) {
    top = std::max(top, hint[a].hi.ToDouble());
  }
  r.big_m = Decimal::FromInt(static_cast<int64_t>(std::ceil(top)) + 1);
  if (normalize) {
    for (int s : free) {
      r.weight[s] /= std::max(1.0, std::abs(log.slot(s).original_value.ToDouble()));
    }
  }
  return r;
}

struct TupleState {
  bool exists = false;
  bool gone = false;  // deleted for sure
  std::vector<Value> vals;
  Value dead = Value::Const(Decimal());
};

struct SlotVars {
  int slot = -1;
  int dp = -1;
  int dm = -1;
  double weight = 1;
};

struct Built {
  milp::MilpModel model;
  std::vector<SlotVars> slot_vars;
  std::vector<int> bilinear;
  std::vector<int> soft_indicators;
  bool infeasible = false;
  ModelSize size;
  std::vector<int64_t> tuples;
};

std::string TupleName(int64_t id) { return "t" + std::to_string(id); }

void Build(const QueryLog& log, const Trace& trace, const ComplaintSet& c,
           const std::set<int>& free, const std::vector<int64_t>& tuples,
           const EncodeOptions& opt, Built* out) {
  const int w = log.schema().width();
  Ranges ranges = ComputeRanges(log, trace, c, free, opt.normalize);
  const bool fold = opt.fold_constants || opt.encoded_attrs.has_value();
  milp::MilpModel& m = out->model;
  m.config = opt.solver;
  m.config.time_limit_secs = opt.time_limit_secs;
  EncodingContext ctx(&m, &log, ranges.big_m, opt.epsilon, fold);

  for (int s : free) {
    const ParamSlot& ps = log.slot(s);
    double orig = ps.original_value.ToDouble();
    const Interval& iv = ranges.slot[s];
    SlotVars sv;
    sv.slot = s;
    sv.weight = ranges.weight[s];
    Value p = Value::Const(ps.original_value);
    p.exact.reset();
    std::string base = "p" + std::to_string(s) + "_q" + std::to_string(ps.query_index);
    if (iv.hi > orig) {
      sv.dp = m.AddContinuous(base + "_up", 0, iv.hi - orig);
      p = p + Value::Var(sv.dp, 0, iv.hi - orig);
    }
    if (iv.lo < orig) {
      sv.dm = m.AddContinuous(base + "_dn", 0, orig - iv.lo);
      p = p - Value::Var(sv.dm, 0, orig - iv.lo);
    }
    p.exact.reset();
    ctx.SetSlot(s, p);
    if (opt.objective == EncodeOptions::Objective::kManhattan) {
      if (sv.dp >= 0) m.AddObjective(sv.dp, sv.weight);
      if (sv.dm >= 0) m.AddObjective(sv.dm, sv.weight);
    }
    out->slot_vars.push_back(sv);
  }

  int start = log.size() + 1;
  for (int s : free) start = std::min(start, log.slot(s).query_index);
  if (start > log.size()) start = log.size() + 1;

  std::vector<bool> enc(w, true);
  if (opt.encoded_attrs) enc = *opt.encoded_attrs;
  const std::vector<bool>* enc_ptr = opt.encoded_attrs ? &enc : nullptr;

  std::map<int64_t, int> inserted_at;  // id -> query index
  for (int i = 1; i <= log.size(); ++i) {
    if (trace.inserted_ids[i - 1]) inserted_at[*trace.inserted_ids[i - 1]] = i;
  }

  std::map<int64_t, TupleState> st;
  std::map<int64_t, const TupleRow*> last_row;  // non-encoded attributes
  const Relation& s0 = trace.states[start - 1];
  for (int64_t id : tuples) {
    TupleState& ts = st[id];
    if (const TupleRow* row = s0.Find(id)) {
      ts.exists = true;
      ts.vals.resize(w);
      for (int a = 0; a < w; ++a) {
        if (enc[a]) {
          ts.vals[a] = ctx.Input(row->values[a], TupleName(id) + "_a" + std::to_string(a) + "_s" +
                                                     std::to_string(start - 1));
        }
      }
      last_row[id] = row;
    } else {
      auto it = inserted_at.find(id);
      if (it == inserted_at.end() || it->second < start) ts.gone = true;
    }
  }

  for (int i = start; i <= log.size(); ++i) {
    const Query& q = log.at(i);
    const Relation& before = trace.states[i - 1];
    const std::string qn = "q" + std::to_string(i);
    if (q.kind == QueryKind::kInsert) {
      if (!trace.inserted_ids[i - 1]) continue;
      int64_t id = *trace.inserted_ids[i - 1];
      auto it = st.find(id);
      if (it == st.end()) continue;
      TupleState& ts = it->second;
      ts.exists = true;
      ts.vals.resize(w);
      std::vector<int> free_here;
      for (int a = 0; a < w; ++a) {
        int s = q.value_slots[a];
        if (s >= 0 && ctx.IsFree(s)) {
          ts.vals[a] = ctx.Slot(s);
          free_here.push_back(s);
        } else if (enc[a]) {
          ts.vals[a] = ctx.Input(q.values[a], TupleName(id) + "_a" + std::to_string(a) + "_" + qn);
        }
      }
      if (!free_here.empty()) {
        // x = 1 keeps every literal of the statement.
        const Value one = Value::Const(Decimal::FromInt(1));
        int x = m.AddBinary("x_" + qn + "_" + TupleName(id));
        ++out->size.predicate_binaries;
        Value xv = Value::Var(x, 0, 1);
        for (int s : free_here) {
          Value p = ctx.Slot(s);
          Value d = p - Value::Const(log.SlotValue(s));
          ctx.AddRow(d + ScaleReal(xv, d.hi), Sense::kLe, d.hi, qn + "_keep_hi");
          ctx.AddRow(d + ScaleReal(xv, d.lo), Sense::kGe, d.lo, qn + "_keep_lo");
        }
      }
      continue;
    }
    // Attribute slicing: an UPDATE that writes nothing encoded is dropped.
    if (q.kind == QueryKind::kUpdate && opt.encoded_attrs) {
      bool writes = false;
      for (const SetClause& sc : q.set) writes = writes || enc[sc.attr];
      if (!writes) continue;
    }
    for (int64_t id : tuples) {
      TupleState& ts = st[id];
      if (const TupleRow* row = before.Find(id)) last_row[id] = row;
      if (!ts.exists || ts.gone) continue;
      std::vector<Value> attrs(w);
      const TupleRow* lr = last_row.count(id) ? last_row[id] : nullptr;
      for (int a = 0; a < w; ++a) {
        if (enc[a]) {
          attrs[a] = ts.vals[a];
        } else {
          attrs[a] = Value::Const(lr ? lr->values[a] : Decimal());
        }
      }
      const std::string name = qn + "_" + TupleName(id);
      std::vector<int> bilinear;
      if (q.kind == QueryKind::kUpdate) {
        for (const SetClause& sc : q.set) {
          if (enc[sc.attr]) ctx.EvalExpr(sc.expr, attrs, id, &bilinear);
        }
        if (!bilinear.empty()) {
          out->bilinear.insert(out->bilinear.end(), bilinear.begin(), bilinear.end());
          continue;
        }
      }
      Value x = ctx.encode_match(q.where, attrs, id, ts.dead, name);
      if (x.is_const() && x.c < 0.5) continue;
      if (q.kind == QueryKind::kUpdate) {
        std::vector<Value> next = ctx.encode_update(q, attrs, id, x, enc_ptr, name);
        for (int a = 0; a < w; ++a) {
          if (enc[a]) ts.vals[a] = std::move(next[a]);
        }
      } else {
        if (x.is_const()) {
          ts.gone = true;
          continue;
        }
        // Folded layout: values stay as they are and the dead flag, which
        // every later match conjoins, keeps the tuple out of later queries.
        if (!fold) {
          std::vector<Value> next = ctx.encode_delete(attrs, x, enc_ptr, name);
          for (int a = 0; a < w; ++a) {
            if (enc[a]) ts.vals[a] = std::move(next[a]);
          }
        }
        ts.dead = ts.dead + x;
        ts.dead.lo = 0;
        ts.dead.hi = 1;
        if (ts.dead.is_const() && ts.dead.c > 0.5) ts.gone = true;
      }
    }
  }
  if (!out->bilinear.empty()) return;

  std::set<int64_t> soft(opt.soft_tuples.begin(), opt.soft_tuples.end());
  const Relation& dn = trace.final_state();
  const Value one = Value::Const(Decimal::FromInt(1));
  Value soft_sum = Value::Const(Decimal());
  for (int64_t id : tuples) {
    TupleState& ts = st[id];
    std::optional<TupleRow> target = pinned_target(dn, c, id);
    const std::string tn = "pin_" + TupleName(id);
    if (soft.count(id)) {
      // z = 0 forces the dirty final value; the refinement counts z.
      int z = m.AddBinary("z_" + TupleName(id));
      out->soft_indicators.push_back(z);
      Value zv = Value::Var(z, 0, 1);
      soft_sum = soft_sum + zv;
      if (ts.gone || !ts.exists) {
        if (target) m.Fix(z, 1);
        continue;
      }
      if (!target) {
        ctx.AddRow(one - ts.dead - zv, Sense::kLe, 0, tn + "_gone");
        continue;
      }
      ctx.AddRow(ts.dead - zv, Sense::kLe, 0, tn + "_live");
      for (int a = 0; a < w; ++a) {
        if (!enc[a]) continue;
        Value f = ts.vals[a] - Value::Const(target->values[a]);
        ctx.ImplyGe(f, one - zv, 0, tn + "_lo");
        ctx.ImplyLe(f, one - zv, 0, tn + "_hi");
      }
      continue;
    }
    if (ts.gone || !ts.exists) {
      if (target) {
        out->infeasible = true;
        return;
      }
      continue;
    }
    if (!target) {
      ctx.AddRow(ts.dead, Sense::kEq, 1, tn + "_deleted");
      for (int a = 0; a < w && !fold; ++a) {
        if (enc[a]) ctx.Pin(ts.vals[a], ctx.delete_sentinel(), tn);
      }
      continue;
    }
    if (!ts.dead.is_const()) ctx.AddRow(ts.dead, Sense::kEq, 0, tn + "_alive");
    for (int a = 0; a < w; ++a) {
      if (enc[a]) ctx.Pin(ts.vals[a], target->values[a], tn + "_a" + std::to_string(a));
    }
  }
  if (!soft.empty()) {
    if (opt.objective == EncodeOptions::Objective::kSoftCount) {
      for (int z : out->soft_indicators) m.AddObjective(z, 1);
    } else if (opt.soft_cap && !soft_sum.is_const()) {
      ctx.AddRow(soft_sum, Sense::kLe, *opt.soft_cap, "soft_cap");
    }
  }
  out->infeasible = out->infeasible || ctx.trivially_infeasible();
  out->size.vars = m.num_vars();
  out->size.binaries = m.num_binaries();
  out->size.constraints = m.num_constraints();
  out->size.predicate_binaries += ctx.predicate_binaries();
}

bool MeetsTargets(const Relation& final_state, const Relation& dn, const ComplaintSet& c,
                  const std::vector<int64_t>& tuples, const std::set<int64_t>& soft) {
  for (int64_t id : tuples) {
    if (soft.count(id)) continue;
    std::optional<TupleRow> target = pinned_target(dn, c, id);
    const TupleRow* row = final_state.Find(id);
    if (!target) {
      if (row) return false;
    } else if (!row || row->values != target->values) {
      return false;
    }
  }
  return true;
}

}  // namespace

RepairResult basic_repair_traced(const QueryLog& log, const Trace& trace,
                                 const ComplaintSet& c, const RepairScope& scope,
                                 const std::optional<std::vector<int64_t>>& tuple_filter,
                                 const EncodeOptions& options) {
  c.Validate();
  const Relation& d0 = trace.states[0];
  const Relation& dn = trace.final_state();
  std::set<int64_t> known;
  for (const auto& [id, row] : d0.rows()) known.insert(id);
  for (const auto& id : trace.inserted_ids) {
    if (id) known.insert(*id);
  }
  for (const Complaint& k : c.complaints) {
    if (!known.count(k.tuple_id())) {
      throw Error(ErrorCode::kUnknownComplaintTarget,
                  "no query creates tuple " + std::to_string(k.tuple_id()));
    }
  }
  (void)apply_complaints(dn, c);  // UnknownTarget checks

  RepairResult result;
  result.repaired_log = log;
  std::set<int64_t> soft(options.soft_tuples.begin(), options.soft_tuples.end());
  std::vector<int64_t> tuples;
  if (tuple_filter) {
    std::set<int64_t> pick(tuple_filter->begin(), tuple_filter->end());
    pick.insert(soft.begin(), soft.end());
    for (int64_t id : pick) {
      if (known.count(id)) tuples.push_back(id);
    }
  } else {
    tuples.assign(known.begin(), known.end());
  }
  result.encoded_tuples = tuples;

  std::set<int> free = scope.FreeSlots(log);
  auto identity = [&](RepairResult& r) {
    bool meets = MeetsTargets(dn, dn, c, tuples, soft);
    r.status = meets ? RepairStatus::kRepaired : RepairStatus::kInfeasible;
    r.solver_status = meets ? milp::Status::kOptimal : milp::Status::kInfeasible;
    r.verified = meets;
    return r;
  };
  if (c.empty() && soft.empty()) {
    return identity(result);
  }
  // An INSERT literal only reaches the row it inserts.
  const std::set<int64_t> encoded(tuples.begin(), tuples.end());
  std::erase_if(free, [&](int s) {
    const ParamSlot& ps = log.slot(s);
    if (ps.kind != SlotKind::kInsertValue) return false;
    const auto& id = trace.inserted_ids[ps.query_index - 1];
    return !id || !encoded.count(*id);
  });
  if (free.empty()) {
    identity(result);
    if (!result.ok()) result.note = "no free slot reaches an encoded tuple";
    return result;
  }

  Built built;
  for (;;) {
    built = Built();
    Build(log, trace, c, free, tuples, options, &built);
    if (built.bilinear.empty()) break;
    for (int s : built.bilinear) {
      if (free.erase(s)) result.skipped_slots.push_back(s);
    }
  }
  std::sort(result.skipped_slots.begin(), result.skipped_slots.end());
  result.model_size = built.size;
  if (free.empty()) {
    identity(result);
    if (!result.ok()) result.note = "no free slots";
    return result;
  }
  if (built.infeasible) {
    result.status = RepairStatus::kInfeasible;
    result.note = "pinned targets contradict fixed values";
    return result;
  }
  if (!options.export_lp_path.empty()) {
    std::ofstream f(options.export_lp_path);
    if (!f) throw Error(ErrorCode::kIo, "cannot write " + options.export_lp_path);
    f << milp::export_lp(built.model);
  }

  milp::Solution sol = milp::solve(built.model);
  ++result.solves;
  result.solver_status = sol.status;
  result.stats = sol.stats;
  if (!sol.has_assignment()) {
    result.status = sol.status == milp::Status::kTimedOut ? RepairStatus::kTimedOut
                                                          : RepairStatus::kInfeasible;
    if (sol.status == milp::Status::kTimedOut) result.note = "limit: " + sol.stats.limit_reason;
    return result;
  }

  double objective = 0;
  for (const SlotVars& sv : built.slot_vars) {
    Decimal old = log.SlotValue(sv.slot);
    double v = old.ToDouble();
    if (sv.dp >= 0) v += sol.Value(sv.dp);
    if (sv.dm >= 0) v -= sol.Value(sv.dm);
    Decimal nv = Decimal::FromDouble(v);
    if (nv == old) continue;
    result.repaired_log.SetSlotValue(sv.slot, nv);
    ParamDelta d;
    d.slot = log.slot(sv.slot);
    d.old_value = old;
    d.new_value = nv;
    result.param_deltas.push_back(d);
    objective += sv.weight * (nv - old).Abs().ToDouble();
  }
  result.objective_value =
      options.objective == EncodeOptions::Objective::kSoftCount ? sol.objective_value : objective;
  result.status = RepairStatus::kRepaired;
  Relation fixed = replay_final(result.repaired_log, d0);
  result.verified = MeetsTargets(fixed, dn, c, tuples, soft);
  if (!result.verified) result.note = "replay of the repaired log misses a pinned target";
  return result;
}

RepairResult basic_repair(const QueryLog& log, const Relation& d0, const Relation& dn,
                          const ComplaintSet& c, const RepairScope& scope,
                          const std::optional<std::vector<int64_t>>& tuple_filter,
                          const EncodeOptions& options) {
  Trace trace = run_log(log, d0);
  if (!(trace.final_state() == dn)) {
    throw Error(ErrorCode::kDirtyReplayMismatch,
                "replaying the log from D_0 does not reproduce the given final state");
  }
  return basic_repair_traced(log, trace, c, scope, tuple_filter, options);
}

milp::MilpModel build_model(const QueryLog& log, const Relation& d0, const Relation& dn,
                            const ComplaintSet& c, const RepairScope& scope,
                            const std::optional<std::vector<int64_t>>& tuple_filter,
                            const EncodeOptions& options, ModelSize* size) {
  Trace trace = run_log(log, d0);
  if (!(trace.final_state() == dn)) {
    throw Error(ErrorCode::kDirtyReplayMismatch,
                "replaying the log from D_0 does not reproduce the given final state");
  }
  std::vector<int64_t> tuples;
  std::set<int64_t> known;
  for (const auto& [id, row] : d0.rows()) known.insert(id);
  for (const auto& id : trace.inserted_ids) {
    if (id) known.insert(*id);
  }
  if (tuple_filter) {
    for (int64_t id : *tuple_filter) {
      if (known.count(id)) tuples.push_back(id);
    }
  } else {
    tuples.assign(known.begin(), known.end());
  }
  std::set<int> free = scope.FreeSlots(log);
  Built built;
  for (;;) {
    built = Built();
    Build(log, trace, c, free, tuples, options, &built);
    if (built.bilinear.empty()) break;
    for (int s : built.bilinear) free.erase(s);
  }
  if (size) *size = built.size;
  return std::move(built.model);
}

}  // namespace logrepair
