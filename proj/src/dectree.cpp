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

#include "logrepair/dectree.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "logrepair/error.hpp"
#include "logrepair/replay.hpp"

namespace logrepair {

bool RuleSet::Matches(const TupleRow& row) const {
  for (const Rule& r : rules) {
    bool ok = true;
    for (const RangeCondition& c : r.conditions) {
      const Decimal v = row.values[c.attr];
      if ((c.lo && !(v > *c.lo)) || (c.hi && !(v <= *c.hi))) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

Predicate RuleSet::ToPredicate() const {
  if (rules.empty()) return Predicate::False();
  std::vector<Predicate> ors;
  for (const Rule& r : rules) {
    std::vector<Predicate> ands;
    for (const RangeCondition& c : r.conditions) {
      LinExpr e;
      e.terms.push_back(Term{Decimal::FromInt(1), c.attr, -1});
      if (c.lo) ands.push_back(Predicate::Atom(e, CmpOp::kGt, *c.lo));
      if (c.hi) ands.push_back(Predicate::Atom(e, CmpOp::kLe, *c.hi));
    }
    if (ands.empty()) return Predicate::True();
    ors.push_back(ands.size() == 1 ? ands[0] : Predicate::And(std::move(ands)));
  }
  return ors.size() == 1 ? ors[0] : Predicate::Or(std::move(ors));
}

namespace {

double Entropy(int pos, int n) {
  if (n == 0 || pos == 0 || pos == n) return 0;
  double p = static_cast<double>(pos) / n;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

struct Builder {
  const std::vector<LabeledRow>& rows;
  TreeOptions opt;
  RuleSet out;

  void Grow(std::vector<int> idx, std::map<int, RangeCondition> path) {
    const int n = static_cast<int>(idx.size());
    int pos = 0;
    for (int i : idx) pos += rows[i].label;
    if (pos == 0) return;
    if (pos == n) {
      Emit(path);
      return;
    }
    const double base = Entropy(pos, n);
    const int width = static_cast<int>(rows[idx[0]].features.values.size());
    double best_gain = 1e-12;
    int best_attr = -1;
    Decimal best_thr;
    for (int a = 0; a < width; ++a) {
      std::vector<int> s = idx;
      std::sort(s.begin(), s.end(), [&](int x, int y) {
        return rows[x].features.values[a] < rows[y].features.values[a];
      });
      int left_pos = 0;
      for (int k = 0; k + 1 < n; ++k) {
        left_pos += rows[s[k]].label;
        Decimal v = rows[s[k]].features.values[a];
        Decimal w = rows[s[k + 1]].features.values[a];
        if (v == w) continue;
        int left = k + 1, right = n - left;
        if (left < opt.min_leaf || right < opt.min_leaf) continue;
        double gain = base - (left * Entropy(left_pos, left) +
                              right * Entropy(pos - left_pos, right)) / n;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_attr = a;
          best_thr = Decimal::FromDouble((v.ToDouble() + w.ToDouble()) / 2);
        }
      }
    }
    if (best_attr < 0) {
      if (2 * pos > n) Emit(path);
      return;
    }
    std::vector<int> lo, hi;
    for (int i : idx) {
      (rows[i].features.values[best_attr] <= best_thr ? lo : hi).push_back(i);
    }
    auto left_path = path, right_path = path;
    RangeCondition& l = left_path[best_attr];
    l.attr = best_attr;
    if (!l.hi || best_thr < *l.hi) l.hi = best_thr;
    RangeCondition& r = right_path[best_attr];
    r.attr = best_attr;
    if (!r.lo || best_thr > *r.lo) r.lo = best_thr;
    Grow(std::move(lo), std::move(left_path));
    Grow(std::move(hi), std::move(right_path));
  }

  void Emit(const std::map<int, RangeCondition>& path) {
    Rule rule;
    for (const auto& [a, c] : path) rule.conditions.push_back(c);
    out.rules.push_back(std::move(rule));
  }
};

}  // namespace

RuleSet learn_where(const std::vector<LabeledRow>& rows, const TreeOptions& options) {
  Builder b{rows, options, {}};
  if (rows.empty()) return b.out;
  std::vector<int> idx(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) idx[i] = static_cast<int>(i);
  b.Grow(std::move(idx), {});
  return b.out;
}

SetFit repair_set(Query* q, const std::vector<std::pair<TupleRow, TupleRow>>& pairs) {
  SetFit fit;
  double sq = 0;
  int count = 0;
  for (SetClause& s : q->set) {
    // Unknowns: coefficients that carry a literal, then the additive literal.
    std::vector<Term*> coef;
    for (Term& t : s.expr.terms) {
      if (t.slot >= 0 || (t.coeff != Decimal::FromInt(1) && t.coeff != Decimal::FromInt(-1))) {
        coef.push_back(&t);
      }
    }
    const bool has_const = true;
    const int m = static_cast<int>(pairs.size());
    if (m == 0) {
      fit.underdetermined = true;
      continue;
    }
    auto solve = [&](bool with_coef, Eigen::VectorXd* theta) {
      const int k = (with_coef ? static_cast<int>(coef.size()) : 0) + (has_const ? 1 : 0);
      Eigen::MatrixXd a(m, k);
      Eigen::VectorXd y(m);
      for (int i = 0; i < m; ++i) {
        const TupleRow& in = pairs[i].first;
        double fixed = 0;
        int col = 0;
        for (const Term& t : s.expr.terms) {
          double x = t.attr == kIdAttr ? static_cast<double>(in.id) : in.values[t.attr].ToDouble();
          bool free = with_coef && std::find(coef.begin(), coef.end(), &t) != coef.end();
          if (free) {
            a(i, col++) = x;
          } else {
            fixed += t.coeff.ToDouble() * x;
          }
        }
        if (has_const) a(i, col++) = 1;
        y(i) = pairs[i].second.values[s.attr].ToDouble() - fixed;
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
      if (qr.rank() < k) return false;
      *theta = qr.solve(y);
      Eigen::VectorXd r = a * *theta - y;
      sq += r.squaredNorm();
      count += m;
      return true;
    };
    Eigen::VectorXd theta;
    bool with_coef = !coef.empty() && solve(true, &theta);
    if (!with_coef && !solve(false, &theta)) {
      fit.underdetermined = true;
      continue;
    }
    int col = 0;
    if (with_coef) {
      for (Term* t : coef) t->coeff = Decimal::FromDouble(theta(col++));
    }
    s.expr.constant = Decimal::FromDouble(theta(col));
  }
  fit.residual = count ? std::sqrt(sq / count) : 0;
  return fit;
}

DecTreeResult dectree_repair(const QueryLog& log, const Relation& d0, const Relation& d1_star,
                             const TreeOptions& options) {
  if (log.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "the decision-tree baseline takes a single query");
  }
  DecTreeResult res;
  res.repaired_log = log;
  const Query& q = log.at(1);
  if (q.kind == QueryKind::kInsert) return res;

  std::vector<LabeledRow> rows;
  for (const auto& [id, row] : d0.rows()) {
    const TupleRow* after = d1_star.Find(id);
    rows.push_back({row, !after || after->values != row.values});
  }
  res.rules = learn_where(rows, options);
  int right = 0;
  for (const LabeledRow& r : rows) right += res.rules.Matches(r.features) == r.label;
  res.training_accuracy = rows.empty() ? 1 : static_cast<double>(right) / rows.size();

  Query& out = res.repaired_log.mutable_at(1);
  out.where = res.rules.ToPredicate();
  res.structurally_different = !StructurallyEqual(out.where, q.where, false);
  if (q.kind == QueryKind::kUpdate) {
    std::vector<std::pair<TupleRow, TupleRow>> pairs;
    for (const auto& [id, row] : d0.rows()) {
      if (!res.rules.Matches(row)) continue;
      if (const TupleRow* after = d1_star.Find(id)) pairs.push_back({row, *after});
    }
    res.fit = repair_set(&out, pairs);
  }
  res.repaired_log.Reindex();
  return res;
}

}  // namespace logrepair
