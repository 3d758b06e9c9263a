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

#include "logrepair/milp/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace logrepair::milp {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr int kDegenerateRun = 50;

enum class IterStatus { kOptimal, kUnbounded, kTimeLimit };

// Internal columns all have lower bound 0 and upper bound ub (maybe inf).
class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), a_(static_cast<size_t>(m) * n, 0.0) {
    beta_.assign(m, 0);
    basis_.assign(m, -1);
    ub_.assign(n, kInf);
    at_upper_.assign(n, 0);
    basic_.assign(n, 0);
    d_.assign(n, 0);
  }

  double* row(int i) { return &a_[static_cast<size_t>(i) * n_]; }
  double& at(int i, int k) { return a_[static_cast<size_t>(i) * n_ + k]; }

  void SetBasic(int r, int k) {
    basis_[r] = k;
    basic_[k] = 1;
  }

  void ComputeReducedCosts(const std::vector<double>& c) {
    d_ = c;
    for (int i = 0; i < m_; ++i) {
      double cb = c[basis_[i]];
      if (cb == 0) continue;
      const double* r = row(i);
      for (int k = 0; k < n_; ++k) d_[k] -= cb * r[k];
    }
    for (int i = 0; i < m_; ++i) d_[basis_[i]] = 0;
  }

  double ValueOf(int k) const {
    if (basic_[k]) {
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] == k) return beta_[i];
      }
    }
    return at_upper_[k] ? ub_[k] : 0.0;
  }

  void Pivot(int r, int k) {
    double* pr = row(r);
    double p = pr[k];
    nz_.clear();
    for (int j = 0; j < n_; ++j) {
      if (pr[j] != 0) {
        pr[j] /= p;
        nz_.push_back(j);
      }
    }
    pr[k] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      double f = ri[k];
      if (f == 0) continue;
      for (int j : nz_) ri[j] -= f * pr[j];
      ri[k] = 0;
    }
    double f = d_[k];
    if (f != 0) {
      for (int j : nz_) d_[j] -= f * pr[j];
      d_[k] = 0;
    }
    basic_[basis_[r]] = 0;
    SetBasic(r, k);
  }

  // Runs primal simplex iterations on the current reduced costs.
  IterStatus Iterate(const LpOptions& opt, int64_t* iterations,
                     int64_t iteration_cap) {
    int degenerate = 0;
    bool bland = false;
    for (;;) {
      if ((*iterations & 31) == 0 &&
          std::chrono::steady_clock::now() > opt.deadline) {
        return IterStatus::kTimeLimit;
      }
      if (*iterations >= iteration_cap) return IterStatus::kTimeLimit;
      int enter = -1;
      double best = 0;
      for (int k = 0; k < n_; ++k) {
        if (basic_[k] || ub_[k] == 0) continue;
        double dk = d_[k];
        bool improving = at_upper_[k] ? dk > kCostTol : dk < -kCostTol;
        if (!improving) continue;
        if (bland) {
          enter = k;
          break;
        }
        if (std::abs(dk) > best) {
          best = std::abs(dk);
          enter = k;
        }
      }
      if (enter < 0) return IterStatus::kOptimal;
      ++*iterations;
      double s = at_upper_[enter] ? -1.0 : 1.0;
      double theta = ub_[enter];
      int leave = -1;
      double leave_alpha = 0;
      for (int i = 0; i < m_; ++i) {
        double alpha = s * at(i, enter);
        double limit;
        if (alpha > kPivotTol) {
          limit = std::max(0.0, beta_[i]) / alpha;
        } else if (alpha < -kPivotTol && std::isfinite(ub_[basis_[i]])) {
          limit = std::max(0.0, ub_[basis_[i]] - beta_[i]) / -alpha;
        } else {
          continue;
        }
        bool take = false;
        if (limit < theta - 1e-12) {
          take = true;
        } else if (limit <= theta + 1e-12 && leave >= 0) {
          // Ties: Bland takes the lowest basic index, otherwise the
          // largest pivot for stability. A tie with the entering bound
          // flip keeps the flip.
          take = bland ? basis_[i] < basis_[leave]
                       : std::abs(alpha) > std::abs(leave_alpha);
        }
        if (take) {
          theta = limit;
          leave = i;
          leave_alpha = alpha;
        }
      }
      if (leave < 0 && !std::isfinite(theta)) return IterStatus::kUnbounded;
      if (theta < 1e-12) {
        if (++degenerate > kDegenerateRun) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      for (int i = 0; i < m_; ++i) {
        double a = at(i, enter);
        if (a != 0) beta_[i] -= theta * s * a;
      }
      if (leave < 0) {
        at_upper_[enter] = !at_upper_[enter];
        continue;
      }
      int out = basis_[leave];
      double enter_value = at_upper_[enter] ? ub_[enter] - theta : theta;
      at_upper_[out] = leave_alpha < 0 ? 1 : 0;
      at_upper_[enter] = 0;
      Pivot(leave, enter);
      beta_[leave] = enter_value;
    }
  }

  int m_;
  int n_;
  std::vector<double> a_;
  std::vector<double> beta_;
  std::vector<int> basis_;
  std::vector<double> ub_;
  std::vector<char> at_upper_;
  std::vector<char> basic_;
  std::vector<double> d_;
  std::vector<int> nz_;
};

// x_j = offset + sum(sign * internal column).
struct ColumnMap {
  double offset = 0;
  int col = -1;
  double sign = 1;
  int col2 = -1;  // negative part of a free variable
};

}  // namespace

LpResult SolveLp(const LpProblem& lp, const LpOptions& options) {
  LpResult result;
  const int n0 = lp.num_cols();
  std::vector<ColumnMap> map(n0);
  std::vector<double> col_ub;
  std::vector<double> col_cost;
  for (int j = 0; j < n0; ++j) {
    double lo = lp.lo[j];
    double hi = lp.hi[j];
    if (lo > hi) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    ColumnMap& cm = map[j];
    if (std::isfinite(lo)) {
      cm.offset = lo;
      cm.sign = 1;
      cm.col = static_cast<int>(col_ub.size());
      col_ub.push_back(std::isfinite(hi) ? hi - lo : kInf);
      col_cost.push_back(lp.cost[j]);
    } else if (std::isfinite(hi)) {
      cm.offset = hi;
      cm.sign = -1;
      cm.col = static_cast<int>(col_ub.size());
      col_ub.push_back(kInf);
      col_cost.push_back(-lp.cost[j]);
    } else {
      cm.col = static_cast<int>(col_ub.size());
      col_ub.push_back(kInf);
      col_cost.push_back(lp.cost[j]);
      cm.col2 = static_cast<int>(col_ub.size());
      col_ub.push_back(kInf);
      col_cost.push_back(-lp.cost[j]);
    }
  }
  const int ns = static_cast<int>(col_ub.size());
  const int m = static_cast<int>(lp.rows.size());

  // Transformed rows with nonnegative rhs.
  struct IRow {
    std::vector<std::pair<int, double>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<IRow> rows(m);
  int extra = 0;
  for (int i = 0; i < m; ++i) {
    const auto& r = lp.rows[i];
    IRow& ir = rows[i];
    double rhs = r.rhs;
    double scale = 0;
    for (const auto& [j, a] : r.terms) scale = std::max(scale, std::abs(a));
    if (scale == 0) scale = 1;
    for (const auto& [j, a] : r.terms) {
      const ColumnMap& cm = map[j];
      rhs -= a * cm.offset;
      ir.terms.push_back({cm.col, a * cm.sign / scale});
      if (cm.col2 >= 0) ir.terms.push_back({cm.col2, -a / scale});
    }
    ir.rhs = rhs / scale;
    ir.sense = r.sense;
    if (ir.rhs < 0) {
      ir.rhs = -ir.rhs;
      for (auto& t : ir.terms) t.second = -t.second;
      if (ir.sense == Sense::kLe) {
        ir.sense = Sense::kGe;
      } else if (ir.sense == Sense::kGe) {
        ir.sense = Sense::kLe;
      }
    }
    extra += ir.sense == Sense::kGe ? 2 : 1;
  }
  const int n = ns + extra;
  if (static_cast<int64_t>(m) * n > options.max_tableau_entries) {
    result.status = LpStatus::kTooLarge;
    return result;
  }

  Tableau t(m, n);
  std::vector<char> artificial(n, 0);
  for (int k = 0; k < ns; ++k) t.ub_[k] = col_ub[k];
  int next = ns;
  double max_rhs = 1;
  for (int i = 0; i < m; ++i) {
    double* row = t.row(i);
    for (const auto& [k, a] : rows[i].terms) row[k] += a;
    t.beta_[i] = rows[i].rhs;
    max_rhs = std::max(max_rhs, rows[i].rhs);
    if (rows[i].sense == Sense::kLe) {
      row[next] = 1;
      t.SetBasic(i, next++);
    } else {
      if (rows[i].sense == Sense::kGe) row[next++] = -1;
      row[next] = 1;
      artificial[next] = 1;
      t.SetBasic(i, next++);
    }
  }

  const int64_t cap = 200000 + 200LL * (m + n);
  std::vector<double> cost(n, 0.0);
  bool any_artificial = false;
  for (int k = 0; k < n; ++k) {
    if (artificial[k]) {
      cost[k] = 1;
      any_artificial = true;
    }
  }
  if (any_artificial) {
    t.ComputeReducedCosts(cost);
    IterStatus st = t.Iterate(options, &result.iterations, cap);
    if (st == IterStatus::kTimeLimit) {
      result.status = LpStatus::kTimeLimit;
      return result;
    }
    double infeas = 0;
    for (int i = 0; i < m; ++i) {
      if (artificial[t.basis_[i]]) infeas += std::max(0.0, t.beta_[i]);
    }
    if (infeas > options.feasibility_tol * max_rhs) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    for (int k = 0; k < n; ++k) {
      if (artificial[k]) t.ub_[k] = 0;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (!artificial[t.basis_[i]]) continue;
      int best = -1;
      double best_abs = 1e-7;
      for (int k = 0; k < n; ++k) {
        if (t.basic_[k] || artificial[k]) continue;
        double v = std::abs(t.at(i, k));
        if (v > best_abs) {
          best_abs = v;
          best = k;
        }
      }
      if (best < 0) continue;
      double value = t.ValueOf(best);
      int out = t.basis_[i];
      t.Pivot(i, best);
      t.at_upper_[out] = 0;
      t.at_upper_[best] = 0;
      t.beta_[i] = value;
    }
  }

  std::fill(cost.begin(), cost.end(), 0.0);
  for (int k = 0; k < ns; ++k) cost[k] = col_cost[k];
  t.ComputeReducedCosts(cost);
  IterStatus st = t.Iterate(options, &result.iterations, cap);
  if (st == IterStatus::kTimeLimit) {
    result.status = LpStatus::kTimeLimit;
    return result;
  }
  if (st == IterStatus::kUnbounded) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  std::vector<double> value(n, 0.0);
  for (int k = 0; k < n; ++k) {
    if (!t.basic_[k] && t.at_upper_[k]) value[k] = t.ub_[k];
  }
  for (int i = 0; i < m; ++i) value[t.basis_[i]] = t.beta_[i];
  result.x.assign(n0, 0.0);
  result.objective = 0;
  for (int j = 0; j < n0; ++j) {
    const ColumnMap& cm = map[j];
    double x = cm.offset + cm.sign * value[cm.col];
    if (cm.col2 >= 0) x -= value[cm.col2];
    x = std::clamp(x, lp.lo[j], lp.hi[j]);
    result.x[j] = x;
    result.objective += lp.cost[j] * x;
  }
  result.status = LpStatus::kOptimal;
  return result;
}

}  // namespace logrepair::milp
