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

#include "logrepair/milp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <memory>
#include <queue>

#include "logrepair/milp/simplex.hpp"

namespace logrepair::milp {
namespace {

using Clock = std::chrono::steady_clock;

bool Fixed(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return false;
  return hi - lo <= 1e-9 * std::max(1.0, std::abs(lo));
}

class Propagator {
 public:
  explicit Propagator(const MilpModel& model) : model_(model) {
    col_rows_.resize(model.num_vars());
    const auto& rows = model.constraints();
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      for (const auto& [j, a] : rows[i].terms) col_rows_[j].push_back(i);
    }
    queued_.assign(rows.size(), 0);
  }

  bool Run(std::vector<double>& lo, std::vector<double>& hi,
           const std::vector<int>* touched) {
    const auto& rows = model_.constraints();
    queue_.clear();
    std::fill(queued_.begin(), queued_.end(), 0);
    if (touched) {
      for (int j : *touched) Enqueue(j, -1);
    } else {
      for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        queue_.push_back(i);
        queued_[i] = 1;
      }
    }
    int64_t budget = 30 * static_cast<int64_t>(rows.size()) + 1000;
    while (!queue_.empty() && budget-- > 0) {
      int i = queue_.front();
      queue_.pop_front();
      queued_[i] = 0;
      if (!ProcessRow(i, lo, hi)) return false;
    }
    return true;
  }

 private:
  void Enqueue(int var, int except_row) {
    for (int r : col_rows_[var]) {
      if (r != except_row && !queued_[r]) {
        queued_[r] = 1;
        queue_.push_back(r);
      }
    }
  }

  bool ProcessRow(int i, std::vector<double>& lo, std::vector<double>& hi) {
    const LinConstraint& c = model_.constraints()[i];
    const double ftol = model_.config.feasibility_tol;
    const double itol = model_.config.integrality_tol;
    double lower = c.op == Sense::kLe ? -kInf : c.rhs;
    double upper = c.op == Sense::kGe ? kInf : c.rhs;
    double min_fin = 0, max_fin = 0;
    int min_inf = 0, max_inf = 0;
    double amax = 1;
    for (const auto& [j, a] : c.terms) {
      amax = std::max(amax, std::abs(a));
      double bmin = a > 0 ? lo[j] : hi[j];
      double bmax = a > 0 ? hi[j] : lo[j];
      if (std::isfinite(bmin)) {
        min_fin += a * bmin;
      } else {
        ++min_inf;
      }
      if (std::isfinite(bmax)) {
        max_fin += a * bmax;
      } else {
        ++max_inf;
      }
    }
    double tol = ftol * amax;
    if (min_inf == 0 && min_fin > upper + tol) return false;
    if (max_inf == 0 && max_fin < lower - tol) return false;
    for (const auto& [j, a] : c.terms) {
      double bmin = a > 0 ? lo[j] : hi[j];
      double bmax = a > 0 ? hi[j] : lo[j];
      double new_lo = -kInf, new_hi = kInf;
      if (std::isfinite(upper)) {
        double res;
        bool ok = true;
        if (!std::isfinite(bmin)) {
          ok = min_inf == 1;
          res = min_fin;
        } else {
          ok = min_inf == 0;
          res = min_fin - a * bmin;
        }
        if (ok) {
          double b = (upper - res) / a;
          if (a > 0) {
            new_hi = b;
          } else {
            new_lo = b;
          }
        }
      }
      if (std::isfinite(lower)) {
        double res;
        bool ok = true;
        if (!std::isfinite(bmax)) {
          ok = max_inf == 1;
          res = max_fin;
        } else {
          ok = max_inf == 0;
          res = max_fin - a * bmax;
        }
        if (ok) {
          double b = (lower - res) / a;
          if (a > 0) {
            new_lo = std::max(new_lo, b);
          } else {
            new_hi = std::min(new_hi, b);
          }
        }
      }
      bool changed = false;
      const bool binary = model_.var(j).kind == VarKind::kBinary;
      // Slack proportional to the row scale keeps float noise from
      // producing spurious infeasibility.
      double slack = tol / std::abs(a);
      if (binary) {
        if (new_hi < kInf) {
          double h = std::floor(new_hi + slack + itol);
          if (h < hi[j]) {
            hi[j] = h;
            changed = true;
          }
        }
        if (new_lo > -kInf) {
          double l = std::ceil(new_lo - slack - itol);
          if (l > lo[j]) {
            lo[j] = l;
            changed = true;
          }
        }
        if (lo[j] > hi[j]) return false;
      } else {
        double step_hi = 1e-6 * std::max(1.0, std::abs(hi[j]));
        if (new_hi < hi[j] - step_hi || (!std::isfinite(hi[j]) && new_hi < kInf)) {
          hi[j] = new_hi;
          changed = true;
        }
        double step_lo = 1e-6 * std::max(1.0, std::abs(lo[j]));
        if (new_lo > lo[j] + step_lo || (!std::isfinite(lo[j]) && new_lo > -kInf)) {
          lo[j] = new_lo;
          changed = true;
        }
        if (lo[j] > hi[j]) {
          if (lo[j] - hi[j] > slack + ftol * std::max(1.0, std::abs(lo[j]))) {
            return false;
          }
          double mid = 0.5 * (lo[j] + hi[j]);
          lo[j] = hi[j] = mid;
        }
      }
      if (changed) {
        Enqueue(j, i);
        // The row's own activity moved; revisit it once more.
        if (!queued_[i]) {
          queued_[i] = 1;
          queue_.push_back(i);
        }
        return true;
      }
    }
    return true;
  }

  const MilpModel& model_;
  std::vector<std::vector<int>> col_rows_;
  std::deque<int> queue_;
  std::vector<char> queued_;
};

struct Node {
  std::vector<std::pair<int, double>> fixes;  // binary var -> 0/1
  double bound = -kInf;
  int depth = 0;
  int64_t id = 0;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<Node>& a,
                  const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    if (a->depth != b->depth) return a->depth < b->depth;
    return a->id > b->id;
  }
};

enum class NodeResult { kInfeasible, kSolved, kTimeLimit, kTooLarge, kUnbounded };

class BranchAndBound {
 public:
  explicit BranchAndBound(const MilpModel& model)
      : model_(model), cfg_(model.config), propagator_(model) {
    start_ = Clock::now();
    double limit = std::max(0.0, cfg_.time_limit_secs);
    deadline_ = limit > 1e8 ? Clock::time_point::max()
                            : start_ + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(limit));
  }

  Solution Run() {
    Solution sol;
    std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>,
                        NodeOrder>
        open;
    auto root = std::make_shared<Node>();
    root->id = next_id_++;
    open.push(root);
    bool have_incumbent = false;
    double incumbent = kInf;
    std::vector<double> best;
    std::string limit;
    bool unbounded = false;

    while (!open.empty()) {
      if (Clock::now() > deadline_) {
        limit = "time";
        break;
      }
      if (stats_.nodes >= cfg_.node_limit) {
        limit = "nodes";
        break;
      }
      std::shared_ptr<Node> node = open.top();
      open.pop();
      if (have_incumbent && node->bound >= incumbent - Gap(incumbent)) continue;
      ++stats_.nodes;

      std::vector<double> lo, hi, x;
      double obj = 0;
      NodeResult r = SolveNode(node->fixes, &lo, &hi, &x, &obj);
      if (r == NodeResult::kTimeLimit) {
        limit = "time";
        break;
      }
      if (r == NodeResult::kTooLarge) {
        limit = "memory";
        break;
      }
      if (r == NodeResult::kUnbounded) {
        unbounded = true;
        break;
      }
      if (r == NodeResult::kInfeasible) continue;
      if (have_incumbent && obj >= incumbent - Gap(incumbent)) continue;

      int branch = -1;
      double best_frac = cfg_.integrality_tol;
      for (int j = 0; j < model_.num_vars(); ++j) {
        if (model_.var(j).kind != VarKind::kBinary) continue;
        double f = std::min(x[j], 1.0 - x[j]);
        if (f > best_frac + 1e-12) {
          best_frac = f;
          branch = j;
        }
      }
      if (branch < 0) {
        // Integral relaxation: polish with the binaries fixed, then accept.
        std::vector<std::pair<int, double>> fixes;
        for (int j = 0; j < model_.num_vars(); ++j) {
          if (model_.var(j).kind == VarKind::kBinary) {
            fixes.push_back({j, std::round(x[j])});
          }
        }
        std::vector<double> plo, phi, px;
        double pobj = 0;
        NodeResult pr = SolveNode(fixes, &plo, &phi, &px, &pobj);
        if (pr == NodeResult::kTimeLimit) {
          limit = "time";
          break;
        }
        if (pr != NodeResult::kSolved) continue;
        if (!have_incumbent || pobj < incumbent) {
          have_incumbent = true;
          incumbent = pobj;
          best = std::move(px);
        }
        continue;
      }
      double v = x[branch];
      double first = v >= 0.5 ? 1.0 : 0.0;
      for (double val : {first, 1.0 - first}) {
        auto child = std::make_shared<Node>();
        child->fixes = node->fixes;
        child->fixes.push_back({branch, val});
        child->bound = obj;
        child->depth = node->depth + 1;
        child->id = next_id_++;
        open.push(child);
      }
    }

    stats_.wall_secs =
        std::chrono::duration<double>(Clock::now() - start_).count();
    stats_.limit_reason = limit;
    sol.stats = stats_;
    if (unbounded) {
      sol.status = Status::kUnbounded;
      return sol;
    }
    if (have_incumbent) {
      sol.status = limit.empty() ? Status::kOptimal : Status::kFeasible;
      sol.values = std::move(best);
      sol.objective_value = incumbent;
    } else {
      sol.status = limit.empty() ? Status::kInfeasible : Status::kTimedOut;
    }
    return sol;
  }

 private:
  double Gap(double incumbent) const {
    return std::max(1e-9, cfg_.rel_gap * std::abs(incumbent));
  }

  NodeResult SolveNode(const std::vector<std::pair<int, double>>& fixes,
                       std::vector<double>* lo_out, std::vector<double>* hi_out,
                       std::vector<double>* x_out, double* obj_out) {
    const int n = model_.num_vars();
    std::vector<double>& lo = *lo_out;
    std::vector<double>& hi = *hi_out;
    lo.resize(n);
    hi.resize(n);
    for (int j = 0; j < n; ++j) {
      lo[j] = model_.var(j).lo;
      hi[j] = model_.var(j).hi;
      if (model_.var(j).kind == VarKind::kBinary) {
        lo[j] = std::ceil(lo[j] - cfg_.integrality_tol);
        hi[j] = std::floor(hi[j] + cfg_.integrality_tol);
      }
    }
    for (const auto& [j, v] : fixes) {
      if (v < lo[j] || v > hi[j]) return NodeResult::kInfeasible;
      lo[j] = hi[j] = v;
    }
    if (!propagator_.Run(lo, hi, nullptr)) return NodeResult::kInfeasible;

    LpProblem lp;
    std::vector<int> col(n, -1);
    std::vector<double> fixed_value(n, 0);
    double constant = model_.objective_constant();
    for (int j = 0; j < n; ++j) {
      if (Fixed(lo[j], hi[j])) {
        fixed_value[j] = model_.var(j).kind == VarKind::kBinary
                             ? std::round(lo[j])
                             : 0.5 * (lo[j] + hi[j]);
        constant += model_.objective()[j] * fixed_value[j];
      } else {
        col[j] = lp.num_cols();
        lp.lo.push_back(lo[j]);
        lp.hi.push_back(hi[j]);
        lp.cost.push_back(model_.objective()[j]);
      }
    }
    for (const LinConstraint& c : model_.constraints()) {
      double lower = c.op == Sense::kLe ? -kInf : c.rhs;
      double upper = c.op == Sense::kGe ? kInf : c.rhs;
      double min_act = 0, max_act = 0, amax = 1;
      LpProblem::Row row;
      row.rhs = c.rhs;
      row.sense = c.op;
      for (const auto& [j, a] : c.terms) {
        amax = std::max(amax, std::abs(a));
        min_act += a > 0 ? a * lo[j] : a * hi[j];
        max_act += a > 0 ? a * hi[j] : a * lo[j];
        if (col[j] < 0) {
          row.rhs -= a * fixed_value[j];
        } else {
          row.terms.push_back({col[j], a});
        }
      }
      if (row.terms.empty()) continue;
      double tol = cfg_.feasibility_tol * amax;
      bool implied = (std::isinf(lower) || min_act >= lower - tol) &&
                     (std::isinf(upper) || max_act <= upper + tol);
      if (implied) continue;
      lp.rows.push_back(std::move(row));
    }

    std::vector<double>& x = *x_out;
    x = fixed_value;
    double obj = constant;
    if (lp.num_cols() > 0) {
      LpOptions opt;
      opt.feasibility_tol = cfg_.feasibility_tol;
      opt.deadline = deadline_;
      opt.max_tableau_entries = cfg_.max_tableau_entries;
      LpResult res = SolveLp(lp, opt);
      stats_.simplex_iterations += res.iterations;
      switch (res.status) {
        case LpStatus::kInfeasible: return NodeResult::kInfeasible;
        case LpStatus::kTimeLimit: return NodeResult::kTimeLimit;
        case LpStatus::kTooLarge: return NodeResult::kTooLarge;
        case LpStatus::kUnbounded: return NodeResult::kUnbounded;
        case LpStatus::kOptimal: break;
      }
      for (int j = 0; j < n; ++j) {
        if (col[j] >= 0) x[j] = res.x[col[j]];
      }
      obj += res.objective;
    }
    *obj_out = obj;
    return NodeResult::kSolved;
  }

  const MilpModel& model_;
  const SolverConfig& cfg_;
  Propagator propagator_;
  SolveStats stats_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  int64_t next_id_ = 0;
};

}  // namespace

bool PropagateBounds(const MilpModel& model, std::vector<double>* lo,
                     std::vector<double>* hi) {
  Propagator p(model);
  return p.Run(*lo, *hi, nullptr);
}

Solution solve(const MilpModel& model) {
  model.Validate();
  return BranchAndBound(model).Run();
}

}  // namespace logrepair::milp
