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

#include "logrepair/milp/model.hpp"

#include <cmath>

#include "logrepair/error.hpp"

namespace logrepair::milp {

const char* StatusName(Status s) {
  switch (s) {
    case Status::kOptimal: return "Optimal";
    case Status::kFeasible: return "Feasible";
    case Status::kInfeasible: return "Infeasible";
    case Status::kTimedOut: return "TimedOut";
    case Status::kUnbounded: return "Unbounded";
  }
  return "?";
}

int MilpModel::AddVar(const std::string& name, VarKind kind, double lo,
                      double hi) {
  VarRef v;
  v.id = num_vars();
  v.kind = kind;
  v.lo = lo;
  v.hi = hi;
  v.name = name.empty() ? "v" + std::to_string(v.id) : name;
  if (!names_.emplace(v.name, v.id).second) {
    throw Error(ErrorCode::kModelMalformed, "duplicate variable name " + v.name);
  }
  vars_.push_back(std::move(v));
  objective_.push_back(0);
  return vars_.back().id;
}

int MilpModel::AddConstraint(std::vector<std::pair<int, double>> terms,
                             Sense op, double rhs, std::string tag) {
  LinConstraint c;
  c.terms = std::move(terms);
  c.op = op;
  c.rhs = rhs;
  c.tag = std::move(tag);
  constraints_.push_back(std::move(c));
  return num_constraints() - 1;
}

void MilpModel::AddObjective(int var, double coeff) {
  objective_.at(var) += coeff;
}

void MilpModel::SetBounds(int var, double lo, double hi) {
  vars_.at(var).lo = lo;
  vars_.at(var).hi = hi;
}

int MilpModel::num_binaries() const {
  int n = 0;
  for (const auto& v : vars_) n += v.kind == VarKind::kBinary;
  return n;
}

int MilpModel::FindVar(const std::string& name) const {
  auto it = names_.find(name);
  return it == names_.end() ? -1 : it->second;
}

void MilpModel::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kModelMalformed, msg);
  };
  for (const auto& v : vars_) {
    if (std::isnan(v.lo) || std::isnan(v.hi)) fail("NaN bound on " + v.name);
    if (v.kind == VarKind::kBinary && (v.lo < 0 || v.hi > 1)) {
      fail("binary " + v.name + " has bounds outside [0,1]");
    }
  }
  for (size_t i = 0; i < constraints_.size(); ++i) {
    const auto& c = constraints_[i];
    if (c.terms.empty()) fail("constraint " + std::to_string(i) + " is empty");
    if (!std::isfinite(c.rhs)) fail("non-finite rhs in " + c.tag);
    for (const auto& [v, a] : c.terms) {
      if (v < 0 || v >= num_vars()) fail("unknown variable in " + c.tag);
      if (!std::isfinite(a)) fail("non-finite coefficient in " + c.tag);
    }
  }
  for (double a : objective_) {
    if (!std::isfinite(a)) fail("non-finite objective coefficient");
  }
  if (config.feasibility_tol <= 0 || config.integrality_tol <= 0 ||
      config.rel_gap <= 0) {
    fail("tolerances must be positive");
  }
}

}  // namespace logrepair::milp
