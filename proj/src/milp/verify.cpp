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

#include "logrepair/milp/verify.hpp"

#include <algorithm>
#include <cmath>

namespace logrepair::milp {

VerifyReport VerifyAssignment(const MilpModel& model,
                              const std::vector<double>& values,
                              double feasibility_tol, double integrality_tol) {
  VerifyReport report;
  auto note = [&](double scaled, const std::string& what) {
    report.max_violation = std::max(report.max_violation, scaled);
    if (scaled > 1.0) {
      report.ok = false;
      if (report.issues.size() < 20) report.issues.push_back(what);
    }
  };
  if (static_cast<int>(values.size()) != model.num_vars()) {
    report.ok = false;
    report.issues.push_back("assignment size mismatch");
    return report;
  }
  for (const VarRef& v : model.vars()) {
    double x = values[v.id];
    if (!std::isfinite(x)) {
      note(2.0, v.name + " is not finite");
      continue;
    }
    double scale = feasibility_tol * std::max(1.0, std::abs(x));
    if (x < v.lo) note((v.lo - x) / scale, v.name + " below lower bound");
    if (x > v.hi) note((x - v.hi) / scale, v.name + " above upper bound");
    if (v.kind == VarKind::kBinary) {
      double frac = std::min(std::abs(x), std::abs(1.0 - x));
      note(frac / integrality_tol, v.name + " is not integral");
    }
  }
  for (const LinConstraint& c : model.constraints()) {
    long double lhs = 0;
    double amax = 1.0;
    for (const auto& [var, a] : c.terms) {
      lhs += static_cast<long double>(a) * values[var];
      amax = std::max(amax, std::abs(a));
    }
    double excess = 0;
    double act = static_cast<double>(lhs);
    if (c.op != Sense::kGe) excess = std::max(excess, act - c.rhs);
    if (c.op != Sense::kLe) excess = std::max(excess, c.rhs - act);
    note(excess / (feasibility_tol * amax), "row " + c.tag + " violated");
  }
  return report;
}

}  // namespace logrepair::milp
