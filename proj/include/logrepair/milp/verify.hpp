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

#include <string>
#include <vector>

#include "logrepair/milp/model.hpp"

namespace logrepair::milp {

struct VerifyReport {
  bool ok = true;
  double max_violation = 0;  // scaled, see VerifyAssignment
  std::vector<std::string> issues;
};

// Substitutes `values` into every bound, row and integrality requirement.
// A row may be violated by at most feasibility_tol * max(1, max |a_j|);
// binaries must lie within integrality_tol of 0 or 1. Uses nothing from the
// solver.
VerifyReport VerifyAssignment(const MilpModel& model,
                              const std::vector<double>& values,
                              double feasibility_tol, double integrality_tol);

inline VerifyReport VerifySolution(const MilpModel& model,
                                   const Solution& solution) {
  return VerifyAssignment(model, solution.values,
                          model.config.feasibility_tol,
                          model.config.integrality_tol);
}

}  // namespace logrepair::milp
