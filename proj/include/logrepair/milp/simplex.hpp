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

#include <chrono>
#include <cstdint>
#include <utility>
#include <vector>

#include "logrepair/milp/model.hpp"

namespace logrepair::milp {

// min c.x  s.t.  rows, lo <= x <= hi (bounds may be infinite).
struct LpProblem {
  struct Row {
    std::vector<std::pair<int, double>> terms;
    Sense sense = Sense::kLe;
    double rhs = 0;
  };
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> cost;
  std::vector<Row> rows;

  int num_cols() const { return static_cast<int>(cost.size()); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kTimeLimit, kTooLarge };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0;
  int64_t iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  std::chrono::steady_clock::time_point deadline =
      std::chrono::steady_clock::time_point::max();
  int64_t max_tableau_entries = 40'000'000;
};

// Two-phase primal simplex on a dense tableau with bounded variables.
// Dantzig pricing; after a run of degenerate pivots it switches to Bland's
// rule until progress resumes.
LpResult SolveLp(const LpProblem& lp, const LpOptions& options);

}  // namespace logrepair::milp
