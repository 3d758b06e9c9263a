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

#include <vector>

#include "logrepair/milp/model.hpp"

namespace logrepair::milp {

// Best-bound branch-and-bound over the binaries. Each node tightens bounds
// by activity propagation, drops rows its bounds already imply, and solves
// the remaining LP relaxation with the dense simplex. Branches on the most
// fractional binary (lowest id on ties).
Solution solve(const MilpModel& model);

// Activity-based bound tightening used at every node; exposed for tests.
// Returns false when some row cannot be satisfied within the bounds.
bool PropagateBounds(const MilpModel& model, std::vector<double>* lo,
                     std::vector<double>* hi);

}  // namespace logrepair::milp
