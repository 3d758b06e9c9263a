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

#include "logrepair/milp/model.hpp"

namespace logrepair::milp {

// CPLEX-style LP text: Minimize / Subject To / Bounds / Binaries / End.
// Names are sanitized to [A-Za-z0-9_] and made unique; numbers are written
// with %.17g so a round trip is bit exact. Every variable is listed under
// Bounds in id order, which import_lp uses to restore the ids.
std::string export_lp(const MilpModel& model);

// Reads the dialect written by export_lp. Throws SyntaxError on malformed
// input, out-of-order sections or a Maximize objective.
MilpModel import_lp(const std::string& text);

}  // namespace logrepair::milp
