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

#include "logrepair/encoder.hpp"
#include "logrepair/slicing.hpp"

namespace logrepair {

struct IncConfig {
  int k = 1;
  // Whole-run budget; each window gets max(5 s, budget / #windows), capped by
  // what is left.
  double time_budget_secs = 1000;
  double min_window_secs = 5;
  // With tuple slicing: a repair that still changes non-complaint tuples is
  // kept as a fallback while older windows are tried for one that does not.
  // Without a clean window, the newest one changing the fewest wins.
  bool prefer_clean = true;
  SliceOptions slice;
  EncodeOptions encode;
};

// Frees k consecutive queries at a time, newest window first, and returns
// the first window that admits a repair (see prefer_clean). Windows holding no relevant query
// are skipped under query slicing.
RepairResult inc_repair(const QueryLog& log, const Relation& d0, const Relation& dn,
                        const ComplaintSet& c, const IncConfig& cfg);

enum class RepairMode { kBasic, kInc };

struct RepairConfig {
  RepairMode mode = RepairMode::kInc;
  IncConfig inc;  // slice and encode options are shared by both modes
};

// Dispatches on the mode. Basic frees every query (narrowed by query
// slicing) in a single model.
RepairResult run_repair(const QueryLog& log, const Relation& d0, const Relation& dn,
                        const ComplaintSet& c, const RepairConfig& cfg);

}  // namespace logrepair
