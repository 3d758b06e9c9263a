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

#include <cstdint>
#include <string>

#include "logrepair/query.hpp"
#include "logrepair/relation.hpp"

namespace logrepair {

enum class SetKind { kConstant, kRelative };
enum class WhereKind { kPoint, kRange };

struct QueryMix {
  double update = 1;
  double insert = 0;
  double del = 0;
};

struct WorkloadConfig {
  int n_tuples = 1000;
  int n_attrs = 10;
  int v_d = 200;
  int n_queries = 300;
  int range = 4;        // WHERE a in [v, v + range]
  double zipf_s = 1;    // attribute skew; 0 is uniform
  QueryMix mix;
  SetKind set_kind = SetKind::kConstant;
  WhereKind where_kind = WhereKind::kRange;
  // Relative SET increments are drawn from [1, max_increment].
  int max_increment = 10;
  uint64_t seed = 1;

  void Validate() const;
};

enum class CorruptionMode { kRegenerate, kPerturb };

struct CorruptionSpec {
  int idx = 0;  // 0 is the most recent query
  CorruptionMode mode = CorruptionMode::kRegenerate;
  Decimal delta = Decimal::FromInt(1);  // kPerturb
  uint64_t seed = 1;
};

struct TrialBundle {
  Relation d0;
  QueryLog truth;
  QueryLog dirty;
  Relation dn;       // dirty replay
  Relation dn_star;  // true replay
  ComplaintSet full;
  ComplaintSet submitted;
  int corrupted_query = 0;  // 1-based
  int attempts = 1;         // draws needed to meet the trial guards
};

Schema workload_schema(const WorkloadConfig& cfg);

// Ids 1..N_D, values uniform in [0, V_d], domain hint [0, V_d].
Relation gen_database(const WorkloadConfig& cfg);

// Attribute ranks 1..N_a drawn with weight rank^-s by inverse CDF; the
// rank-1 attribute is a0.
int zipf_attr(const WorkloadConfig& cfg, double u);

// N_q statements from the configured templates.
QueryLog gen_log(const WorkloadConfig& cfg);

// Replaces query n - idx. Regenerate keeps the kind and clause shapes and
// redraws every literal (until some literal differs); perturb shifts one
// literal, chosen by the seed, by delta.
QueryLog corrupt(const QueryLog& log, const CorruptionSpec& spec, const WorkloadConfig& cfg);

struct TrialOptions {
  double missing_rate = 0;
  // Redraw (bounded) corruptions whose complaint set is empty.
  bool require_complaints = true;
  int max_attempts = 50;
};

// Generates, corrupts and replays. Redraws when the dirty replay deletes more
// than 90% of the rows. Throws InvalidArgument when no draw meets the guards.
TrialBundle build_trial(const WorkloadConfig& cfg, const CorruptionSpec& spec,
                        const TrialOptions& options = {});

// Full configuration and seeds as JSON.
std::string manifest_json(const WorkloadConfig& cfg, const CorruptionSpec& spec,
                          const TrialOptions& options);

}  // namespace logrepair
