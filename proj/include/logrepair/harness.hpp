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

#include <functional>
#include <string>
#include <vector>

#include "logrepair/dectree.hpp"
#include "logrepair/incremental.hpp"
#include "logrepair/workload.hpp"

namespace logrepair {

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double wall_ms = 0;
  std::string status;
  bool infeasible = false;
  bool timed_out = false;
  int solves = 0;
  int64_t nodes = 0;
  int window_first = 0;
  int window_last = 0;
  ModelSize model_size;
};

// Scores a repaired log against the trial's ground truth. R is the set of
// tuples whose repaired final value differs from the dirty one; precision is
// the share of R that now matches the true state, recall the share of the
// full complaint set that is resolved.
Metrics eval_repair(const TrialBundle& bundle, const QueryLog& repaired);
Metrics eval_repair(const TrialBundle& bundle, const RepairResult& result);

struct Method {
  std::string name;
  bool dectree = false;
  RepairConfig repair;
  TreeOptions tree;
};

// "basic" | "inc" | "dectree" with k, slicing list ("tuple,query,attr") and
// per-trial time limit in seconds.
Method make_method(const std::string& name, const std::string& mode, int k,
                   const std::string& slices, double time_limit);

struct MethodRun {
  RepairResult result;  // for dectree only status and repaired_log are set
  Metrics metrics;
};

// Runs one method on one trial; wall time covers the repair call only.
MethodRun run_method(const Method& method, const TrialBundle& bundle);

struct ExperimentSpec {
  WorkloadConfig base;
  CorruptionSpec corruption;
  TrialOptions trial;
  // Cross-product axes; an empty axis keeps the base value.
  std::vector<int> n_tuples;
  std::vector<int> n_attrs;
  std::vector<int> n_queries;
  std::vector<int> idx;
  std::vector<double> missing_rate;
  std::vector<Method> methods;
  int seeds = 1;
  uint64_t seed_base = 1;
};

// Reads the JSON matrix format documented in the README.
ExperimentSpec parse_experiment(const std::string& json_text);

struct TrialRecord {
  std::string method;
  WorkloadConfig cfg;
  CorruptionSpec corruption;
  double missing_rate = 0;
  int complaints = 0;
  int submitted = 0;
  std::string error;  // trial generation failure
  Metrics metrics;
};

std::vector<TrialRecord> run_trials(
    const ExperimentSpec& spec,
    const std::function<void(const TrialRecord&)>& on_record = nullptr);

// One row per trial followed by one mean row per cell (method and grid
// point).
std::string records_csv(const std::vector<TrialRecord>& records);

inline std::string run_experiment(const ExperimentSpec& spec) {
  return records_csv(run_trials(spec));
}

}  // namespace logrepair
