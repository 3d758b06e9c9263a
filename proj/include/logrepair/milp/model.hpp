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
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "logrepair/decimal.hpp"

namespace logrepair::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { kContinuous, kBinary };

struct VarRef {
  int id = -1;
  VarKind kind = VarKind::kContinuous;
  double lo = 0;
  double hi = kInf;
  std::string name;
};

enum class Sense { kLe, kEq, kGe };

struct LinConstraint {
  std::vector<std::pair<int, double>> terms;  // (var id, coefficient)
  Sense op = Sense::kLe;
  double rhs = 0;
  std::string tag;
};

struct SolverConfig {
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  double rel_gap = 1e-6;
  double time_limit_secs = 1000;
  int64_t node_limit = std::numeric_limits<int64_t>::max();
  // Dense tableau cap (entries); larger relaxations stop with TimedOut and
  // limit_reason "memory".
  int64_t max_tableau_entries = 40'000'000;
};

// Minimization model over continuous and binary variables.
class MilpModel {
 public:
  int AddVar(const std::string& name, VarKind kind, double lo, double hi);
  int AddContinuous(const std::string& name, double lo, double hi) {
    return AddVar(name, VarKind::kContinuous, lo, hi);
  }
  int AddBinary(const std::string& name) {
    return AddVar(name, VarKind::kBinary, 0, 1);
  }
  int AddConstraint(std::vector<std::pair<int, double>> terms, Sense op,
                    double rhs, std::string tag = "");
  void AddObjective(int var, double coeff);
  void set_objective_constant(double c) { objective_constant_ = c; }

  void SetBounds(int var, double lo, double hi);
  void Fix(int var, double value) { SetBounds(var, value, value); }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int num_binaries() const;
  const VarRef& var(int id) const { return vars_.at(id); }
  const std::vector<VarRef>& vars() const { return vars_; }
  const std::vector<LinConstraint>& constraints() const { return constraints_; }
  // Objective coefficients indexed by var id.
  const std::vector<double>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }
  int FindVar(const std::string& name) const;

  // Throws ModelMalformed on bad references, bounds or coefficients.
  void Validate() const;

  SolverConfig config;

 private:
  std::vector<VarRef> vars_;
  std::vector<LinConstraint> constraints_;
  std::vector<double> objective_;
  double objective_constant_ = 0;
  std::unordered_map<std::string, int> names_;
};

enum class Status { kOptimal, kFeasible, kInfeasible, kTimedOut, kUnbounded };
const char* StatusName(Status s);

struct SolveStats {
  int64_t nodes = 0;
  int64_t simplex_iterations = 0;
  double wall_secs = 0;
  std::string limit_reason;  // "time", "nodes" or "memory" when a limit hit
};

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<double> values;  // by var id
  double objective_value = 0;
  SolveStats stats;

  bool has_assignment() const {
    return status == Status::kOptimal || status == Status::kFeasible;
  }
  double Value(int var) const { return values.at(var); }
  // Value re-quantized onto the decimal grid.
  Decimal Quantized(int var) const { return Decimal::FromDouble(values.at(var)); }
};

}  // namespace logrepair::milp
