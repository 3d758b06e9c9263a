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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logrepair/milp/model.hpp"
#include "logrepair/query.hpp"
#include "logrepair/relation.hpp"
#include "logrepair/replay.hpp"

namespace logrepair {

// An affine expression over model variables together with interval bounds.
// `exact` is set when the value is known on the decimal grid (the form may
// still be a pinned variable when constants are not folded).
struct Value {
  double c = 0;
  std::vector<std::pair<int, double>> terms;
  double lo = 0;
  double hi = 0;
  std::optional<Decimal> exact;

  bool is_const() const { return terms.empty(); }
  static Value Const(Decimal d);
  static Value Var(int id, double lo, double hi);
};

Value operator+(const Value& a, const Value& b);
Value operator-(const Value& a, const Value& b);
// Scales by a literal; the exact part uses decimal multiplication so that it
// agrees with replay.
Value Scale(const Value& a, Decimal k);
Value ScaleReal(const Value& a, double k);

struct EncodeOptions {
  // Strict-inequality gap and boundary nudge.
  Decimal epsilon = Decimal::FromRaw(10);  // 0.001
  double time_limit_secs = 1000;
  milp::SolverConfig solver;
  // Divide each slot's delta by max(1, |original|).
  bool normalize = false;
  // Attribute slicing: only these attributes get variables; the rest are
  // carried from the replay trace. Also enables constant folding.
  std::optional<std::vector<bool>> encoded_attrs;
  // Folds known values into constants instead of pinned variables. Off
  // gives one variable per tuple attribute and state (the audit layout).
  bool fold_constants = true;
  // Non-complaint tuples that are encoded but not pinned; each gets a
  // "changed" indicator (tuple-slicing refinement).
  std::vector<int64_t> soft_tuples;
  enum class Objective { kManhattan, kSoftCount };
  Objective objective = Objective::kManhattan;
  // With kManhattan: at most this many soft tuples may change.
  std::optional<int> soft_cap;
  // Written before solving when non-empty.
  std::string export_lp_path;
};

// Which literals may change. By default every slot of the window's queries
// (except literals inside a comparison's left-hand side).
struct RepairScope {
  std::vector<int> window;                 // 1-based query indices
  std::optional<std::set<int>> free_slots;  // overrides window when set

  static RepairScope All(const QueryLog& log);
  static RepairScope Window(int first, int last);
  std::set<int> FreeSlots(const QueryLog& log) const;
};

enum class RepairStatus { kRepaired, kInfeasible, kTimedOut, kNoRepairFound };
const char* RepairStatusName(RepairStatus s);

struct ParamDelta {
  ParamSlot slot;
  Decimal old_value;
  Decimal new_value;
};

struct ModelSize {
  int vars = 0;
  int binaries = 0;
  int constraints = 0;
  // x and atom indicators only (excludes the side binary of '=' atoms and
  // soft-tuple indicators).
  int predicate_binaries = 0;
};

struct RepairResult {
  RepairStatus status = RepairStatus::kInfeasible;
  QueryLog repaired_log;
  std::vector<ParamDelta> param_deltas;
  double objective_value = 0;
  milp::Status solver_status = milp::Status::kInfeasible;
  milp::SolveStats stats;
  ModelSize model_size;
  int solves = 0;
  // Coefficient slots left fixed because they multiply a non-constant value.
  std::vector<int> skipped_slots;
  std::vector<int64_t> encoded_tuples;
  // Replaying repaired_log meets every pinned target of the encoded tuples.
  bool verified = false;
  // Inc: the window that produced the repair (1-based, inclusive).
  int window_first = 0;
  int window_last = 0;
  // Tuple slicing: non-complaint tuples changed by the final repair.
  std::vector<int64_t> nc_tuples;
  std::string note;

  bool ok() const { return status == RepairStatus::kRepaired; }
};

// Big-M bookkeeping and the per-construct encoders. A context owns no data
// beyond the model pointer and constants; values are threaded by the caller.
class EncodingContext {
 public:
  EncodingContext(milp::MilpModel* model, const QueryLog* log, Decimal big_m,
                  Decimal epsilon, bool fold);

  Decimal big_m() const { return big_m_; }
  Decimal delete_sentinel() const { return big_m_ + Decimal::FromInt(1); }
  Decimal epsilon() const { return epsilon_; }
  bool fold() const { return fold_; }
  milp::MilpModel& model() { return *model_; }

  // A known input value: a constant, or a pinned variable when not folding.
  Value Input(Decimal v, const std::string& name);
  // Value of a slot: its literal unless SetSlot() made it free.
  Value Slot(int slot_id) const;
  void SetSlot(int slot_id, Value v);
  bool IsFree(int slot_id) const;

  // x = sigma(t) as a {0,1} affine form. `attrs` are the tuple's values
  // (schema order); `id` is the key. Returns a constant when decidable.
  Value encode_predicate(const Predicate& p, const std::vector<Value>& attrs,
                         int64_t id, const std::string& name);
  // x_{q,t} = sigma(t) AND NOT dead, where `dead` is the {0,1} form telling
  // whether an earlier DELETE removed the tuple. A top-level AND absorbs the
  // guard; when not folding x is always its own binary.
  Value encode_match(const Predicate& p, const std::vector<Value>& attrs,
                     int64_t id, const Value& dead, const std::string& name);
  // t' = x * mu(t) + (1 - x) * t for each SET attribute; others pass through.
  // `encoded` limits which attributes are touched (nullptr: all).
  std::vector<Value> encode_update(const Query& q, const std::vector<Value>& in,
                                   int64_t id, const Value& x,
                                   const std::vector<bool>* encoded,
                                   const std::string& name);
  // t' = x * M+ + (1 - x) * t.
  std::vector<Value> encode_delete(const std::vector<Value>& in, const Value& x,
                                   const std::vector<bool>* encoded,
                                   const std::string& name);
  // x * a + (1 - x) * b for binary form x.
  Value Select(const Value& x, const Value& a, const Value& b,
               const std::string& name);
  // SET expression value; free coefficient slots need exact attributes and
  // are reported through `bilinear` otherwise.
  Value EvalExpr(const LinExpr& e, const std::vector<Value>& attrs, int64_t id,
                 std::vector<int>* bilinear);

  // Rows over affine forms. Constant rows are checked instead; a violated
  // constant row marks the context infeasible.
  void AddRow(const Value& lhs, milp::Sense op, double rhs, const std::string& tag);
  void Pin(const Value& v, Decimal target, const std::string& tag);
  bool trivially_infeasible() const { return infeasible_; }

  int predicate_binaries() const { return predicate_binaries_; }

  // z = 1 implies f >= l (resp. f <= u); z is an affine form within [0, 1].
  void ImplyGe(const Value& f, const Value& z, double l, const std::string& tag);
  void ImplyLe(const Value& f, const Value& z, double u, const std::string& tag);

 private:
  int NewBinary(const std::string& name, bool predicate);
  Value Materialize(const Value& v, const std::string& name);
  Value EncodeAtom(const Predicate& p, const std::vector<Value>& attrs,
                   int64_t id, const std::string& name);
  Value Combine(bool is_and, std::vector<Value> kids, const std::string& name,
                bool force_var);

  milp::MilpModel* model_;
  const QueryLog* log_;
  Decimal big_m_;
  Decimal epsilon_;
  bool fold_;
  std::vector<std::optional<Value>> slots_;
  bool infeasible_ = false;
  int predicate_binaries_ = 0;
  int counter_ = 0;
};

// The target of tuple `id` after applying the complaints to `dn`: its
// expected row, or nullopt when it must not exist.
std::optional<TupleRow> pinned_target(const Relation& dn, const ComplaintSet& c,
                                      int64_t id);

// Encodes the log over the selected tuples (all tuples when tuple_filter is
// empty), pins D_0 and the complaint-corrected final state, minimizes the
// Manhattan distance of the free slots and converts the optimum back into
// a log. Throws DirtyReplayMismatch when replaying `log` from d0 does not
// give dn, and UnknownComplaintTarget for complaints about tuples the log
// never creates.
RepairResult basic_repair(const QueryLog& log, const Relation& d0,
                          const Relation& dn, const ComplaintSet& c,
                          const RepairScope& scope,
                          const std::optional<std::vector<int64_t>>& tuple_filter,
                          const EncodeOptions& options = {});

// Same as basic_repair for callers that already hold the dirty trace.
RepairResult basic_repair_traced(
    const QueryLog& log, const Trace& trace, const ComplaintSet& c,
    const RepairScope& scope,
    const std::optional<std::vector<int64_t>>& tuple_filter,
    const EncodeOptions& options);

// Builds the model without solving it (for export and size audits).
milp::MilpModel build_model(const QueryLog& log, const Relation& d0,
                            const Relation& dn, const ComplaintSet& c,
                            const RepairScope& scope,
                            const std::optional<std::vector<int64_t>>& tuple_filter,
                            const EncodeOptions& options, ModelSize* size);

}  // namespace logrepair
