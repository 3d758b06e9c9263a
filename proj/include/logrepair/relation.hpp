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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logrepair/decimal.hpp"

namespace logrepair {

struct AttrId {
  int index;
  std::string name;
};

// Ordered attribute list. The primary key `id` is implicit and not part of
// the schema.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<std::string> names);

  int width() const { return static_cast<int>(names_.size()); }
  const std::string& name(int index) const { return names_[index]; }
  const std::vector<std::string>& names() const { return names_; }
  // -1 when absent.
  int IndexOf(const std::string& name) const;
  AttrId attr(int index) const { return {index, names_[index]}; }

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<std::string> names_;
};

struct TupleRow {
  int64_t id = 0;
  std::vector<Decimal> values;

  friend bool operator==(const TupleRow&, const TupleRow&) = default;
};

struct Bound {
  Decimal lo;
  Decimal hi;
};

// One database state. Rows are keyed by id and iterate in id order.
class Relation {
 public:
  Relation() = default;
  explicit Relation(Schema schema);
  Relation(Schema schema, std::vector<Bound> domain_hint);

  const Schema& schema() const { return schema_; }
  const std::map<int64_t, TupleRow>& rows() const { return rows_; }
  size_t size() const { return rows_.size(); }
  const TupleRow* Find(int64_t id) const;
  bool Contains(int64_t id) const { return rows_.count(id) != 0; }

  // Inserts or replaces; the row must match the schema width.
  void Put(TupleRow row);
  void Erase(int64_t id);

  // Next id handed to an INSERT: one past the largest id this state or any
  // ancestor state ever held, so deleted ids are never reused.
  int64_t next_id() const { return next_id_; }
  void set_next_id(int64_t id) { next_id_ = id; }

  const std::vector<Bound>& domain_hint() const { return domain_hint_; }
  void set_domain_hint(std::vector<Bound> hint);
  // Observed min/max per attribute widened by 10% (and at least 1).
  static std::vector<Bound> ObservedHint(const Relation& r);

  // Schema and rows; domain hints and id counters are metadata.
  friend bool operator==(const Relation& a, const Relation& b) {
    return a.schema_ == b.schema_ && a.rows_ == b.rows_;
  }

 private:
  Schema schema_;
  std::map<int64_t, TupleRow> rows_;
  std::vector<Bound> domain_hint_;
  int64_t next_id_ = 1;
};

enum class ComplaintKind { kModify, kDelete, kAdd };

// t -> t* (modify), t -> absent (delete) or absent -> t* (add). For additions
// expected->id names the tuple that should exist.
struct Complaint {
  std::optional<int64_t> target_id;
  std::optional<TupleRow> expected;

  static Complaint Modify(int64_t id, std::vector<Decimal> values);
  static Complaint Delete(int64_t id);
  static Complaint Add(TupleRow row);

  ComplaintKind kind() const;
  // The tuple id this complaint is about.
  int64_t tuple_id() const { return target_id ? *target_id : expected->id; }

  friend bool operator==(const Complaint&, const Complaint&) = default;
};

struct ComplaintSet {
  std::vector<Complaint> complaints;

  size_t size() const { return complaints.size(); }
  bool empty() const { return complaints.empty(); }
  // Throws InconsistentComplaints on malformed entries or two complaints
  // about the same tuple.
  void Validate() const;
  std::vector<int64_t> TupleIds() const;
  const Complaint* ForTuple(int64_t id) const;
};

Relation apply_complaints(const Relation& state, const ComplaintSet& c);
ComplaintSet diff_states(const Relation& dirty, const Relation& truth);
ComplaintSet subsample_complaints(const ComplaintSet& c, double keep_fraction,
                                  uint64_t seed);

}  // namespace logrepair
