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

#include "logrepair/relation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "logrepair/error.hpp"
#include "logrepair/rng.hpp"

namespace logrepair {

Schema::Schema(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n == "id") {
      throw Error(ErrorCode::kSchemaMismatch, "'id' is the implicit key");
    }
    if (!seen.insert(n).second) {
      throw Error(ErrorCode::kSchemaMismatch, "duplicate attribute " + n);
    }
  }
}

int Schema::IndexOf(const std::string& name) const {
  for (int i = 0; i < width(); ++i) {
    if (names_[i] == name) return i;
  }
  return -1;
}

Relation::Relation(Schema schema) : schema_(std::move(schema)) {
  domain_hint_.assign(schema_.width(), Bound{});
}

Relation::Relation(Schema schema, std::vector<Bound> domain_hint)
    : schema_(std::move(schema)) {
  set_domain_hint(std::move(domain_hint));
}

const TupleRow* Relation::Find(int64_t id) const {
  auto it = rows_.find(id);
  return it == rows_.end() ? nullptr : &it->second;
}

void Relation::Put(TupleRow row) {
  if (static_cast<int>(row.values.size()) != schema_.width()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "row " + std::to_string(row.id) + " has " +
                    std::to_string(row.values.size()) + " values, expected " +
                    std::to_string(schema_.width()));
  }
  next_id_ = std::max(next_id_, row.id + 1);
  int64_t id = row.id;
  rows_[id] = std::move(row);
}

void Relation::Erase(int64_t id) { rows_.erase(id); }

void Relation::set_domain_hint(std::vector<Bound> hint) {
  if (static_cast<int>(hint.size()) != schema_.width()) {
    throw Error(ErrorCode::kSchemaMismatch, "domain hint width mismatch");
  }
  domain_hint_ = std::move(hint);
}

std::vector<Bound> Relation::ObservedHint(const Relation& r) {
  std::vector<Bound> out(r.schema().width());
  for (int j = 0; j < r.schema().width(); ++j) {
    bool first = true;
    Decimal lo, hi;
    for (const auto& [id, row] : r.rows()) {
      if (first || row.values[j] < lo) lo = row.values[j];
      if (first || row.values[j] > hi) hi = row.values[j];
      first = false;
    }
    double width = std::max(1.0, 0.1 * (hi - lo).ToDouble());
    out[j] = {lo - Decimal::FromDouble(std::ceil(width)),
              hi + Decimal::FromDouble(std::ceil(width))};
  }
  return out;
}

Complaint Complaint::Modify(int64_t id, std::vector<Decimal> values) {
  return Complaint{id, TupleRow{id, std::move(values)}};
}

Complaint Complaint::Delete(int64_t id) { return Complaint{id, std::nullopt}; }

Complaint Complaint::Add(TupleRow row) {
  return Complaint{std::nullopt, std::move(row)};
}

ComplaintKind Complaint::kind() const {
  if (!target_id) return ComplaintKind::kAdd;
  if (!expected) return ComplaintKind::kDelete;
  return ComplaintKind::kModify;
}

void ComplaintSet::Validate() const {
  std::set<int64_t> ids;
  for (const auto& c : complaints) {
    if (!c.target_id && !c.expected) {
      throw Error(ErrorCode::kInconsistentComplaints,
                  "complaint with neither target nor expected tuple");
    }
    if (c.target_id && c.expected && c.expected->id != *c.target_id) {
      throw Error(ErrorCode::kInconsistentComplaints,
                  "complaint changes the key of tuple " +
                      std::to_string(*c.target_id));
    }
    if (!ids.insert(c.tuple_id()).second) {
      throw Error(ErrorCode::kInconsistentComplaints,
                  "two complaints about tuple " +
                      std::to_string(c.tuple_id()));
    }
  }
}

std::vector<int64_t> ComplaintSet::TupleIds() const {
  std::vector<int64_t> out;
  for (const auto& c : complaints) out.push_back(c.tuple_id());
  std::sort(out.begin(), out.end());
  return out;
}

const Complaint* ComplaintSet::ForTuple(int64_t id) const {
  for (const auto& c : complaints) {
    if (c.tuple_id() == id) return &c;
  }
  return nullptr;
}

Relation apply_complaints(const Relation& state, const ComplaintSet& c) {
  c.Validate();
  Relation out = state;
  for (const auto& complaint : c.complaints) {
    switch (complaint.kind()) {
      case ComplaintKind::kModify:
      case ComplaintKind::kDelete:
        if (!state.Contains(*complaint.target_id)) {
          throw Error(ErrorCode::kUnknownTarget,
                      "tuple " + std::to_string(*complaint.target_id) +
                          " is not in the state");
        }
        if (complaint.expected) {
          out.Put(*complaint.expected);
        } else {
          out.Erase(*complaint.target_id);
        }
        break;
      case ComplaintKind::kAdd:
        if (state.Contains(complaint.expected->id)) {
          throw Error(ErrorCode::kInconsistentComplaints,
                      "addition of existing tuple " +
                          std::to_string(complaint.expected->id));
        }
        out.Put(*complaint.expected);
        break;
    }
  }
  return out;
}

ComplaintSet diff_states(const Relation& dirty, const Relation& truth) {
  if (!(dirty.schema() == truth.schema())) {
    throw Error(ErrorCode::kSchemaMismatch, "states have different schemas");
  }
  ComplaintSet out;
  auto d = dirty.rows().begin();
  auto t = truth.rows().begin();
  while (d != dirty.rows().end() || t != truth.rows().end()) {
    if (t == truth.rows().end() ||
        (d != dirty.rows().end() && d->first < t->first)) {
      out.complaints.push_back(Complaint::Delete(d->first));
      ++d;
    } else if (d == dirty.rows().end() || t->first < d->first) {
      out.complaints.push_back(Complaint::Add(t->second));
      ++t;
    } else {
      if (d->second.values != t->second.values) {
        out.complaints.push_back(
            Complaint::Modify(d->first, t->second.values));
      }
      ++d;
      ++t;
    }
  }
  return out;
}

ComplaintSet subsample_complaints(const ComplaintSet& c, double keep_fraction,
                                  uint64_t seed) {
  keep_fraction = std::clamp(keep_fraction, 0.0, 1.0);
  size_t n = c.size();
  size_t keep = static_cast<size_t>(std::llround(keep_fraction * n));
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(Rng::Mix(seed, 0x5ab5));
  for (size_t i = n; i > 1; --i) {
    size_t j = static_cast<size_t>(rng.Uniform(0, static_cast<int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }
  order.resize(keep);
  std::sort(order.begin(), order.end());
  ComplaintSet out;
  for (size_t i : order) out.complaints.push_back(c.complaints[i]);
  return out;
}

}  // namespace logrepair
