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
#include <vector>

#include "logrepair/encoder.hpp"

namespace logrepair {

// Attribute sets are bitmaps over the schema.
using AttrSet = std::vector<bool>;

// Per query (0-based vector index = query index - 1).
struct ImpactProfile {
  std::vector<AttrSet> direct;      // attributes the query writes
  std::vector<AttrSet> dependency;  // attributes it reads (WHERE and SET)
  std::vector<AttrSet> full;        // transitive write set through later reads
};

ImpactProfile impact_profile(const QueryLog& log);
// Forward accumulation from query i (1-based): start with its direct impact
// and add the direct impact of every later query whose reads overlap.
AttrSet full_impact(const QueryLog& log, int i);

// Attributes where some complaint differs from the dirty state; deletions
// and additions contribute every attribute.
AttrSet complaint_attrs(const ComplaintSet& c, const Relation& dn);

// Queries whose full impact overlaps the complaint attributes (covers them
// entirely when single_fault).
std::vector<int> relevant_queries(const QueryLog& log, const ComplaintSet& c,
                                  const Relation& dn, bool single_fault);

// Complaint attributes plus the full impact and reads of `queries`.
AttrSet relevant_attrs(const QueryLog& log, const std::vector<int>& queries,
                       const AttrSet& complaint);

struct SliceOptions {
  bool tuple = false;
  bool query = false;
  bool attr = false;
  bool single_fault = false;
  // Tuple slicing: run the second step against affected non-complaint tuples.
  bool refine = true;
  int refine_rounds = 3;
};

struct SliceReport {
  AttrSet complaint_attrs;
  std::vector<int> relevant_queries;
  AttrSet relevant_attrs;
  std::vector<int64_t> encoded_tuples;
  std::vector<int64_t> nc_step1;  // non-complaint tuples changed by step 1
  std::vector<int64_t> nc_final;
};

// Tuples whose final value (or presence) differs between two states.
std::vector<int64_t> changed_tuples(const Relation& a, const Relation& b);

// Two-step tuple slicing. Step 1 encodes only complaint tuples; when its
// repair changes other tuples (NC), step 2 pins NC tuples to their dirty
// final values and re-solves, adding newly disturbed tuples each round. If
// the pins are infeasible it re-encodes the queries step 1 touched with NC
// tuples soft, first minimizing how many change and then the distance at
// that count.
RepairResult tuple_slice_repair(const QueryLog& log, const Trace& trace,
                                const ComplaintSet& c, const RepairScope& scope,
                                const EncodeOptions& options, bool refine,
                                int rounds, SliceReport* report = nullptr);

// Basic repair of `scope` with the slicing options applied. `trace` is the
// dirty replay of `log`. Query slicing narrows the free literals to
// relevant queries; attribute slicing restricts the encoded attributes.
RepairResult sliced_repair(const QueryLog& log, const Trace& trace,
                           const ComplaintSet& c, const RepairScope& scope,
                           const SliceOptions& slice, const EncodeOptions& options,
                           SliceReport* report = nullptr);

}  // namespace logrepair
