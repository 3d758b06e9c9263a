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
#include <vector>

#include "logrepair/parser.hpp"
#include "logrepair/relation.hpp"
#include "logrepair/replay.hpp"

namespace logrepair::testing {

Decimal D(const std::string& text);
std::vector<Decimal> Row(std::initializer_list<const char*> values);

// Four income records, a tax update whose threshold is corrupted (85700
// instead of 87000), one insert and a derived-column update.
struct TaxFixture {
  Schema schema;
  Relation d0;
  QueryLog log;    // dirty
  QueryLog truth;  // q1 with threshold 87000
  Relation dn;     // dirty replay
  ComplaintSet complaints;  // t3 and t4 with their true values
};

TaxFixture MakeTax();

// Complaints derived from the true log for the given ids only.
ComplaintSet TaxComplaints(const TaxFixture& f, std::vector<int64_t> ids);

// Builds a relation with ids 1..n.
Relation MakeRelation(const Schema& schema,
                      const std::vector<std::vector<Decimal>>& rows,
                      Decimal hint_lo, Decimal hint_hi);

// A small random instance: two attributes, integer values within
// [0, domain],
// at most three queries and three repairable literals, one or two of them
// corrupted. `complaints` is the complete set.
struct SmallInstance {
  Schema schema;
  Relation d0;
  QueryLog truth;
  QueryLog log;
  Relation dn;
  ComplaintSet complaints;
};

SmallInstance MakeSmallInstance(uint64_t seed, int domain = 20);

// Brute-force minimum Manhattan distance over every repairable literal of
// `log`: WHERE constants range over v and v +- eps for integers v in
// [lo, hi], SET and VALUES literals over the integers in [lo, hi]. A
// candidate counts when replaying it from d0 yields `target` exactly.
// Returns -1 when no candidate works.
double GridOracle(const QueryLog& log, const Relation& d0, const Relation& target,
                  Decimal eps, int lo, int hi);

}  // namespace logrepair::testing
