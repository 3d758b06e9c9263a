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

#include <optional>
#include <string>
#include <vector>

#include "logrepair/encoder.hpp"
#include "logrepair/query.hpp"
#include "logrepair/relation.hpp"

namespace logrepair {

struct LabeledRow {
  TupleRow features;
  bool label = false;
};

// One root-to-leaf path: lo < a <= hi per attribute (either side open).
struct RangeCondition {
  int attr = 0;
  std::optional<Decimal> lo;  // exclusive
  std::optional<Decimal> hi;  // inclusive
};

struct Rule {
  std::vector<RangeCondition> conditions;
};

struct RuleSet {
  std::vector<Rule> rules;  // disjoint; a row is true iff some rule holds
  bool Matches(const TupleRow& row) const;
  // FALSE when empty, TRUE for a single unconditioned rule.
  Predicate ToPredicate() const;
};

struct TreeOptions {
  // A split needs at least this many rows on each side.
  int min_leaf = 1;
};

// Top-down induction with information-gain splits at midpoints between
// adjacent distinct values; grows until leaves are pure or cannot split.
RuleSet learn_where(const std::vector<LabeledRow>& rows, const TreeOptions& options = {});

struct SetFit {
  bool underdetermined = false;
  double residual = 0;  // root mean square over the pairs, all SET targets
};

// Refits the literals of q's SET clause from (input, output) pairs by least
// squares: the additive literal always, multiplicative literals when the
// pairs determine them. A clause without usable pairs keeps its literals.
SetFit repair_set(Query* q, const std::vector<std::pair<TupleRow, TupleRow>>& pairs);

struct DecTreeResult {
  QueryLog repaired_log;
  RuleSet rules;
  SetFit fit;
  bool structurally_different = false;
  double training_accuracy = 0;
};

// Single-query baseline: learns the WHERE clause from which rows changed
// between d0 and d1_star, then refits the SET clause on the rows it matches.
DecTreeResult dectree_repair(const QueryLog& log, const Relation& d0, const Relation& d1_star,
                             const TreeOptions& options = {});

}  // namespace logrepair
