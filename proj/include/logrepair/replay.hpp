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
#include <vector>

#include "logrepair/query.hpp"
#include "logrepair/relation.hpp"

namespace logrepair {

inline bool eval_predicate(const Predicate& p, const TupleRow& t) {
  return p.Eval(t);
}

// Inserts receive next_id() of the input state. `inserted_id` reports it.
Relation apply_query(const Query& q, const Relation& state,
                     std::optional<int64_t>* inserted_id = nullptr);

struct Trace {
  // states[i] is D_i; states[0] is the input.
  std::vector<Relation> states;
  // inserted_ids[i - 1] is the id created by query i, if it is an INSERT.
  std::vector<std::optional<int64_t>> inserted_ids;

  const Relation& final_state() const { return states.back(); }
};

Trace run_log(const QueryLog& log, const Relation& d0);
// Replays only the final state, without keeping intermediate copies.
Relation replay_final(const QueryLog& log, const Relation& d0);

}  // namespace logrepair
