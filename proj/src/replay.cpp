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

#include "logrepair/replay.hpp"

#include "logrepair/error.hpp"

namespace logrepair {

Relation apply_query(const Query& q, const Relation& state,
                     std::optional<int64_t>* inserted_id) {
  Relation out = state;
  if (inserted_id) inserted_id->reset();
  switch (q.kind) {
    case QueryKind::kUpdate:
      for (const auto& [id, row] : state.rows()) {
        if (!q.where.Eval(row)) continue;
        TupleRow next = row;
        // SET expressions read the pre-update row.
        for (const auto& s : q.set) next.values[s.attr] = s.expr.Eval(row);
        out.Put(std::move(next));
      }
      break;
    case QueryKind::kDelete:
      for (const auto& [id, row] : state.rows()) {
        if (q.where.Eval(row)) out.Erase(id);
      }
      break;
    case QueryKind::kInsert: {
      if (static_cast<int>(q.values.size()) != state.schema().width()) {
        throw Error(ErrorCode::kSchemaMismatch, "INSERT width mismatch");
      }
      int64_t id = state.next_id();
      if (state.Contains(id)) {
        throw Error(ErrorCode::kDuplicateInsertId, std::to_string(id));
      }
      out.Put(TupleRow{id, q.values});
      if (inserted_id) *inserted_id = id;
      break;
    }
  }
  return out;
}

Trace run_log(const QueryLog& log, const Relation& d0) {
  Trace trace;
  trace.states.reserve(log.size() + 1);
  trace.states.push_back(d0);
  for (const Query& q : log.queries()) {
    std::optional<int64_t> id;
    trace.states.push_back(apply_query(q, trace.states.back(), &id));
    trace.inserted_ids.push_back(id);
  }
  return trace;
}

Relation replay_final(const QueryLog& log, const Relation& d0) {
  Relation state = d0;
  for (const Query& q : log.queries()) state = apply_query(q, state);
  return state;
}

}  // namespace logrepair
