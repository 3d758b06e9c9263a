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

#include "logrepair/workload.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

#include "logrepair/error.hpp"
#include "logrepair/replay.hpp"
#include "logrepair/rng.hpp"

namespace logrepair {

void WorkloadConfig::Validate() const {
  if (n_tuples < 0 || n_attrs < 1 || v_d < 0 || n_queries < 0 || range < 0 || range > v_d ||
      zipf_s < 0 || max_increment < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid workload configuration");
  }
  if (mix.update < 0 || mix.insert < 0 || mix.del < 0 ||
      mix.update + mix.insert + mix.del <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "query mix needs a positive weight");
  }
}

Schema workload_schema(const WorkloadConfig& cfg) {
  std::vector<std::string> names;
  for (int i = 0; i < cfg.n_attrs; ++i) names.push_back("a" + std::to_string(i));
  return Schema(names);
}

Relation gen_database(const WorkloadConfig& cfg) {
  cfg.Validate();
  Rng rng(Rng::Mix(cfg.seed, 1));
  Schema schema = workload_schema(cfg);
  std::vector<Bound> hint(cfg.n_attrs, Bound{Decimal(), Decimal::FromInt(cfg.v_d)});
  Relation r(schema, hint);
  for (int t = 1; t <= cfg.n_tuples; ++t) {
    TupleRow row{t, {}};
    for (int a = 0; a < cfg.n_attrs; ++a) {
      row.values.push_back(Decimal::FromInt(rng.Uniform(0, cfg.v_d)));
    }
    r.Put(std::move(row));
  }
  return r;
}

int zipf_attr(const WorkloadConfig& cfg, double u) {
  double total = 0;
  for (int k = 1; k <= cfg.n_attrs; ++k) total += std::pow(k, -cfg.zipf_s);
  double acc = 0;
  for (int k = 1; k <= cfg.n_attrs; ++k) {
    acc += std::pow(k, -cfg.zipf_s) / total;
    if (u < acc) return k - 1;
  }
  return cfg.n_attrs - 1;
}

namespace {

LinExpr AttrExpr(int attr) {
  LinExpr e;
  e.terms.push_back(Term{Decimal::FromInt(1), attr, -1});
  return e;
}

Decimal Uniform(Rng& rng, int lo, int hi) { return Decimal::FromInt(rng.Uniform(lo, hi)); }

// Literal markers only need to be distinct within a query; Reindex assigns
// the slot ids.
Predicate GenWhere(const WorkloadConfig& cfg, Rng& rng, int* marker) {
  if (cfg.where_kind == WhereKind::kPoint) {
    LinExpr key;
    key.terms.push_back(Term{Decimal::FromInt(1), kIdAttr, -1});
    return Predicate::Atom(key, CmpOp::kEq, Uniform(rng, 1, std::max(1, cfg.n_tuples)),
                           (*marker)++);
  }
  int a = zipf_attr(cfg, rng.Unit());
  Decimal v = Uniform(rng, 0, cfg.v_d - cfg.range);
  Predicate lo = Predicate::Atom(AttrExpr(a), CmpOp::kGe, v, (*marker)++);
  Predicate hi =
      Predicate::Atom(AttrExpr(a), CmpOp::kLe, v + Decimal::FromInt(cfg.range), (*marker)++);
  return Predicate::And({std::move(lo), std::move(hi)});
}

Query GenQuery(const WorkloadConfig& cfg, Rng& rng, QueryKind kind) {
  Query q;
  q.kind = kind;
  q.table = "T";
  int marker = 0;
  if (kind == QueryKind::kInsert) {
    for (int a = 0; a < cfg.n_attrs; ++a) {
      q.values.push_back(Uniform(rng, 0, cfg.v_d));
      q.value_slots.push_back(marker++);
    }
    return q;
  }
  if (kind == QueryKind::kUpdate) {
    SetClause s;
    s.attr = zipf_attr(cfg, rng.Unit());
    if (cfg.set_kind == SetKind::kRelative) {
      s.expr = AttrExpr(s.attr);
      s.expr.constant = Uniform(rng, 1, cfg.max_increment);
    } else {
      s.expr.constant = Uniform(rng, 0, cfg.v_d);
    }
    s.expr.constant_slot = marker++;
    q.set.push_back(std::move(s));
  }
  q.where = GenWhere(cfg, rng, &marker);
  return q;
}

QueryKind DrawKind(const WorkloadConfig& cfg, Rng& rng) {
  double total = cfg.mix.update + cfg.mix.insert + cfg.mix.del;
  double u = rng.Unit() * total;
  if (u < cfg.mix.update) return QueryKind::kUpdate;
  if (u < cfg.mix.update + cfg.mix.insert) return QueryKind::kInsert;
  return QueryKind::kDelete;
}

// Same shapes, fresh literals.
void Redraw(Query* q, const WorkloadConfig& cfg, Rng& rng) {
  if (q->kind == QueryKind::kInsert) {
    for (Decimal& v : q->values) v = Uniform(rng, 0, cfg.v_d);
    return;
  }
  for (SetClause& s : q->set) {
    s.expr.constant = s.expr.HasAttributes() ? Uniform(rng, 1, cfg.max_increment)
                                             : Uniform(rng, 0, cfg.v_d);
  }
  std::function<void(Predicate&)> visit = [&](Predicate& p) {
    if (p.kind == Predicate::Kind::kAnd && p.children.size() == 2 &&
        p.children[0].kind == Predicate::Kind::kAtom && p.children[1].kind == Predicate::Kind::kAtom &&
        p.children[0].op == CmpOp::kGe && p.children[1].op == CmpOp::kLe) {
      // A range keeps its width.
      Decimal width = p.children[1].rhs - p.children[0].rhs;
      Decimal v = Uniform(rng, 0, std::max<int64_t>(0, cfg.v_d - width.raw() / Decimal::kScale));
      p.children[0].rhs = v;
      p.children[1].rhs = v + width;
      return;
    }
    if (p.kind == Predicate::Kind::kAtom) {
      bool key = p.lhs.terms.size() == 1 && p.lhs.terms[0].attr == kIdAttr;
      p.rhs = key ? Uniform(rng, 1, std::max(1, cfg.n_tuples)) : Uniform(rng, 0, cfg.v_d);
      return;
    }
    for (auto& c : p.children) visit(c);
  };
  visit(q->where);
}

}  // namespace

QueryLog gen_log(const WorkloadConfig& cfg) {
  cfg.Validate();
  Rng rng(Rng::Mix(cfg.seed, 2));
  std::vector<Query> queries;
  for (int i = 0; i < cfg.n_queries; ++i) {
    Query q = GenQuery(cfg, rng, DrawKind(cfg, rng));
    q.index = i + 1;
    queries.push_back(std::move(q));
  }
  return QueryLog(workload_schema(cfg), std::move(queries));
}

QueryLog corrupt(const QueryLog& log, const CorruptionSpec& spec, const WorkloadConfig& cfg) {
  if (spec.idx < 0 || spec.idx >= log.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "corruption index " + std::to_string(spec.idx) + " is outside the log");
  }
  const int qi = log.size() - spec.idx;
  QueryLog out = log;
  Rng rng(Rng::Mix(spec.seed, 3));
  if (spec.mode == CorruptionMode::kPerturb) {
    std::vector<int> slots;
    for (int s : log.SlotsOfQuery(qi)) {
      if (!log.slot(s).predicate_lhs) slots.push_back(s);
    }
    if (slots.empty()) throw Error(ErrorCode::kInvalidArgument, "query has no literal to perturb");
    int s = slots[rng.Uniform(0, static_cast<int64_t>(slots.size()) - 1)];
    out.SetSlotValue(s, log.SlotValue(s) + spec.delta);
    return out;
  }
  for (int attempt = 0; attempt < 100; ++attempt) {
    Query q = log.at(qi);
    Redraw(&q, cfg, rng);
    if (!StructurallyEqual(q, log.at(qi), true)) {
      out.mutable_at(qi) = std::move(q);
      out.Reindex();
      return out;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "could not draw a different query");
}

TrialBundle build_trial(const WorkloadConfig& cfg, const CorruptionSpec& spec,
                        const TrialOptions& options) {
  cfg.Validate();
  TrialBundle b;
  b.d0 = gen_database(cfg);
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    WorkloadConfig c = cfg;
    CorruptionSpec s = spec;
    if (attempt > 0) {
      c.seed = Rng::Mix(cfg.seed, 100 + attempt);
      s.seed = Rng::Mix(spec.seed, 100 + attempt);
    }
    b.truth = gen_log(c);
    if (b.truth.empty()) throw Error(ErrorCode::kInvalidArgument, "empty log");
    b.dirty = corrupt(b.truth, s, c);
    b.corrupted_query = b.truth.size() - spec.idx;
    b.dn = replay_final(b.dirty, b.d0);
    b.dn_star = replay_final(b.truth, b.d0);
    b.attempts = attempt + 1;
    if (b.d0.size() > 0 && b.dn.size() * 10 < b.d0.size()) continue;
    b.full = diff_states(b.dn, b.dn_star);
    if (options.require_complaints && b.full.empty()) continue;
    b.submitted = options.missing_rate > 0
                      ? subsample_complaints(b.full, 1 - options.missing_rate, Rng::Mix(s.seed, 4))
                      : b.full;
    if (options.require_complaints && b.submitted.empty()) continue;
    return b;
  }
  throw Error(ErrorCode::kInvalidArgument, "no draw produced a usable trial");
}

std::string manifest_json(const WorkloadConfig& cfg, const CorruptionSpec& spec,
                          const TrialOptions& options) {
  nlohmann::ordered_json j;
  j["workload"] = {{"n_tuples", cfg.n_tuples},
                   {"n_attrs", cfg.n_attrs},
                   {"v_d", cfg.v_d},
                   {"n_queries", cfg.n_queries},
                   {"range", cfg.range},
                   {"zipf_s", cfg.zipf_s},
                   {"mix",
                    {{"update", cfg.mix.update},
                     {"insert", cfg.mix.insert},
                     {"delete", cfg.mix.del}}},
                   {"set_kind", cfg.set_kind == SetKind::kConstant ? "constant" : "relative"},
                   {"where_kind", cfg.where_kind == WhereKind::kRange ? "range" : "point"},
                   {"max_increment", cfg.max_increment},
                   {"seed", cfg.seed}};
  j["corruption"] = {{"idx", spec.idx},
                     {"mode", spec.mode == CorruptionMode::kRegenerate ? "regenerate" : "perturb"},
                     {"delta", spec.delta.ToString()},
                     {"seed", spec.seed}};
  j["trial"] = {{"missing_rate", options.missing_rate},
                {"require_complaints", options.require_complaints},
                {"max_attempts", options.max_attempts}};
  return j.dump(2) + "\n";
}

}  // namespace logrepair
