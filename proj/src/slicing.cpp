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

#include "logrepair/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace logrepair {

namespace {

void Union(AttrSet* a, const AttrSet& b) {
  for (size_t i = 0; i < a->size(); ++i) (*a)[i] = (*a)[i] || b[i];
}

bool Overlaps(const AttrSet& a, const AttrSet& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) return true;
  }
  return false;
}

bool Covers(const AttrSet& a, const AttrSet& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (b[i] && !a[i]) return false;
  }
  return true;
}

void CollectExpr(const LinExpr& e, AttrSet* out) {
  for (const Term& t : e.terms) {
    if (t.attr != kIdAttr) (*out)[t.attr] = true;
  }
}

AttrSet Direct(const Query& q, int width) {
  AttrSet out(width, q.kind != QueryKind::kUpdate);
  if (q.kind == QueryKind::kUpdate) {
    for (const SetClause& s : q.set) out[s.attr] = true;
  }
  return out;
}

AttrSet Dependency(const Query& q, int width) {
  AttrSet out(width, false);
  if (q.kind == QueryKind::kInsert) return out;
  q.where.CollectAttrs(&out);
  for (const SetClause& s : q.set) CollectExpr(s.expr, &out);
  return out;
}

}  // namespace

ImpactProfile impact_profile(const QueryLog& log) {
  const int w = log.schema().width();
  ImpactProfile p;
  for (const Query& q : log.queries()) {
    p.direct.push_back(Direct(q, w));
    p.dependency.push_back(Dependency(q, w));
  }
  const int n = log.size();
  p.full.resize(n);
  for (int i = 0; i < n; ++i) {
    AttrSet f = p.direct[i];
    for (int j = i + 1; j < n; ++j) {
      if (Overlaps(f, p.dependency[j])) Union(&f, p.direct[j]);
    }
    p.full[i] = std::move(f);
  }
  return p;
}

AttrSet full_impact(const QueryLog& log, int i) { return impact_profile(log).full.at(i - 1); }

AttrSet complaint_attrs(const ComplaintSet& c, const Relation& dn) {
  const int w = dn.schema().width();
  AttrSet out(w, false);
  for (const Complaint& k : c.complaints) {
    const TupleRow* dirty = dn.Find(k.tuple_id());
    if (!k.expected || !dirty) {
      out.assign(w, true);
      return out;
    }
    for (int a = 0; a < w; ++a) {
      if (k.expected->values[a] != dirty->values[a]) out[a] = true;
    }
  }
  return out;
}

std::vector<int> relevant_queries(const QueryLog& log, const ComplaintSet& c,
                                  const Relation& dn, bool single_fault) {
  AttrSet ac = complaint_attrs(c, dn);
  ImpactProfile p = impact_profile(log);
  std::vector<int> out;
  if (std::none_of(ac.begin(), ac.end(), [](bool b) { return b; })) return out;
  for (int i = 0; i < log.size(); ++i) {
    bool keep = single_fault ? Covers(p.full[i], ac) : Overlaps(p.full[i], ac);
    if (keep) out.push_back(i + 1);
  }
  return out;
}

AttrSet relevant_attrs(const QueryLog& log, const std::vector<int>& queries,
                       const AttrSet& complaint) {
  ImpactProfile p = impact_profile(log);
  AttrSet out = complaint;
  for (int q : queries) {
    Union(&out, p.full[q - 1]);
    Union(&out, p.dependency[q - 1]);
  }
  return out;
}

std::vector<int64_t> changed_tuples(const Relation& a, const Relation& b) {
  std::vector<int64_t> out;
  auto ia = a.rows().begin(), ib = b.rows().begin();
  while (ia != a.rows().end() || ib != b.rows().end()) {
    if (ib == b.rows().end() || (ia != a.rows().end() && ia->first < ib->first)) {
      out.push_back((ia++)->first);
    } else if (ia == a.rows().end() || ib->first < ia->first) {
      out.push_back((ib++)->first);
    } else {
      if (ia->second.values != ib->second.values) out.push_back(ia->first);
      ++ia;
      ++ib;
    }
  }
  return out;
}

namespace {

std::vector<int64_t> NonComplaint(const std::vector<int64_t>& changed, const ComplaintSet& c) {
  std::vector<int64_t> out;
  for (int64_t id : changed) {
    if (!c.ForTuple(id)) out.push_back(id);
  }
  return out;
}

// Above this many soft tuples the exact count is too large for the dense
// simplex; a pin search replaces it.
constexpr size_t kMaxExactSoft = 24;

// Prefers repairs that touch fewer non-complaint tuples, then cheaper ones.
bool Better(const RepairResult& a, size_t nc_a, const RepairResult& b, size_t nc_b) {
  if (a.ok() != b.ok()) return a.ok();
  if (nc_a != nc_b) return nc_a < nc_b;
  return a.objective_value < b.objective_value - 1e-9;
}

}  // namespace

RepairResult tuple_slice_repair(const QueryLog& log, const Trace& trace,
                                const ComplaintSet& c, const RepairScope& scope,
                                const EncodeOptions& options, bool refine,
                                int rounds, SliceReport* report) {
  const Relation& d0 = trace.states[0];
  const Relation& dn = trace.final_state();
  std::vector<int64_t> ids = c.TupleIds();
  RepairResult step1 = basic_repair_traced(log, trace, c, scope, ids, options);
  std::vector<int64_t> nc1;
  if (step1.ok()) {
    nc1 = NonComplaint(changed_tuples(replay_final(step1.repaired_log, d0), dn), c);
  }
  step1.nc_tuples = nc1;
  if (report) {
    report->encoded_tuples = step1.encoded_tuples;
    report->nc_step1 = nc1;
    report->nc_final = nc1;
  }
  if (!step1.ok() || nc1.empty() || !refine) return step1;

  RepairResult best = step1;
  size_t best_nc = nc1.size();
  int total_solves = step1.solves;
  milp::SolveStats total_stats = step1.stats;

  // Queries the first step changed keep every literal free.
  std::set<int> touched;
  for (const ParamDelta& d : step1.param_deltas) touched.insert(d.slot.query_index);
  std::set<int> free;
  std::set<int> allowed = scope.FreeSlots(log);
  for (int q : touched) {
    for (int s : log.SlotsOfQuery(q)) {
      if (allowed.count(s)) free.insert(s);
    }
  }
  RepairScope step2_scope;
  step2_scope.window = scope.window;
  step2_scope.free_slots = free;

  auto tally = [&](const RepairResult& r) {
    total_solves += r.solves;
    total_stats.nodes += r.stats.nodes;
    total_stats.simplex_iterations += r.stats.simplex_iterations;
    total_stats.wall_secs += r.stats.wall_secs;
  };
  auto finish = [&]() {
    best.solves = total_solves;
    best.stats.nodes = total_stats.nodes;
    best.stats.simplex_iterations = total_stats.simplex_iterations;
    best.stats.wall_secs = total_stats.wall_secs;
    best.encoded_tuples = step1.encoded_tuples;
    if (report) report->nc_final = best.nc_tuples;
    return best;
  };

  auto consider = [&](RepairResult& r) {
    std::vector<int64_t> nc =
        NonComplaint(changed_tuples(replay_final(r.repaired_log, d0), dn), c);
    r.nc_tuples = nc;
    if (Better(r, nc.size(), best, best_nc)) {
      best = r;
      best_nc = nc.size();
    }
    return nc;
  };

  // Greedy stand-in for the exact count when too many tuples are soft: pins
  // disturbed tuples a batch at a time, keeps every batch that stays
  // feasible and halves the ones that do not, so only tuples that must
  // change stay unpinned.
  auto group_pins = [&](const std::vector<int64_t>& start, int max_rounds) {
    std::set<int64_t> kept(ids.begin(), ids.end());
    std::set<int64_t> must_change;
    std::optional<RepairResult> current;
    auto attempt = [&](const std::vector<int64_t>& batch) {
      if (total_stats.wall_secs > options.time_limit_secs) return false;
      std::vector<int64_t> filter(kept.begin(), kept.end());
      filter.insert(filter.end(), batch.begin(), batch.end());
      EncodeOptions hard = options;
      hard.export_lp_path.clear();
      RepairResult r = basic_repair_traced(log, trace, c, scope, filter, hard);
      tally(r);
      if (!r.ok() || !r.verified) return false;
      kept.insert(batch.begin(), batch.end());
      current = std::move(r);
      return true;
    };
    std::vector<int64_t> pending = start;
    for (int round = 0; round < max_rounds && !pending.empty(); ++round) {
      std::vector<std::vector<int64_t>> stack{pending};
      while (!stack.empty()) {
        std::vector<int64_t> batch = std::move(stack.back());
        stack.pop_back();
        if (attempt(batch)) continue;
        if (total_stats.wall_secs > options.time_limit_secs) return;
        if (batch.size() == 1) {
          must_change.insert(batch[0]);
          continue;
        }
        size_t half = batch.size() / 2;
        stack.emplace_back(batch.begin() + half, batch.end());
        stack.emplace_back(batch.begin(), batch.begin() + half);
      }
      if (!current) return;
      pending.clear();
      for (int64_t id : consider(*current)) {
        if (!kept.count(id) && !must_change.count(id)) pending.push_back(id);
      }
    }
  };

  // Pin the tuples step 1 disturbed to their dirty final values and re-solve
  // over the same scope. Cheap because the pins fix most indicators.
  std::set<int64_t> pinned(ids.begin(), ids.end());
  pinned.insert(nc1.begin(), nc1.end());
  bool pin_failed = false;
  for (int round = 0; round < rounds; ++round) {
    EncodeOptions hard = options;
    hard.export_lp_path.clear();
    std::vector<int64_t> filter(pinned.begin(), pinned.end());
    RepairResult r = basic_repair_traced(log, trace, c, scope, filter, hard);
    tally(r);
    if (!r.ok() || !r.verified) {
      pin_failed = r.status == RepairStatus::kInfeasible;
      break;
    }
    std::vector<int64_t> nc = consider(r);
    if (nc.empty()) return finish();
    bool grew = false;
    for (int64_t id : nc) grew = pinned.insert(id).second || grew;
    if (!grew) break;
  }
  if (!pin_failed) return finish();
  if (nc1.size() > kMaxExactSoft) {
    group_pins(nc1, rounds);
    return finish();
  }

  // Some disturbed tuples must change (e.g. complaints are missing): count
  // them instead of pinning them.
  std::set<int64_t> soft(nc1.begin(), nc1.end());
  bool counted = false;
  for (int round = 0; round < rounds; ++round) {
    EncodeOptions count = options;
    count.soft_tuples.assign(soft.begin(), soft.end());
    count.objective = EncodeOptions::Objective::kSoftCount;
    count.export_lp_path.clear();
    count.time_limit_secs = options.time_limit_secs / (2.0 * rounds);
    RepairResult a = basic_repair_traced(log, trace, c, step2_scope, ids, count);
    tally(a);
    if (!a.ok()) break;
    counted = true;
    EncodeOptions dist = count;
    dist.objective = EncodeOptions::Objective::kManhattan;
    dist.soft_cap = static_cast<int>(std::lround(a.objective_value));
    RepairResult b = basic_repair_traced(log, trace, c, step2_scope, ids, dist);
    tally(b);
    RepairResult& cand = b.ok() ? b : a;
    if (!cand.ok() || !cand.verified) break;
    if (&cand == &a) {
      // Distance of the count-optimal repair, for comparison.
      double obj = 0;
      for (const ParamDelta& d : a.param_deltas) {
        obj += (d.new_value - d.old_value).Abs().ToDouble();
      }
      a.objective_value = obj;
    }
    std::vector<int64_t> nc =
        NonComplaint(changed_tuples(replay_final(cand.repaired_log, d0), dn), c);
    cand.nc_tuples = nc;
    if (Better(cand, nc.size(), best, best_nc)) {
      best = cand;
      best_nc = nc.size();
    }
    bool grew = false;
    for (int64_t id : nc) grew = soft.insert(id).second || grew;
    if (!grew) break;
  }
  if (!counted) group_pins(nc1, rounds);
  return finish();
}

RepairResult sliced_repair(const QueryLog& log, const Trace& trace,
                           const ComplaintSet& c, const RepairScope& scope,
                           const SliceOptions& slice, const EncodeOptions& options,
                           SliceReport* report) {
  const Relation& dn = trace.final_state();
  SliceReport local;
  SliceReport& rep = report ? *report : local;
  rep.complaint_attrs = complaint_attrs(c, dn);

  RepairScope s = scope;
  std::set<int> window(scope.window.begin(), scope.window.end());
  if (slice.query || slice.single_fault) {
    rep.relevant_queries = relevant_queries(log, c, dn, slice.single_fault);
    std::vector<int> kept;
    for (int q : scope.window) {
      if (std::binary_search(rep.relevant_queries.begin(), rep.relevant_queries.end(), q)) {
        kept.push_back(q);
      }
    }
    s.window = kept;
    if (scope.free_slots) {
      std::set<int> fs;
      for (int slot : *scope.free_slots) {
        if (std::binary_search(kept.begin(), kept.end(), log.slot(slot).query_index)) {
          fs.insert(slot);
        }
      }
      s.free_slots = fs;
    }
  } else {
    rep.relevant_queries = scope.window;
  }

  EncodeOptions opt = options;
  if (slice.attr) {
    std::vector<int> freed;
    for (int slot : s.FreeSlots(log)) freed.push_back(log.slot(slot).query_index);
    std::sort(freed.begin(), freed.end());
    freed.erase(std::unique(freed.begin(), freed.end()), freed.end());
    rep.relevant_attrs = relevant_attrs(log, freed, rep.complaint_attrs);
    opt.encoded_attrs = rep.relevant_attrs;
  } else {
    rep.relevant_attrs.assign(log.schema().width(), true);
  }

  RepairResult r;
  if (slice.tuple) {
    r = tuple_slice_repair(log, trace, c, s, opt, slice.refine, slice.refine_rounds, &rep);
  } else {
    r = basic_repair_traced(log, trace, c, s, std::nullopt, opt);
    rep.encoded_tuples = r.encoded_tuples;
    if (r.ok()) {
      r.nc_tuples = NonComplaint(
          changed_tuples(replay_final(r.repaired_log, trace.states[0]), dn), c);
    }
    rep.nc_final = r.nc_tuples;
  }
  return r;
}

}  // namespace logrepair
