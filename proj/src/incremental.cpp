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

#include "logrepair/incremental.hpp"

#include <algorithm>
#include <chrono>
#include <optional>

#include "logrepair/error.hpp"

namespace logrepair {

namespace {

Trace DirtyTrace(const QueryLog& log, const Relation& d0, const Relation& dn) {
  Trace trace = run_log(log, d0);
  if (!(trace.final_state() == dn)) {
    throw Error(ErrorCode::kDirtyReplayMismatch,
                "replaying the log from D_0 does not reproduce the given final state");
  }
  return trace;
}

double Since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RepairResult inc_repair(const QueryLog& log, const Relation& d0, const Relation& dn,
                        const ComplaintSet& c, const IncConfig& cfg) {
  if (cfg.k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  Trace trace = DirtyTrace(log, d0, dn);
  c.Validate();

  RepairResult out;
  out.repaired_log = log;
  out.status = RepairStatus::kNoRepairFound;
  if (c.empty()) {
    out.status = RepairStatus::kRepaired;
    out.verified = true;
    return out;
  }

  std::vector<std::pair<int, int>> windows;
  for (int last = log.size(); last >= 1; last -= cfg.k) {
    windows.push_back({std::max(1, last - cfg.k + 1), last});
  }
  std::vector<int> relevant;
  const bool skip = cfg.slice.query || cfg.slice.single_fault;
  if (skip) relevant = relevant_queries(log, c, dn, cfg.slice.single_fault);
  auto is_relevant = [&](int first, int last) {
    for (int q : relevant) {
      if (q >= first && q <= last) return true;
    }
    return false;
  };
  size_t live = 0;
  for (auto [first, last] : windows) live += !skip || is_relevant(first, last);
  const double share =
      std::max(cfg.min_window_secs, cfg.time_budget_secs / std::max<size_t>(1, live));

  bool timed_out = false;
  milp::SolveStats total;
  std::optional<RepairResult> fallback;
  auto finish = [&](RepairResult r) {
    r.solves = out.solves;
    r.stats.nodes = total.nodes;
    r.stats.simplex_iterations = total.simplex_iterations;
    r.stats.wall_secs = total.wall_secs;
    return r;
  };
  for (auto [first, last] : windows) {
    if (skip && !is_relevant(first, last)) continue;
    double left = cfg.time_budget_secs - Since(t0);
    if (left <= 0) {
      timed_out = true;
      break;
    }
    EncodeOptions opt = cfg.encode;
    opt.time_limit_secs = std::min(share, left);
    RepairResult r = sliced_repair(log, trace, c, RepairScope::Window(first, last), cfg.slice, opt);
    out.solves += r.solves;
    total.nodes += r.stats.nodes;
    total.simplex_iterations += r.stats.simplex_iterations;
    total.wall_secs += r.stats.wall_secs;
    if (r.status == RepairStatus::kTimedOut) timed_out = true;
    if (r.ok()) {
      r.window_first = first;
      r.window_last = last;
      const bool clean = !cfg.slice.tuple || r.nc_tuples.empty();
      if (clean || !cfg.prefer_clean) return finish(r);
      if (!fallback || r.nc_tuples.size() < fallback->nc_tuples.size()) {
        fallback = std::move(r);
      }
    }
  }
  if (fallback) return finish(*fallback);
  out.stats = total;
  if (timed_out && cfg.time_budget_secs - Since(t0) <= 0) {
    out.status = RepairStatus::kTimedOut;
    out.note = "time budget exhausted";
  } else {
    out.note = timed_out ? "no window repaired; some windows hit their limit"
                         : "no window admits a repair";
  }
  return out;
}

RepairResult run_repair(const QueryLog& log, const Relation& d0, const Relation& dn,
                        const ComplaintSet& c, const RepairConfig& cfg) {
  if (cfg.mode == RepairMode::kInc) return inc_repair(log, d0, dn, c, cfg.inc);
  Trace trace = DirtyTrace(log, d0, dn);
  EncodeOptions opt = cfg.inc.encode;
  opt.time_limit_secs = cfg.inc.time_budget_secs;
  RepairResult r = sliced_repair(log, trace, c, RepairScope::All(log), cfg.inc.slice, opt);
  if (r.ok()) {
    r.window_first = 1;
    r.window_last = log.size();
  }
  return r;
}

}  // namespace logrepair
