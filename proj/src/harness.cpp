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

#include "logrepair/harness.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "logrepair/error.hpp"
#include "logrepair/replay.hpp"
#include "logrepair/rng.hpp"
#include "logrepair/slicing.hpp"

namespace logrepair {

Metrics eval_repair(const TrialBundle& bundle, const QueryLog& repaired) {
  Metrics m;
  Relation fixed = replay_final(repaired, bundle.d0);
  std::vector<int64_t> r = changed_tuples(fixed, bundle.dn);
  auto correct = [&](int64_t id) {
    const TupleRow* got = fixed.Find(id);
    const TupleRow* want = bundle.dn_star.Find(id);
    if (!got || !want) return !got && !want;
    return got->values == want->values;
  };
  if (r.empty()) {
    m.precision = bundle.full.empty() ? 1 : 0;
  } else {
    int good = 0;
    for (int64_t id : r) good += correct(id);
    m.precision = static_cast<double>(good) / r.size();
  }
  if (bundle.full.empty()) {
    m.recall = 1;
  } else {
    int hit = 0;
    for (const Complaint& c : bundle.full.complaints) hit += correct(c.tuple_id());
    m.recall = static_cast<double>(hit) / bundle.full.size();
  }
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0;
  return m;
}

Metrics eval_repair(const TrialBundle& bundle, const RepairResult& result) {
  Metrics m = eval_repair(bundle, result.ok() ? result.repaired_log : bundle.dirty);
  m.status = RepairStatusName(result.status);
  m.infeasible = result.status == RepairStatus::kInfeasible ||
                 result.status == RepairStatus::kNoRepairFound;
  m.timed_out = result.status == RepairStatus::kTimedOut;
  m.solves = result.solves;
  m.nodes = result.stats.nodes;
  m.window_first = result.window_first;
  m.window_last = result.window_last;
  m.model_size = result.model_size;
  return m;
}

Method make_method(const std::string& name, const std::string& mode, int k,
                   const std::string& slices, double time_limit) {
  Method m;
  m.name = name;
  if (mode == "dectree") {
    m.dectree = true;
    return m;
  }
  if (mode == "basic") {
    m.repair.mode = RepairMode::kBasic;
  } else if (mode == "inc") {
    m.repair.mode = RepairMode::kInc;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown mode " + mode);
  }
  m.repair.inc.k = k;
  m.repair.inc.time_budget_secs = time_limit;
  std::stringstream ss(slices);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part == "tuple") {
      m.repair.inc.slice.tuple = true;
    } else if (part == "query") {
      m.repair.inc.slice.query = true;
    } else if (part == "attr") {
      m.repair.inc.slice.attr = true;
    } else if (!part.empty() && part != "none") {
      throw Error(ErrorCode::kInvalidArgument, "unknown slice " + part);
    }
  }
  return m;
}

MethodRun run_method(const Method& method, const TrialBundle& bundle) {
  MethodRun run;
  auto t0 = std::chrono::steady_clock::now();
  if (method.dectree) {
    DecTreeResult d = dectree_repair(bundle.dirty, bundle.d0, bundle.dn_star, method.tree);
    run.result.repaired_log = d.repaired_log;
    run.result.status = RepairStatus::kRepaired;
    run.result.verified = replay_final(d.repaired_log, bundle.d0) == bundle.dn_star;
  } else {
    run.result = run_repair(bundle.dirty, bundle.d0, bundle.dn, bundle.submitted, method.repair);
  }
  double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  run.metrics = eval_repair(bundle, run.result);
  run.metrics.wall_ms = ms;
  return run;
}

namespace {

using nlohmann::json;

template <typename T>
std::vector<T> Axis(const json& grid, const char* key) {
  std::vector<T> out;
  if (grid.contains(key)) out = grid.at(key).get<std::vector<T>>();
  return out;
}

}  // namespace

ExperimentSpec parse_experiment(const std::string& json_text) {
  ExperimentSpec spec;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("experiment config: ") + e.what());
  }
  try {
    const json w = j.value("workload", json::object());
    WorkloadConfig& b = spec.base;
    b.n_tuples = w.value("n_tuples", b.n_tuples);
    b.n_attrs = w.value("n_attrs", b.n_attrs);
    b.v_d = w.value("v_d", b.v_d);
    b.n_queries = w.value("n_queries", b.n_queries);
    b.range = w.value("range", b.range);
    b.zipf_s = w.value("zipf_s", b.zipf_s);
    b.max_increment = w.value("max_increment", b.max_increment);
    if (w.contains("mix")) {
      const json& m = w.at("mix");
      b.mix.update = m.value("update", 0.0);
      b.mix.insert = m.value("insert", 0.0);
      b.mix.del = m.value("delete", 0.0);
    }
    std::string set_kind = w.value("set_kind", "constant");
    std::string where_kind = w.value("where_kind", "range");
    if (set_kind != "constant" && set_kind != "relative") {
      throw Error(ErrorCode::kInvalidArgument, "set_kind");
    }
    if (where_kind != "range" && where_kind != "point") {
      throw Error(ErrorCode::kInvalidArgument, "where_kind");
    }
    b.set_kind = set_kind == "constant" ? SetKind::kConstant : SetKind::kRelative;
    b.where_kind = where_kind == "range" ? WhereKind::kRange : WhereKind::kPoint;

    const json c = j.value("corruption", json::object());
    std::string mode = c.value("mode", "regenerate");
    spec.corruption.mode =
        mode == "perturb" ? CorruptionMode::kPerturb : CorruptionMode::kRegenerate;
    spec.corruption.delta = Decimal::FromDouble(c.value("delta", 1.0));
    spec.corruption.idx = c.value("idx", 0);
    spec.trial.missing_rate = j.value("missing_rate", 0.0);
    spec.trial.require_complaints = j.value("require_complaints", true);

    const json g = j.value("grid", json::object());
    spec.n_tuples = Axis<int>(g, "n_tuples");
    spec.n_attrs = Axis<int>(g, "n_attrs");
    spec.n_queries = Axis<int>(g, "n_queries");
    spec.idx = Axis<int>(g, "idx");
    spec.missing_rate = Axis<double>(g, "missing_rate");
    for (const json& m : j.value("methods", json::array())) {
      Method method =
          make_method(m.value("name", m.value("mode", "inc")), m.value("mode", "inc"),
                      m.value("k", 1), m.value("slice", ""), m.value("time_limit", 1000.0));
      method.repair.inc.slice.single_fault = m.value("single_fault", false);
      method.repair.inc.slice.refine = !m.value("no_refine", false);
      method.repair.inc.encode.epsilon = Decimal::FromDouble(m.value("epsilon", 0.001));
      method.tree.min_leaf = m.value("min_leaf", 1);
      spec.methods.push_back(method);
    }
    spec.seeds = j.value("seeds", 1);
    spec.seed_base = j.value("seed_base", 1);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("experiment config: ") + e.what());
  }
  return spec;
}

std::vector<TrialRecord> run_trials(const ExperimentSpec& spec,
                                    const std::function<void(const TrialRecord&)>& on_record) {
  std::vector<TrialRecord> out;
  auto axis = [](const std::vector<int>& v, int base) {
    return v.empty() ? std::vector<int>{base} : v;
  };
  std::vector<double> rates =
      spec.missing_rate.empty() ? std::vector<double>{spec.trial.missing_rate} : spec.missing_rate;
  for (int nd : axis(spec.n_tuples, spec.base.n_tuples)) {
    for (int na : axis(spec.n_attrs, spec.base.n_attrs)) {
      for (int nq : axis(spec.n_queries, spec.base.n_queries)) {
        for (int idx : axis(spec.idx, spec.corruption.idx)) {
          for (double rate : rates) {
            for (int s = 0; s < spec.seeds; ++s) {
              WorkloadConfig cfg = spec.base;
              cfg.n_tuples = nd;
              cfg.n_attrs = na;
              cfg.n_queries = nq;
              cfg.seed = spec.seed_base + s;
              CorruptionSpec cs = spec.corruption;
              cs.idx = idx;
              cs.seed = Rng::Mix(cfg.seed, 9);
              TrialOptions to = spec.trial;
              to.missing_rate = rate;
              TrialBundle bundle;
              std::string error;
              try {
                bundle = build_trial(cfg, cs, to);
              } catch (const Error& e) {
                error = e.what();
              }
              for (const Method& m : spec.methods) {
                TrialRecord rec;
                rec.method = m.name;
                rec.cfg = cfg;
                rec.corruption = cs;
                rec.missing_rate = rate;
                if (!error.empty()) {
                  rec.error = error;
                  rec.metrics.status = "TrialError";
                } else {
                  rec.complaints = static_cast<int>(bundle.full.size());
                  rec.submitted = static_cast<int>(bundle.submitted.size());
                  try {
                    rec.metrics = run_method(m, bundle).metrics;
                  } catch (const Error& e) {
                    rec.error = e.what();
                    rec.metrics.status = "Error";
                  }
                }
                if (on_record) on_record(rec);
                out.push_back(std::move(rec));
              }
            }
          }
        }
      }
    }
  }
  return out;
}

namespace {

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string CellKey(const TrialRecord& r) {
  return r.method + "|" + std::to_string(r.cfg.n_tuples) + "|" + std::to_string(r.cfg.n_attrs) +
         "|" + std::to_string(r.cfg.n_queries) + "|" + std::to_string(r.corruption.idx) + "|" +
         Num(r.missing_rate);
}

std::string Quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << "row,method,n_tuples,n_attrs,n_queries,v_d,range,zipf_s,set_kind,where_kind,idx,"
        "missing_rate,seed,complaints,submitted,status,precision,recall,f1,wall_ms,solves,"
        "nodes,window_first,window_last,vars,binaries,constraints,error\n";
  auto cfg_cols = [&](const TrialRecord& r) {
    os << Quote(r.method) << ',' << r.cfg.n_tuples << ',' << r.cfg.n_attrs << ','
       << r.cfg.n_queries << ',' << r.cfg.v_d << ',' << r.cfg.range << ',' << Num(r.cfg.zipf_s)
       << ',' << (r.cfg.set_kind == SetKind::kConstant ? "constant" : "relative") << ','
       << (r.cfg.where_kind == WhereKind::kRange ? "range" : "point") << ',' << r.corruption.idx
       << ',' << Num(r.missing_rate) << ',';
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<const TrialRecord*>> cells;
  for (const TrialRecord& r : records) {
    const Metrics& m = r.metrics;
    os << "trial,";
    cfg_cols(r);
    os << r.cfg.seed << ',' << r.complaints << ',' << r.submitted << ',' << m.status << ','
       << Num(m.precision) << ',' << Num(m.recall) << ',' << Num(m.f1) << ',' << Num(m.wall_ms)
       << ',' << m.solves << ',' << m.nodes << ',' << m.window_first << ',' << m.window_last
       << ',' << m.model_size.vars << ',' << m.model_size.binaries << ','
       << m.model_size.constraints << ',' << Quote(r.error) << '\n';
    std::string key = CellKey(r);
    if (!cells.count(key)) order.push_back(key);
    cells[key].push_back(&r);
  }
  for (const std::string& key : order) {
    const auto& rs = cells[key];
    double n = static_cast<double>(rs.size());
    double p = 0, rc = 0, f = 0, ms = 0, solves = 0, nodes = 0, vars = 0, bins = 0, cons = 0,
           comp = 0, sub = 0;
    int repaired = 0;
    for (const TrialRecord* r : rs) {
      const Metrics& m = r->metrics;
      p += m.precision;
      rc += m.recall;
      f += m.f1;
      ms += m.wall_ms;
      solves += m.solves;
      nodes += m.nodes;
      vars += m.model_size.vars;
      bins += m.model_size.binaries;
      cons += m.model_size.constraints;
      comp += r->complaints;
      sub += r->submitted;
      repaired += m.status == "Repaired";
    }
    os << "mean,";
    cfg_cols(*rs[0]);
    os << ',' << Num(comp / n) << ',' << Num(sub / n) << ",repaired " << repaired << '/'
       << rs.size() << ',' << Num(p / n) << ',' << Num(rc / n) << ',' << Num(f / n) << ','
       << Num(ms / n) << ',' << Num(solves / n) << ',' << Num(nodes / n) << ",,,"
       << Num(vars / n) << ',' << Num(bins / n) << ',' << Num(cons / n) << ",\n";
  }
  return os.str();
}

}  // namespace logrepair
