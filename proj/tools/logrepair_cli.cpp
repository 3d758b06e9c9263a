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


// Command-line front end: workload generation, replay, complaint diffing,
// repair, scoring, experiment matrices and model export.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "logrepair/dectree.hpp"
#include "logrepair/encoder.hpp"
#include "logrepair/error.hpp"
#include "logrepair/harness.hpp"
#include "logrepair/incremental.hpp"
#include "logrepair/io.hpp"
#include "logrepair/milp/lp_format.hpp"
#include "logrepair/parser.hpp"
#include "logrepair/replay.hpp"
#include "logrepair/rng.hpp"
#include "logrepair/workload.hpp"

namespace {

using namespace logrepair;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitInput = 4;

// Writes to `path`, or stdout when it is empty or "-".
void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteFile(path, text);
  }
}

Relation LoadCsv(const std::string& path) { return ParseCsv(ReadFile(path)); }

QueryLog LoadLog(const std::string& path, const Schema& schema) {
  return parse_log(ReadFile(path), schema);
}

struct WorkloadFlags {
  WorkloadConfig cfg;
  std::string set_kind = "constant";
  std::string where_kind = "range";
  std::vector<double> mix;

  void Add(CLI::App* app) {
    app->add_option("--n-tuples", cfg.n_tuples, "N_D")->capture_default_str();
    app->add_option("--n-attrs", cfg.n_attrs, "N_a")->capture_default_str();
    app->add_option("--v-d", cfg.v_d, "value domain maximum")->capture_default_str();
    app->add_option("--n-queries", cfg.n_queries, "N_q")->capture_default_str();
    app->add_option("--range", cfg.range, "range predicate width")->capture_default_str();
    app->add_option("--zipf", cfg.zipf_s, "attribute skew exponent")->capture_default_str();
    app->add_option("--max-increment", cfg.max_increment, "relative SET increment bound")
        ->capture_default_str();
    app->add_option("--set-kind", set_kind, "constant | relative")
        ->check(CLI::IsMember({"constant", "relative"}))
        ->capture_default_str();
    app->add_option("--where-kind", where_kind, "range | point")
        ->check(CLI::IsMember({"range", "point"}))
        ->capture_default_str();
    app->add_option("--mix", mix, "UPDATE,INSERT,DELETE weights")->delimiter(',')->expected(3);
  }

  WorkloadConfig Resolve() const {
    WorkloadConfig c = cfg;
    c.set_kind = set_kind == "relative" ? SetKind::kRelative : SetKind::kConstant;
    c.where_kind = where_kind == "point" ? WhereKind::kPoint : WhereKind::kRange;
    if (mix.size() == 3) c.mix = QueryMix{mix[0], mix[1], mix[2]};
    return c;
  }
};

struct CorruptFlags {
  int idx = 0;
  std::string mode = "regenerate";
  double delta = 1;

  void Add(CLI::App* app) {
    app->add_option("--idx", idx, "corrupted query, counted back from the newest (0)")
        ->capture_default_str();
    app->add_option("--corrupt-mode", mode, "regenerate | perturb")
        ->check(CLI::IsMember({"regenerate", "perturb"}))
        ->capture_default_str();
    app->add_option("--delta", delta, "perturb shift")->capture_default_str();
  }

  CorruptionSpec Resolve(uint64_t seed) const {
    CorruptionSpec s;
    s.idx = idx;
    s.mode = mode == "perturb" ? CorruptionMode::kPerturb : CorruptionMode::kRegenerate;
    s.delta = Decimal::FromDouble(delta);
    s.seed = Rng::Mix(seed, 9);
    return s;
  }
};

struct RepairFlags {
  std::string mode = "inc";
  int k = 1;
  std::string slice;
  bool single_fault = false;
  bool no_refine = false;
  double epsilon = 0.001;
  double time_limit = 1000;
  int min_leaf = 1;
  std::string export_lp;

  void Add(CLI::App* app) {
    app->add_option("--mode", mode, "basic | inc | dectree")
        ->check(CLI::IsMember({"basic", "inc", "dectree"}))
        ->capture_default_str();
    app->add_option("--k", k, "Inc window size")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--slice", slice, "comma list of tuple, query, attr");
    app->add_flag("--single-fault", single_fault, "assume one corrupted query");
    app->add_flag("--no-refine", no_refine, "skip the tuple-slicing refinement");
    app->add_option("--epsilon", epsilon, "strict-inequality gap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--time-limit", time_limit, "seconds")->capture_default_str();
    app->add_option("--min-leaf", min_leaf, "DecTree minimum leaf size")->capture_default_str();
    app->add_option("--export-lp", export_lp, "write the model, before solving, to this path");
  }

  Method Resolve() const {
    Method m = make_method(mode, mode, k, slice, time_limit);
    m.repair.inc.slice.single_fault = single_fault;
    m.repair.inc.slice.refine = !no_refine;
    m.repair.inc.encode.epsilon = Decimal::FromDouble(epsilon);
    m.repair.inc.encode.export_lp_path = export_lp;
    m.tree.min_leaf = min_leaf;
    return m;
  }
};

int ExitFor(RepairStatus s) {
  switch (s) {
    case RepairStatus::kRepaired: return kExitOk;
    case RepairStatus::kTimedOut: return kExitTimeout;
    case RepairStatus::kInfeasible:
    case RepairStatus::kNoRepairFound: return kExitInfeasible;
  }
  return kExitInfeasible;
}

ordered_json ReportJson(const RepairResult& r, const Schema& schema, double wall_ms) {
  ordered_json j;
  j["status"] = RepairStatusName(r.status);
  j["objective"] = r.objective_value;
  j["verified"] = r.verified;
  j["window"] = {r.window_first, r.window_last};
  j["solves"] = r.solves;
  j["nodes"] = r.stats.nodes;
  j["simplex_iterations"] = r.stats.simplex_iterations;
  j["wall_ms"] = wall_ms;
  j["model"] = {{"vars", r.model_size.vars},
                {"binaries", r.model_size.binaries},
                {"constraints", r.model_size.constraints}};
  ordered_json deltas = ordered_json::array();
  for (const ParamDelta& d : r.param_deltas) {
    deltas.push_back({{"query", d.slot.query_index},
                      {"slot", d.slot.slot_id},
                      {"kind", SlotKindName(d.slot.kind)},
                      {"old", d.old_value.ToString()},
                      {"new", d.new_value.ToString()}});
  }
  j["changes"] = deltas;
  j["non_complaint_changed"] = r.nc_tuples;
  ordered_json changed = ordered_json::array();
  for (int q = 1; q <= r.repaired_log.size(); ++q) {
    for (const ParamDelta& d : r.param_deltas) {
      if (d.slot.query_index == q) {
        changed.push_back(render(r.repaired_log.at(q), schema));
        break;
      }
    }
  }
  j["repaired_queries"] = changed;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

int Run(int argc, char** argv) {
  CLI::App app{"Query-log repair from data complaints"};
  app.require_subcommand(1);

  // gen
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic trial");
  WorkloadFlags gen_w;
  CorruptFlags gen_c;
  std::string gen_out = ".";
  uint64_t gen_seed = 1;
  double gen_missing = 0;
  gen_w.Add(gen);
  gen_c.Add(gen);
  gen->add_option("--out", gen_out, "output directory")->capture_default_str();
  gen->add_option("--seed", gen_seed, "workload seed")->capture_default_str();
  gen->add_option("--missing-rate", gen_missing, "share of complaints withheld")
      ->check(CLI::Range(0.0, 1.0));

  // corrupt
  CLI::App* cor = app.add_subcommand("corrupt", "corrupt one query of a log");
  WorkloadFlags cor_w;
  CorruptFlags cor_c;
  std::string cor_db, cor_log, cor_out;
  uint64_t cor_seed = 1;
  cor_w.Add(cor);
  cor_c.Add(cor);
  cor->add_option("--db", cor_db, "CSV whose header gives the schema")->required();
  cor->add_option("--log", cor_log, "query log")->required();
  cor->add_option("--seed", cor_seed, "corruption seed")->capture_default_str();
  cor->add_option("--out", cor_out, "dirty log (default stdout)");

  // replay
  CLI::App* rep = app.add_subcommand("replay", "replay a log over a state");
  std::string rep_db, rep_log, rep_out;
  rep->add_option("--db", rep_db, "initial state CSV")->required();
  rep->add_option("--log", rep_log, "query log")->required();
  rep->add_option("--out", rep_out, "final state CSV (default stdout)");

  // complaints
  CLI::App* cmp = app.add_subcommand("complaints", "diff two final states into complaints");
  std::string cmp_dirty, cmp_truth, cmp_out;
  double cmp_missing = 0;
  uint64_t cmp_seed = 1;
  cmp->add_option("--dirty", cmp_dirty, "observed final state CSV")->required();
  cmp->add_option("--truth", cmp_truth, "correct final state CSV")->required();
  cmp->add_option("--missing-rate", cmp_missing, "share of complaints withheld")
      ->check(CLI::Range(0.0, 1.0));
  cmp->add_option("--seed", cmp_seed, "subsampling seed")->capture_default_str();
  cmp->add_option("--out", cmp_out, "JSON Lines (default stdout)");

  // repair
  CLI::App* fix = app.add_subcommand("repair", "repair a log from complaints");
  RepairFlags fix_r;
  std::string fix_db, fix_log, fix_complaints, fix_final, fix_out, fix_report;
  fix_r.Add(fix);
  fix->add_option("--db", fix_db, "initial state CSV")->required();
  fix->add_option("--log", fix_log, "dirty query log")->required();
  fix->add_option("--complaints", fix_complaints, "complaints JSON Lines")->required();
  fix->add_option("--final", fix_final, "observed final state CSV (default: replay)");
  fix->add_option("--out", fix_out, "repaired log (default stdout)");
  fix->add_option("--report", fix_report, "JSON summary (default stderr)");

  // eval
  CLI::App* ev = app.add_subcommand("eval", "score a repaired log");
  std::string ev_db, ev_dirty, ev_truth, ev_repaired, ev_out;
  ev->add_option("--db", ev_db, "initial state CSV")->required();
  ev->add_option("--dirty", ev_dirty, "dirty log")->required();
  ev->add_option("--truth", ev_truth, "true log")->required();
  ev->add_option("--repaired", ev_repaired, "repaired log")->required();
  ev->add_option("--out", ev_out, "metrics JSON (default stdout)");

  // experiment
  CLI::App* exp = app.add_subcommand("experiment", "run an experiment matrix");
  std::string exp_config, exp_out;
  exp->add_option("--config", exp_config, "matrix JSON")->required();
  exp->add_option("--out", exp_out, "results CSV (default stdout)");

  // export-lp
  CLI::App* lp = app.add_subcommand("export-lp", "write the repair model in LP format");
  std::string lp_db, lp_log, lp_complaints, lp_out;
  std::vector<int> lp_window;
  double lp_epsilon = 0.001;
  lp->add_option("--db", lp_db, "initial state CSV")->required();
  lp->add_option("--log", lp_log, "dirty query log")->required();
  lp->add_option("--complaints", lp_complaints, "complaints JSON Lines")->required();
  lp->add_option("--window", lp_window, "first,last query to free (default all)")
      ->delimiter(',')
      ->expected(2);
  lp->add_option("--epsilon", lp_epsilon, "strict-inequality gap")->check(CLI::PositiveNumber);
  lp->add_option("--out", lp_out, "LP file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (gen->parsed()) {
    WorkloadConfig cfg = gen_w.Resolve();
    cfg.seed = gen_seed;
    CorruptionSpec cs = gen_c.Resolve(gen_seed);
    TrialOptions to;
    to.missing_rate = gen_missing;
    TrialBundle b = build_trial(cfg, cs, to);
    std::filesystem::create_directories(gen_out);
    auto path = [&](const char* name) { return (std::filesystem::path(gen_out) / name).string(); };
    const Schema& schema = b.d0.schema();
    WriteFile(path("D_0.csv"), RenderCsv(b.d0));
    WriteFile(path("truth.sql"), render(b.truth));
    WriteFile(path("dirty.sql"), render(b.dirty));
    WriteFile(path("complaints.jsonl"), RenderComplaints(b.submitted, schema));
    WriteFile(path("full_complaints.jsonl"), RenderComplaints(b.full, schema));
    WriteFile(path("manifest.json"), manifest_json(cfg, cs, to));
    std::cerr << "corrupted query " << b.corrupted_query << ", " << b.full.size()
              << " complaints (" << b.submitted.size() << " submitted)\n";
    return kExitOk;
  }

  if (cor->parsed()) {
    Relation db = LoadCsv(cor_db);
    QueryLog log = LoadLog(cor_log, db.schema());
    WorkloadConfig cfg = cor_w.Resolve();
    cfg.n_attrs = db.schema().width();
    Emit(cor_out, render(corrupt(log, cor_c.Resolve(cor_seed), cfg)));
    return kExitOk;
  }

  if (rep->parsed()) {
    Relation db = LoadCsv(rep_db);
    Emit(rep_out, RenderCsv(replay_final(LoadLog(rep_log, db.schema()), db)));
    return kExitOk;
  }

  if (cmp->parsed()) {
    Relation dirty = LoadCsv(cmp_dirty);
    ComplaintSet c = diff_states(dirty, LoadCsv(cmp_truth));
    if (cmp_missing > 0) c = subsample_complaints(c, 1 - cmp_missing, cmp_seed);
    Emit(cmp_out, RenderComplaints(c, dirty.schema()));
    return kExitOk;
  }

  if (fix->parsed()) {
    Relation d0 = LoadCsv(fix_db);
    QueryLog log = LoadLog(fix_log, d0.schema());
    Relation dn = fix_final.empty() ? replay_final(log, d0) : LoadCsv(fix_final);
    ComplaintSet c = ParseComplaints(ReadFile(fix_complaints), dn);
    Method m = fix_r.Resolve();
    auto t0 = std::chrono::steady_clock::now();
    RepairResult r;
    if (m.dectree) {
      DecTreeResult d = dectree_repair(log, d0, apply_complaints(dn, c), m.tree);
      r.repaired_log = d.repaired_log;
      r.status = RepairStatus::kRepaired;
      r.verified = replay_final(d.repaired_log, d0) == apply_complaints(dn, c);
      if (d.structurally_different) r.note = "WHERE clause shape changed";
    } else {
      r = run_repair(log, d0, dn, c, m.repair);
    }
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::string report = ReportJson(r, d0.schema(), ms).dump(2) + "\n";
    if (fix_report.empty()) {
      std::cerr << report;
    } else {
      WriteFile(fix_report, report);
    }
    if (r.ok()) Emit(fix_out, render(r.repaired_log));
    return ExitFor(r.status);
  }

  if (ev->parsed()) {
    TrialBundle b;
    b.d0 = LoadCsv(ev_db);
    b.dirty = LoadLog(ev_dirty, b.d0.schema());
    b.truth = LoadLog(ev_truth, b.d0.schema());
    b.dn = replay_final(b.dirty, b.d0);
    b.dn_star = replay_final(b.truth, b.d0);
    b.full = diff_states(b.dn, b.dn_star);
    b.submitted = b.full;
    Metrics m = eval_repair(b, LoadLog(ev_repaired, b.d0.schema()));
    ordered_json j = {{"precision", m.precision},
                      {"recall", m.recall},
                      {"f1", m.f1},
                      {"complaints", b.full.size()}};
    Emit(ev_out, j.dump(2) + "\n");
    return kExitOk;
  }

  if (exp->parsed()) {
    ExperimentSpec spec = parse_experiment(ReadFile(exp_config));
    Emit(exp_out, run_experiment(spec));
    return kExitOk;
  }

  if (lp->parsed()) {
    Relation d0 = LoadCsv(lp_db);
    QueryLog log = LoadLog(lp_log, d0.schema());
    Relation dn = replay_final(log, d0);
    ComplaintSet c = ParseComplaints(ReadFile(lp_complaints), dn);
    RepairScope scope = lp_window.size() == 2 ? RepairScope::Window(lp_window[0], lp_window[1])
                                              : RepairScope::All(log);
    EncodeOptions opt;
    opt.epsilon = Decimal::FromDouble(lp_epsilon);
    ModelSize size;
    milp::MilpModel model = build_model(log, d0, dn, c, scope, std::nullopt, opt, &size);
    Emit(lp_out, milp::export_lp(model));
    std::cerr << size.vars << " variables, " << size.binaries << " binaries, "
              << size.constraints << " constraints\n";
    return kExitOk;
  }
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const logrepair::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
