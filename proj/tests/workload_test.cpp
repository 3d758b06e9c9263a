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

#include <gtest/gtest.h>

#include <regex>

#include "logrepair/error.hpp"
#include "logrepair/io.hpp"
#include "logrepair/parser.hpp"
#include "logrepair/replay.hpp"
#include "logrepair/rng.hpp"

namespace logrepair {
namespace {

TEST(WorkloadTest, EmptyDatabase) {
  WorkloadConfig cfg;
  cfg.n_tuples = 0;
  EXPECT_EQ(gen_database(cfg).size(), 0u);
}

TEST(WorkloadTest, DefaultDatabaseShape) {
  WorkloadConfig cfg;
  Relation r = gen_database(cfg);
  ASSERT_EQ(r.size(), 1000u);
  EXPECT_EQ(r.schema().width(), 10);
  for (const auto& [id, row] : r.rows()) {
    for (Decimal v : row.values) {
      EXPECT_GE(v, Decimal());
      EXPECT_LE(v, Decimal::FromInt(200));
    }
  }
  EXPECT_EQ(r.rows().begin()->first, 1);
  EXPECT_EQ(r.rows().rbegin()->first, 1000);
}

TEST(WorkloadTest, SameSeedSameBytes) {
  WorkloadConfig cfg;
  cfg.n_queries = 50;
  cfg.mix = {1, 1, 1};
  EXPECT_EQ(RenderCsv(gen_database(cfg)), RenderCsv(gen_database(cfg)));
  EXPECT_EQ(render(gen_log(cfg)), render(gen_log(cfg)));
  WorkloadConfig other = cfg;
  other.seed = 2;
  EXPECT_NE(render(gen_log(cfg)), render(gen_log(other)));
}

TEST(WorkloadTest, UniformAttributesWithoutSkew) {
  WorkloadConfig cfg;
  cfg.zipf_s = 0;
  Rng rng(11);
  std::vector<int> hist(cfg.n_attrs);
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++hist[zipf_attr(cfg, rng.Unit())];
  double chi2 = 0, e = static_cast<double>(n) / cfg.n_attrs;
  for (int h : hist) chi2 += (h - e) * (h - e) / e;
  EXPECT_LT(chi2, 27.88);  // 9 degrees of freedom, p = 0.001
}

TEST(WorkloadTest, SkewFavoursFirstAttribute) {
  WorkloadConfig cfg;
  cfg.zipf_s = 1;
  Rng rng(12);
  std::vector<int> hist(cfg.n_attrs);
  for (int i = 0; i < 10000; ++i) ++hist[zipf_attr(cfg, rng.Unit())];
  for (int a = 1; a < cfg.n_attrs; ++a) EXPECT_GT(hist[0], hist[a]);
}

TEST(WorkloadTest, SingleRangeUpdateTemplate) {
  WorkloadConfig cfg;
  cfg.n_queries = 1;
  QueryLog log = gen_log(cfg);
  ASSERT_EQ(log.size(), 1);
  std::string text = render(log);
  EXPECT_TRUE(std::regex_match(
      text, std::regex("UPDATE T SET a[0-9]+ = [0-9]+ WHERE a([0-9]+) >= ([0-9]+) AND "
                       "a\\1 <= [0-9]+;\n")))
      << text;
  EXPECT_EQ(log.slots().size(), 3u);
  const Query& q = log.at(1);
  EXPECT_EQ(q.where.children[1].rhs - q.where.children[0].rhs, Decimal::FromInt(cfg.range));
}

TEST(WorkloadTest, PointAndRelativeTemplates) {
  WorkloadConfig cfg;
  cfg.n_queries = 20;
  cfg.where_kind = WhereKind::kPoint;
  cfg.set_kind = SetKind::kRelative;
  cfg.mix = {1, 0, 1};
  QueryLog log = gen_log(cfg);
  for (const Query& q : log.queries()) {
    ASSERT_EQ(q.where.kind, Predicate::Kind::kAtom);
    EXPECT_EQ(q.where.lhs.terms[0].attr, kIdAttr);
    if (q.kind == QueryKind::kUpdate) EXPECT_TRUE(q.set[0].expr.HasAttributes());
  }
  // Rendering parses back to the same log.
  QueryLog again = parse_log(render(log), log.schema());
  EXPECT_TRUE(StructurallyEqual(log, again, true));
}

TEST(WorkloadTest, PerturbShiftsOneLiteral) {
  WorkloadConfig cfg;
  cfg.n_queries = 10;
  QueryLog log = gen_log(cfg);
  CorruptionSpec spec;
  spec.idx = 3;
  spec.mode = CorruptionMode::kPerturb;
  spec.delta = Decimal::FromInt(5);
  QueryLog dirty = corrupt(log, spec, cfg);
  int changed = 0;
  for (size_t s = 0; s < log.slots().size(); ++s) {
    Decimal a = log.SlotValue(s), b = dirty.SlotValue(s);
    if (a != b) {
      ++changed;
      EXPECT_EQ(b - a, Decimal::FromInt(5));
      EXPECT_EQ(log.slot(s).query_index, 10 - 3);
    }
  }
  EXPECT_EQ(changed, 1);
}

TEST(WorkloadTest, RegenerateKeepsShape) {
  WorkloadConfig cfg;
  cfg.n_queries = 10;
  cfg.mix = {1, 1, 1};
  QueryLog log = gen_log(cfg);
  for (int idx = 0; idx < 10; ++idx) {
    CorruptionSpec spec;
    spec.idx = idx;
    QueryLog dirty = corrupt(log, spec, cfg);
    EXPECT_TRUE(StructurallyEqual(log, dirty, false));
    for (int q = 1; q <= 10; ++q) {
      EXPECT_EQ(StructurallyEqual(log.at(q), dirty.at(q), true), q != 10 - idx);
    }
  }
  CorruptionSpec bad;
  bad.idx = 10;
  EXPECT_THROW(corrupt(log, bad, cfg), Error);
}

TEST(WorkloadTest, TrialInvariants) {
  WorkloadConfig cfg;
  cfg.n_tuples = 100;
  cfg.n_attrs = 5;
  cfg.n_queries = 20;
  CorruptionSpec spec;
  spec.idx = 10;
  TrialBundle b = build_trial(cfg, spec);
  EXPECT_EQ(b.full.complaints, diff_states(b.dn, b.dn_star).complaints);
  EXPECT_EQ(b.submitted.complaints, b.full.complaints);
  EXPECT_EQ(apply_complaints(b.dn, b.full), b.dn_star);
  EXPECT_EQ(replay_final(b.dirty, b.d0), b.dn);
  EXPECT_EQ(b.corrupted_query, 10);
  EXPECT_FALSE(b.full.empty());

  TrialOptions half;
  half.missing_rate = 0.5;
  TrialBundle h = build_trial(cfg, spec, half);
  EXPECT_LE(h.submitted.size(), h.full.size());
  for (const Complaint& c : h.submitted.complaints) {
    EXPECT_NE(h.full.ForTuple(c.tuple_id()), nullptr);
  }
}

TEST(WorkloadTest, NoOpCorruptionHasNoComplaints) {
  WorkloadConfig cfg;
  cfg.n_tuples = 50;
  cfg.n_queries = 5;
  CorruptionSpec spec;
  spec.mode = CorruptionMode::kPerturb;
  spec.delta = Decimal();
  TrialOptions opt;
  opt.require_complaints = false;
  TrialBundle b = build_trial(cfg, spec, opt);
  EXPECT_TRUE(b.full.empty());
}

TEST(WorkloadTest, DeleteHeavyLogsKeepMostRows) {
  WorkloadConfig cfg;
  cfg.n_tuples = 100;
  cfg.n_queries = 30;
  cfg.mix = {0, 0, 1};
  cfg.range = 100;
  CorruptionSpec spec;
  try {
    TrialBundle b = build_trial(cfg, spec);
    EXPECT_GE(b.dn.size() * 10, b.d0.size());
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(WorkloadTest, ManifestRecordsSeeds) {
  WorkloadConfig cfg;
  cfg.seed = 77;
  CorruptionSpec spec;
  spec.seed = 78;
  std::string m = manifest_json(cfg, spec, {});
  EXPECT_NE(m.find("\"seed\": 77"), std::string::npos);
  EXPECT_NE(m.find("\"seed\": 78"), std::string::npos);
}

}  // namespace
}  // namespace logrepair
