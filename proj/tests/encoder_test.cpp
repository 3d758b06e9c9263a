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

#include "logrepair/encoder.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "logrepair/error.hpp"
#include "logrepair/milp/solver.hpp"
#include "logrepair/milp/verify.hpp"

namespace logrepair {
namespace {

using testing::D;
using testing::MakeTax;
using testing::Row;

int WhereSlot(const QueryLog& log, int q) {
  for (int s : log.SlotsOfQuery(q)) {
    if (log.slot(s).kind == SlotKind::kWhereConstant) return s;
  }
  return -1;
}

TEST(EncoderTest, TaxFullEncodingMovesBoundPastT4) {
  auto f = MakeTax();
  RepairResult r = basic_repair(f.log, f.d0, f.dn, f.complaints, RepairScope::Window(1, 1),
                                std::nullopt);
  ASSERT_EQ(r.status, RepairStatus::kRepaired) << r.note;
  ASSERT_EQ(r.param_deltas.size(), 1u);
  EXPECT_EQ(r.param_deltas[0].slot.slot_id, WhereSlot(f.log, 1));
  EXPECT_EQ(r.param_deltas[0].new_value, D("86500.001"));
  EXPECT_NEAR(r.objective_value, 800.001, 1e-9);
  EXPECT_TRUE(r.verified);
  Relation fixed = replay_final(r.repaired_log, f.d0);
  EXPECT_EQ(fixed, apply_complaints(f.dn, f.complaints));
  EXPECT_TRUE(StructurallyEqual(r.repaired_log, f.log, false));
}

TEST(EncoderTest, TaxT3OnlyIsFeasibleJustAboveT3) {
  auto f = MakeTax();
  auto c = testing::TaxComplaints(f, {3});
  RepairResult r = basic_repair(f.log, f.d0, f.dn, c, RepairScope::Window(1, 1), std::nullopt);
  ASSERT_EQ(r.status, RepairStatus::kRepaired);
  ASSERT_EQ(r.param_deltas.size(), 1u);
  EXPECT_EQ(r.param_deltas[0].new_value, D("86000.001"));
}

TEST(EncoderTest, TaxT4OnlyIsInfeasibleUnderFullEncoding) {
  auto f = MakeTax();
  auto c = testing::TaxComplaints(f, {4});
  RepairResult r = basic_repair(f.log, f.d0, f.dn, c, RepairScope::Window(1, 1), std::nullopt);
  EXPECT_EQ(r.status, RepairStatus::kInfeasible);
}

TEST(EncoderTest, TaxT4OnlyComplaintTupleEncodingSucceeds) {
  auto f = MakeTax();
  auto c = testing::TaxComplaints(f, {4});
  RepairResult r = basic_repair(f.log, f.d0, f.dn, c, RepairScope::Window(1, 1),
                                std::vector<int64_t>{4});
  ASSERT_EQ(r.status, RepairStatus::kRepaired);
  EXPECT_EQ(r.param_deltas[0].new_value, D("86500.001"));
}

TEST(EncoderTest, EmptyComplaintsGiveIdentity) {
  auto f = MakeTax();
  RepairResult r = basic_repair(f.log, f.d0, f.dn, ComplaintSet{}, RepairScope::All(f.log),
                                std::nullopt);
  EXPECT_EQ(r.status, RepairStatus::kRepaired);
  EXPECT_TRUE(r.param_deltas.empty());
  EXPECT_EQ(r.objective_value, 0);
}

TEST(EncoderTest, DirtyReplayMismatchIsReported) {
  auto f = MakeTax();
  try {
    basic_repair(f.log, f.d0, f.d0, f.complaints, RepairScope::All(f.log), std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDirtyReplayMismatch);
  }
}

TEST(EncoderTest, UnknownComplaintTarget) {
  auto f = MakeTax();
  ComplaintSet c;
  c.complaints.push_back(Complaint::Modify(42, Row({"1", "2", "3"})));
  EXPECT_THROW(basic_repair(f.log, f.d0, f.dn, c, RepairScope::All(f.log), std::nullopt),
               Error);
}

TEST(EncoderTest, ModelSizeAuditCountsOneBinaryPerMatchAndAtom) {
  auto f = MakeTax();
  ModelSize size;
  EncodeOptions opt;
  opt.fold_constants = false;
  build_model(f.log, f.d0, f.dn, f.complaints, RepairScope::All(f.log), std::nullopt, opt, &size);
  // q1: four live tuples, one atom each; q2: one insert indicator; q3: five
  // tuples under WHERE TRUE.
  int expected = 4 * (1 + 1) + 1 + 5 * (1 + 0);
  EXPECT_EQ(size.predicate_binaries, expected);
  EXPECT_EQ(size.binaries, expected);
}

TEST(EncoderTest, ExportedModelIsTheSolvedModel) {
  auto f = MakeTax();
  EncodeOptions opt;
  milp::MilpModel m = build_model(f.log, f.d0, f.dn, f.complaints, RepairScope::Window(1, 1),
                                  std::nullopt, opt, nullptr);
  milp::Solution s = milp::solve(m);
  ASSERT_TRUE(s.has_assignment());
  EXPECT_TRUE(milp::VerifySolution(m, s).ok);
  EXPECT_NEAR(s.objective_value, 800.001, 1e-6);
}

// Solves the model built so far with a zero objective and returns the value
// of form v.
double Evaluate(milp::MilpModel& m, const Value& v) {
  milp::Solution s = milp::solve(m);
  EXPECT_TRUE(s.has_assignment());
  double out = v.c;
  for (auto [id, a] : v.terms) out += a * s.Value(id);
  return out;
}

TEST(EncoderTest, RangePredicateMatchesEvaluation) {
  Schema schema({"a"});
  QueryLog log = parse_log("UPDATE T SET a = 0 WHERE a >= 5 AND a <= 9;", schema);
  const Predicate& p = log.at(1).where;
  for (int a = 4; a <= 10; ++a) {
    milp::MilpModel m;
    EncodingContext ctx(&m, &log, Decimal::FromInt(11), D("0.001"), false);
    std::vector<Value> attrs = {ctx.Input(Decimal::FromInt(a), "a")};
    Value x = ctx.encode_predicate(p, attrs, 1, "p");
    ASSERT_FALSE(x.is_const());
    TupleRow row{1, {Decimal::FromInt(a)}};
    EXPECT_NEAR(Evaluate(m, x), p.Eval(row) ? 1 : 0, 1e-9) << a;
  }
}

TEST(EncoderTest, EqualityAtomBothDirections) {
  Schema schema({"a"});
  QueryLog log = parse_log("UPDATE T SET a = 0 WHERE a = 7;", schema);
  for (int a = 5; a <= 9; ++a) {
    milp::MilpModel m;
    EncodingContext ctx(&m, &log, Decimal::FromInt(11), D("0.001"), false);
    std::vector<Value> attrs = {ctx.Input(Decimal::FromInt(a), "a")};
    Value x = ctx.encode_predicate(log.at(1).where, attrs, 1, "p");
    EXPECT_NEAR(Evaluate(m, x), a == 7 ? 1 : 0, 1e-9) << a;
  }
}

TEST(EncoderTest, TruePredicateHasNoRows) {
  Schema schema({"a"});
  QueryLog log = parse_log("UPDATE T SET a = 0;", schema);
  milp::MilpModel m;
  EncodingContext ctx(&m, &log, Decimal::FromInt(11), D("0.001"), false);
  std::vector<Value> attrs = {ctx.Input(Decimal::FromInt(3), "a")};
  Value x = ctx.encode_match(log.at(1).where, attrs, 1, Value::Const(Decimal()), "q");
  EXPECT_EQ(m.num_constraints(), 0);
  EXPECT_NEAR(Evaluate(m, x), 1, 0);
}

TEST(EncoderTest, IncomeAboveBoundIsMatchedAndRateApplies) {
  auto f = MakeTax();
  milp::MilpModel m;
  EncodingContext ctx(&m, &f.log, Decimal::FromInt(100001), D("0.001"), false);
  std::vector<Value> t3 = {ctx.Input(D("86000"), "i"), ctx.Input(D("21500"), "o"),
                           ctx.Input(D("64500"), "p")};
  Value x = ctx.encode_match(f.log.at(1).where, t3, 3, Value::Const(Decimal()), "q1");
  std::vector<Value> out = ctx.encode_update(f.log.at(1), t3, 3, x, nullptr, "q1");
  milp::Solution s = milp::solve(m);
  ASSERT_TRUE(s.has_assignment());
  auto value = [&](const Value& v) {
    double r = v.c;
    for (auto [id, a] : v.terms) r += a * s.Value(id);
    return r;
  };
  EXPECT_NEAR(value(x), 1, 1e-9);
  EXPECT_NEAR(value(out[1]), 25800, 1e-6);
  EXPECT_NEAR(value(out[2]), 64500, 1e-6);
}

TEST(EncoderTest, SelectCollapsesForFixedIndicator) {
  Schema schema({"a"});
  QueryLog log = parse_log("UPDATE T SET a = a + 1;", schema);
  for (int fixed : {0, 1}) {
    milp::MilpModel m;
    EncodingContext ctx(&m, &log, Decimal::FromInt(100), D("0.001"), false);
    Value a = ctx.Input(D("7"), "a");
    Value b = ctx.Input(D("40"), "b");
    int x = m.AddBinary("x");
    m.Fix(x, fixed);
    Value out = ctx.Select(Value::Var(x, 0, 1), a, b, "s");
    EXPECT_NEAR(Evaluate(m, out), fixed ? 7 : 40, 1e-9);
  }
}

TEST(EncoderTest, DeletedRowFailsLaterPredicates) {
  Schema schema({"a"});
  QueryLog log = parse_log("DELETE FROM T WHERE a >= 0;\nUPDATE T SET a = 1 WHERE a <= 20;",
                           schema);
  milp::MilpModel m;
  EncodingContext ctx(&m, &log, Decimal::FromInt(21), D("0.001"), false);
  std::vector<Value> in = {ctx.Input(D("5"), "a")};
  Value dead = Value::Const(Decimal());
  Value x = ctx.encode_match(log.at(1).where, in, 1, dead, "q1");
  std::vector<Value> mid = ctx.encode_delete(in, x, nullptr, "q1");
  Value sentinel_check = mid[0];
  dead = dead + x;
  dead.lo = 0;
  dead.hi = 1;
  Value x2 = ctx.encode_match(log.at(2).where, mid, 1, dead, "q2");
  milp::Solution s = milp::solve(m);
  ASSERT_TRUE(s.has_assignment());
  auto value = [&](const Value& v) {
    double r = v.c;
    for (auto [id, a] : v.terms) r += a * s.Value(id);
    return r;
  };
  EXPECT_NEAR(value(sentinel_check), 22, 1e-9);
  EXPECT_NEAR(value(x2), 0, 1e-9);
}

TEST(EncoderTest, InsertLiteralRepairedToComplaint) {
  Schema schema({"a", "b"});
  Relation d0 = testing::MakeRelation(schema, {Row({"1", "2"})}, D("0"), D("50"));
  QueryLog log = parse_log("INSERT INTO T VALUES (10, 20);", schema);
  Relation dn = replay_final(log, d0);
  ComplaintSet c;
  c.complaints.push_back(Complaint::Modify(2, Row({"10", "25"})));
  RepairResult r = basic_repair(log, d0, dn, c, RepairScope::All(log), std::nullopt);
  ASSERT_EQ(r.status, RepairStatus::kRepaired);
  ASSERT_EQ(r.param_deltas.size(), 1u);
  EXPECT_EQ(r.param_deltas[0].new_value, D("25"));
  EXPECT_NEAR(r.objective_value, 5, 1e-9);
}

TEST(EncoderTest, UntouchedInsertKeepsLiterals) {
  auto f = MakeTax();
  RepairResult r = basic_repair(f.log, f.d0, f.dn, f.complaints, RepairScope::Window(1, 2),
                                std::nullopt);
  ASSERT_EQ(r.status, RepairStatus::kRepaired);
  for (const auto& d : r.param_deltas) EXPECT_EQ(d.slot.query_index, 1);
}

TEST(EncoderTest, DeletionComplaintPinsSentinel) {
  Schema schema({"a"});
  Relation d0 = testing::MakeRelation(schema, {Row({"3"}), Row({"8"})}, D("0"), D("10"));
  QueryLog log = parse_log("DELETE FROM T WHERE a >= 9;", schema);
  Relation dn = replay_final(log, d0);
  ComplaintSet c;
  c.complaints.push_back(Complaint::Delete(2));
  RepairResult r = basic_repair(log, d0, dn, c, RepairScope::All(log), std::nullopt);
  ASSERT_EQ(r.status, RepairStatus::kRepaired);
  ASSERT_EQ(r.param_deltas.size(), 1u);
  EXPECT_EQ(r.param_deltas[0].new_value, D("8"));
  EXPECT_FALSE(replay_final(r.repaired_log, d0).Contains(2));
  EXPECT_TRUE(replay_final(r.repaired_log, d0).Contains(1));
}

TEST(EncoderTest, FoldedAndUnfoldedAgree) {
  auto f = MakeTax();
  EncodeOptions fold;
  fold.fold_constants = true;
  RepairResult a = basic_repair(f.log, f.d0, f.dn, f.complaints, RepairScope::Window(1, 1),
                                std::nullopt, fold);
  EncodeOptions plain;
  plain.fold_constants = false;
  RepairResult b = basic_repair(f.log, f.d0, f.dn, f.complaints, RepairScope::Window(1, 1),
                                std::nullopt, plain);
  ASSERT_TRUE(a.ok() && b.ok());
  ASSERT_EQ(a.param_deltas.size(), b.param_deltas.size());
  EXPECT_EQ(a.param_deltas[0].new_value, b.param_deltas[0].new_value);
  EXPECT_LT(a.model_size.vars, b.model_size.vars);
}

TEST(EncoderTest, MatchesGridOracleOnSmallInstances) {
  for (uint64_t seed = 1; seed <= 15; ++seed) {
    auto inst = testing::MakeSmallInstance(seed);
    Relation target = apply_complaints(inst.dn, inst.complaints);
    double oracle = testing::GridOracle(inst.log, inst.d0, target, D("0.001"), -10, 40);
    ASSERT_GE(oracle, 0) << seed;
    for (bool fold : {false, true}) {
      EncodeOptions opt;
      opt.fold_constants = fold;
      RepairResult r = basic_repair(inst.log, inst.d0, inst.dn, inst.complaints,
                                    RepairScope::All(inst.log), std::nullopt, opt);
      ASSERT_EQ(r.status, RepairStatus::kRepaired) << seed << "\n" << render(inst.log);
      EXPECT_NEAR(r.objective_value, oracle, 1e-6) << seed << "\n" << render(inst.log);
      EXPECT_TRUE(r.verified) << seed;
    }
  }
}

}  // namespace
}  // namespace logrepair
