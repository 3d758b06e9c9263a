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


#include "logrepair/relation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "logrepair/error.hpp"
#include "logrepair/io.hpp"
#include "logrepair/rng.hpp"

namespace logrepair {
namespace {

using testing::D;
using testing::Row;

Relation Dirty() {
  auto f = testing::MakeTax();
  return f.dn;
}

// Random state over a shared schema; ids drawn from [1, 12].
Relation RandomState(Rng& rng, const Schema& schema) {
  Relation r(schema);
  for (int64_t id = 1; id <= 12; ++id) {
    if (rng.Uniform(0, 2) == 0) continue;
    TupleRow row{id, {}};
    for (int j = 0; j < schema.width(); ++j) {
      row.values.push_back(Decimal::FromInt(rng.Uniform(0, 3)));
    }
    r.Put(row);
  }
  return r;
}

TEST(RelationTest, ApplyComplaintFixesTheRunningExample) {
  Relation dn = Dirty();
  EXPECT_EQ(dn.Find(3)->values, Row({"86000", "25800", "60200"}));
  ComplaintSet c;
  c.complaints.push_back(Complaint::Modify(3, Row({"86000", "21500", "64500"})));
  Relation fixed = apply_complaints(dn, c);
  EXPECT_EQ(fixed.Find(3)->values, Row({"86000", "21500", "64500"}));
  EXPECT_EQ(dn.Find(3)->values, Row({"86000", "25800", "60200"}));  // input kept
  EXPECT_EQ(apply_complaints(dn, ComplaintSet{}), dn);
}

TEST(RelationTest, DeletionAndAdditionComplaints) {
  Schema s({"a"});
  Relation r = testing::MakeRelation(s, {Row({"1"}), Row({"2"}), Row({"3"})}, D("0"), D("9"));
  ComplaintSet c;
  c.complaints.push_back(Complaint::Delete(1));
  c.complaints.push_back(Complaint::Add(TupleRow{9, Row({"5"})}));
  Relation out = apply_complaints(r, c);
  EXPECT_EQ(out.size(), 3u);
  EXPECT_FALSE(out.Contains(1));
  ASSERT_TRUE(out.Contains(9));
  EXPECT_EQ(out.Find(9)->values, Row({"5"}));
}

TEST(RelationTest, ComplaintErrors) {
  Schema s({"a"});
  Relation r = testing::MakeRelation(s, {Row({"1"})}, D("0"), D("9"));
  ComplaintSet unknown;
  unknown.complaints.push_back(Complaint::Modify(4, Row({"2"})));
  try {
    apply_complaints(r, unknown);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownTarget);
  }
  ComplaintSet twice;
  twice.complaints.push_back(Complaint::Modify(1, Row({"2"})));
  twice.complaints.push_back(Complaint::Delete(1));
  try {
    apply_complaints(r, twice);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentComplaints);
  }
}

TEST(RelationTest, DiffStatesOnTaxFixture) {
  auto f = testing::MakeTax();
  Relation truth = replay_final(f.truth, f.d0);
  ComplaintSet c = diff_states(f.dn, truth);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.TupleIds(), (std::vector<int64_t>{3, 4}));
  EXPECT_EQ(c.ForTuple(3)->expected->values, Row({"86000", "21500", "64500"}));
  EXPECT_EQ(c.ForTuple(4)->expected->values, Row({"86500", "21625", "64875"}));
  EXPECT_TRUE(diff_states(f.dn, f.dn).empty());
}

TEST(RelationTest, DiffStatesExtraRowBecomesDeletion) {
  Schema s({"a"});
  Relation truth = testing::MakeRelation(s, {Row({"1"})}, D("0"), D("9"));
  Relation dirty = truth;
  dirty.Put(TupleRow{7, Row({"4"})});
  ComplaintSet c = diff_states(dirty, truth);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.complaints[0], Complaint::Delete(7));
  Relation other(Schema({"b"}));
  EXPECT_THROW(diff_states(dirty, other), Error);
}

TEST(RelationTest, DiffApplyRoundTripAndOrderInsensitivity) {
  Schema s({"a", "b"});
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    Relation dirty = RandomState(rng, s);
    Relation truth = RandomState(rng, s);
    ComplaintSet c = diff_states(dirty, truth);
    EXPECT_EQ(apply_complaints(dirty, c), truth);
    EXPECT_TRUE(diff_states(dirty, dirty).empty());
    ComplaintSet shuffled = c;
    for (size_t i = shuffled.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(rng.Uniform(0, static_cast<int64_t>(i) - 1));
      std::swap(shuffled.complaints[i - 1], shuffled.complaints[j]);
    }
    EXPECT_EQ(apply_complaints(dirty, shuffled), truth);
  }
}

TEST(RelationTest, SubsampleComplaints) {
  ComplaintSet c;
  for (int64_t id = 1; id <= 20; ++id) {
    c.complaints.push_back(Complaint::Delete(id));
  }
  EXPECT_EQ(subsample_complaints(c, 1.0, 3).complaints, c.complaints);
  EXPECT_TRUE(subsample_complaints(c, 0.0, 3).empty());
  ComplaintSet a = subsample_complaints(c, 0.25, 5);
  ComplaintSet b = subsample_complaints(c, 0.25, 5);
  ASSERT_EQ(a.size(), 5u);
  EXPECT_EQ(a.complaints, b.complaints);
  std::vector<int64_t> picked = a.TupleIds();
  std::set<int64_t> ids(picked.begin(), picked.end());
  EXPECT_EQ(ids.size(), 5u);
  for (int64_t id : ids) EXPECT_TRUE(id >= 1 && id <= 20);
  bool differs = false;
  for (uint64_t seed = 6; seed < 12 && !differs; ++seed) {
    differs = subsample_complaints(c, 0.25, seed).complaints != a.complaints;
  }
  EXPECT_TRUE(differs);
}

TEST(RelationTest, NextIdNeverReusesDeletedIds) {
  Schema s({"a"});
  Relation r = testing::MakeRelation(s, {Row({"1"}), Row({"2"})}, D("0"), D("9"));
  EXPECT_EQ(r.next_id(), 3);
  r.Erase(2);
  EXPECT_EQ(r.next_id(), 3);
}

TEST(RelationTest, ObservedHintWidensTheRange) {
  Schema s({"a", "b"});
  Relation r(s);
  r.Put(TupleRow{1, Row({"0", "5"})});
  r.Put(TupleRow{2, Row({"100", "5"})});
  std::vector<Bound> h = Relation::ObservedHint(r);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_LE(h[0].lo, D("-10"));
  EXPECT_GE(h[0].hi, D("110"));
  EXPECT_LE(h[1].lo, D("4"));
  EXPECT_GE(h[1].hi, D("6"));
}

TEST(RelationTest, CsvRoundTrip) {
  Relation dn = Dirty();
  std::string csv = RenderCsv(dn);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,income,owed,pay");
  EXPECT_EQ(ParseCsv(csv), dn);
  EXPECT_THROW(ParseCsv("key,a\n1,2\n"), Error);
  EXPECT_THROW(ParseCsv("id,a\n1,2\n1,3\n"), Error);
}

TEST(RelationTest, ComplaintJsonLines) {
  Relation dn = Dirty();
  ComplaintSet c = ParseComplaints(
      "{\"id\": 3, \"expected\": {\"owed\": 21500, \"pay\": 64500}}\n"
      "{\"id\": 1, \"expected\": null}\n"
      "{\"id\": null, \"expected\": {\"income\": 1, \"owed\": 2, \"pay\": 3}}\n",
      dn);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.ForTuple(3)->expected->values, Row({"86000", "21500", "64500"}));
  EXPECT_EQ(c.ForTuple(1)->kind(), ComplaintKind::kDelete);
  const Complaint* add = c.ForTuple(dn.next_id());
  ASSERT_NE(add, nullptr);
  EXPECT_EQ(add->kind(), ComplaintKind::kAdd);
  EXPECT_EQ(ParseComplaints(RenderComplaints(c, dn.schema()), dn).complaints, c.complaints);
  EXPECT_THROW(ParseComplaints("{\"id\": 3, \"expected\": {\"tax\": 1}}\n", dn), Error);
  EXPECT_THROW(ParseComplaints("{\"id\": null, \"expected\": null}\n", dn), Error);
}

}  // namespace
}  // namespace logrepair
