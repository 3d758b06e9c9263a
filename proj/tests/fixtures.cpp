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

#include "fixtures.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "logrepair/rng.hpp"

namespace logrepair::testing {

Decimal D(const std::string& text) {
  auto d = Decimal::Parse(text);
  if (!d) throw std::invalid_argument("bad decimal " + text);
  return *d;
}

std::vector<Decimal> Row(std::initializer_list<const char*> values) {
  std::vector<Decimal> out;
  for (const char* v : values) out.push_back(D(v));
  return out;
}

Relation MakeRelation(const Schema& schema,
                      const std::vector<std::vector<Decimal>>& rows,
                      Decimal hint_lo, Decimal hint_hi) {
  std::vector<Bound> hint(schema.width(), Bound{hint_lo, hint_hi});
  Relation r(schema, hint);
  int64_t id = 1;
  for (const auto& v : rows) r.Put(TupleRow{id++, v});
  return r;
}

TaxFixture MakeTax() {
  TaxFixture f;
  f.schema = Schema({"income", "owed", "pay"});
  f.d0 = MakeRelation(f.schema,
                      {Row({"9500", "950", "8550"}), Row({"90000", "22500", "67500"}),
                       Row({"86000", "21500", "64500"}), Row({"86500", "21625", "64875"})},
                      D("0"), D("100000"));
  const char* dirty =
      "UPDATE Taxes SET owed = income * 0.3 WHERE income >= 85700;\n"
      "INSERT INTO Taxes VALUES (87000, 21750, 65250);\n"
      "UPDATE Taxes SET pay = income - owed;\n";
  const char* clean =
      "UPDATE Taxes SET owed = income * 0.3 WHERE income >= 87000;\n"
      "INSERT INTO Taxes VALUES (87000, 21750, 65250);\n"
      "UPDATE Taxes SET pay = income - owed;\n";
  f.log = parse_log(dirty, f.schema);
  f.truth = parse_log(clean, f.schema);
  f.dn = replay_final(f.log, f.d0);
  f.complaints = TaxComplaints(f, {3, 4});
  return f;
}

ComplaintSet TaxComplaints(const TaxFixture& f, std::vector<int64_t> ids) {
  Relation truth = replay_final(f.truth, f.d0);
  ComplaintSet all = diff_states(f.dn, truth);
  ComplaintSet out;
  for (int64_t id : ids) {
    if (const Complaint* c = all.ForTuple(id)) out.complaints.push_back(*c);
  }
  return out;
}

SmallInstance MakeSmallInstance(uint64_t seed, int domain) {
  Rng rng(seed);
  SmallInstance inst;
  inst.schema = Schema({"a", "b"});
  std::vector<std::vector<Decimal>> rows;
  int n = static_cast<int>(rng.Uniform(2, 6));
  for (int i = 0; i < n; ++i) {
    rows.push_back(
        {Decimal::FromInt(rng.Uniform(0, domain)), Decimal::FromInt(rng.Uniform(0, domain))});
  }
  inst.d0 = MakeRelation(inst.schema, rows, Decimal::FromInt(0), Decimal::FromInt(domain));
  const char* ops[] = {">=", "<=", ">", "<"};
  const char* names[] = {"a", "b"};
  for (;;) {
    std::string text;
    int budget = 3;
    int queries = 0;
    while (budget > 0 && queries < 3) {
      int kind = static_cast<int>(rng.Uniform(0, 3));
      std::string op = ops[rng.Uniform(0, 3)];
      std::string w = std::to_string(rng.Uniform(2, domain - 2));
      std::string x = names[rng.Uniform(0, 1)];
      std::string y = names[rng.Uniform(0, 1)];
      if (kind == 0 && budget >= 2) {
        text += "UPDATE T SET " + x + " = " + x + " + " + std::to_string(rng.Uniform(1, 6)) +
                " WHERE " + y + " " + op + " " + w + ";\n";
        budget -= 2;
      } else if (kind == 1 && budget >= 2) {
        text += "UPDATE T SET " + x + " = " + std::to_string(rng.Uniform(0, domain)) +
                " WHERE " + y + " " + op + " " + w + ";\n";
        budget -= 2;
      } else if (kind == 2) {
        text += "DELETE FROM T WHERE " + y + " " + op + " " + w + ";\n";
        budget -= 1;
      } else {
        text += "UPDATE T SET " + x + " = " + x + " + " + std::to_string(rng.Uniform(1, 6)) + ";\n";
        budget -= 1;
      }
      ++queries;
    }
    inst.truth = parse_log(text, inst.schema);
    inst.log = inst.truth;
    const auto& slots = inst.log.slots();
    int bad = static_cast<int>(rng.Uniform(1, std::min<int64_t>(2, slots.size())));
    for (int k = 0; k < bad; ++k) {
      int s = static_cast<int>(rng.Uniform(0, slots.size() - 1));
      Decimal v = inst.log.SlotValue(s);
      int64_t shift = rng.Uniform(1, 4) * (rng.Uniform(0, 1) ? 1 : -1);
      inst.log.SetSlotValue(s, v + Decimal::FromInt(shift));
    }
    inst.dn = replay_final(inst.log, inst.d0);
    Relation truth_final = replay_final(inst.truth, inst.d0);
    inst.complaints = diff_states(inst.dn, truth_final);
    if (!inst.complaints.empty()) return inst;
  }
}

double GridOracle(const QueryLog& log, const Relation& d0, const Relation& target,
                  Decimal eps, int lo, int hi) {
  struct Cand {
    double cost;
    Decimal value;
  };
  std::vector<std::vector<Cand>> cands;
  std::vector<int> ids;
  for (const ParamSlot& s : log.slots()) {
    if (s.predicate_lhs) continue;
    std::vector<Cand> c;
    auto add = [&](Decimal v) { c.push_back({(v - s.original_value).Abs().ToDouble(), v}); };
    add(s.original_value);
    for (int v = lo; v <= hi; ++v) {
      Decimal d = Decimal::FromInt(v);
      if (d != s.original_value) add(d);
      if (s.kind == SlotKind::kWhereConstant) {
        add(d - eps);
        add(d + eps);
      }
    }
    std::sort(c.begin(), c.end(), [](const Cand& a, const Cand& b) {
      return a.cost < b.cost || (a.cost == b.cost && a.value < b.value);
    });
    cands.push_back(std::move(c));
    ids.push_back(s.slot_id);
  }
  double best = -1;
  QueryLog work = log;
  std::function<void(size_t, double)> rec = [&](size_t k, double cost) {
    if (k == ids.size()) {
      if (replay_final(work, d0) == target) best = cost;
      return;
    }
    for (const Cand& c : cands[k]) {
      if (best >= 0 && cost + c.cost >= best - 1e-12) break;
      work.SetSlotValue(ids[k], c.value);
      rec(k + 1, cost + c.cost);
    }
    work.SetSlotValue(ids[k], log.SlotValue(ids[k]));
  };
  rec(0, 0);
  return best;
}

}  // namespace logrepair::testing
