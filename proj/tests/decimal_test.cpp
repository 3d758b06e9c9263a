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


#include "logrepair/decimal.hpp"

#include <gtest/gtest.h>

#include <cstdint>

#include "logrepair/rng.hpp"

namespace logrepair {
namespace {

Decimal P(const char* text) { return *Decimal::Parse(text); }

TEST(DecimalTest, ParsesAndRendersShortestForm) {
  EXPECT_EQ(P("86000").raw(), 860000000);
  EXPECT_EQ(P("0.3").raw(), 3000);
  EXPECT_EQ(P("-12.0005").raw(), -120005);
  EXPECT_EQ(P("+7").raw(), 70000);
  EXPECT_EQ(P("86000").ToString(), "86000");
  EXPECT_EQ(P("0.30").ToString(), "0.3");
  EXPECT_EQ(P("-12.0005").ToString(), "-12.0005");
  EXPECT_EQ(P("-0.5").ToString(), "-0.5");
  EXPECT_EQ(Decimal().ToString(), "0");
}

TEST(DecimalTest, RejectsMalformedText) {
  EXPECT_FALSE(Decimal::Parse(""));
  EXPECT_FALSE(Decimal::Parse("."));
  EXPECT_FALSE(Decimal::Parse("1.23456"));
  EXPECT_FALSE(Decimal::Parse("1e5"));
  EXPECT_FALSE(Decimal::Parse("12a"));
  EXPECT_FALSE(Decimal::Parse("--1"));
}

TEST(DecimalTest, ArithmeticIsExactOnTheGrid) {
  EXPECT_EQ(P("86000") * P("0.3"), P("25800"));
  EXPECT_EQ(P("86500") * P("0.25"), P("21625"));
  EXPECT_EQ(P("0.1") + P("0.2"), P("0.3"));
  EXPECT_EQ(P("86000") - P("25800"), P("60200"));
  // Products round half away from zero.
  EXPECT_EQ(P("0.0001") * P("0.5"), P("0.0001"));
  EXPECT_EQ(P("-0.0001") * P("0.5"), P("-0.0001"));
  EXPECT_EQ(P("0.0001") * P("0.4"), P("0"));
}

TEST(DecimalTest, FromDoubleRoundsHalfAwayFromZero) {
  EXPECT_EQ(Decimal::FromDouble(87000.00099999), P("87000.001"));
  EXPECT_EQ(Decimal::FromDouble(0.00005), P("0.0001"));
  EXPECT_EQ(Decimal::FromDouble(-0.00005), P("-0.0001"));
  EXPECT_EQ(Decimal::FromDouble(2.5), P("2.5"));
}

TEST(DecimalTest, OrderingFollowsValue) {
  EXPECT_LT(P("-1"), P("0"));
  EXPECT_LT(P("86999.9999"), P("87000"));
  EXPECT_EQ(P("-3").Abs(), P("3"));
  EXPECT_EQ(Decimal::Quantum().raw(), 1);
}

TEST(DecimalTest, RenderParseRoundTrip) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    Decimal d = Decimal::FromRaw(rng.Uniform(-2000000000LL, 2000000000LL));
    auto back = Decimal::Parse(d.ToString());
    ASSERT_TRUE(back) << d.ToString();
    EXPECT_EQ(*back, d);
  }
}

TEST(DecimalTest, AdditionMatchesIntegerArithmetic) {
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    int64_t a = rng.Uniform(-1000000000, 1000000000);
    int64_t b = rng.Uniform(-1000000000, 1000000000);
    EXPECT_EQ((Decimal::FromRaw(a) + Decimal::FromRaw(b)).raw(), a + b);
    EXPECT_EQ((Decimal::FromRaw(a) - Decimal::FromRaw(b)).raw(), a - b);
  }
}

}  // namespace
}  // namespace logrepair
