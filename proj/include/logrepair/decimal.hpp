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

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace logrepair {

// Fixed-point decimal with four fractional digits, stored as a scaled
// integer so replay and state comparison are exact.
class Decimal {
 public:
  static constexpr int kDigits = 4;
  static constexpr int64_t kScale = 10000;

  constexpr Decimal() = default;
  static constexpr Decimal FromRaw(int64_t raw) {
    Decimal d;
    d.raw_ = raw;
    return d;
  }
  static constexpr Decimal FromInt(int64_t v) { return FromRaw(v * kScale); }
  // Rounds half away from zero onto the grid.
  static Decimal FromDouble(double v);
  // Accepts [+-]digits[.digits] with at most kDigits fractional digits.
  static std::optional<Decimal> Parse(std::string_view text);

  constexpr int64_t raw() const { return raw_; }
  double ToDouble() const { return static_cast<double>(raw_) / kScale; }
  // Shortest exact rendering: "86000", "0.3", "-12.0005".
  std::string ToString() const;

  // The smallest positive grid value.
  static constexpr Decimal Quantum() { return FromRaw(1); }

  friend constexpr Decimal operator+(Decimal a, Decimal b) {
    return FromRaw(a.raw_ + b.raw_);
  }
  friend constexpr Decimal operator-(Decimal a, Decimal b) {
    return FromRaw(a.raw_ - b.raw_);
  }
  friend constexpr Decimal operator-(Decimal a) { return FromRaw(-a.raw_); }
  // Product rounded half away from zero.
  friend Decimal operator*(Decimal a, Decimal b);
  Decimal& operator+=(Decimal o) {
    raw_ += o.raw_;
    return *this;
  }
  Decimal& operator-=(Decimal o) {
    raw_ -= o.raw_;
    return *this;
  }

  friend constexpr auto operator<=>(Decimal, Decimal) = default;
  friend constexpr bool operator==(Decimal, Decimal) = default;

  Decimal Abs() const { return FromRaw(raw_ < 0 ? -raw_ : raw_); }

 private:
  int64_t raw_ = 0;
};

}  // namespace logrepair
