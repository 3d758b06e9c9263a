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

#include <cmath>
#include <cstdlib>

#include "logrepair/error.hpp"

namespace logrepair {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownTarget: return "UnknownTarget";
    case ErrorCode::kInconsistentComplaints: return "InconsistentComplaints";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnknownAttribute: return "UnknownAttribute";
    case ErrorCode::kNonLinearExpression: return "NonLinearExpression";
    case ErrorCode::kDuplicateInsertId: return "DuplicateInsertId";
    case ErrorCode::kModelMalformed: return "ModelMalformed";
    case ErrorCode::kParamOnLhs: return "ParamOnLHS";
    case ErrorCode::kBilinearTerm: return "BilinearTerm";
    case ErrorCode::kUnknownComplaintTarget: return "UnknownComplaintTarget";
    case ErrorCode::kDirtyReplayMismatch: return "DirtyReplayMismatch";
    case ErrorCode::kUnderdetermined: return "Underdetermined";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

Decimal Decimal::FromDouble(double v) {
  return FromRaw(static_cast<int64_t>(std::llround(v * kScale)));
}

std::optional<Decimal> Decimal::Parse(std::string_view text) {
  size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  int64_t whole = 0;
  int whole_digits = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    if (whole > (INT64_MAX / kScale) / 10) return std::nullopt;
    whole = whole * 10 + (text[i] - '0');
    ++whole_digits;
    ++i;
  }
  int64_t frac = 0;
  int frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      if (frac_digits == kDigits) return std::nullopt;
      frac = frac * 10 + (text[i] - '0');
      ++frac_digits;
      ++i;
    }
  }
  if (i != text.size() || whole_digits + frac_digits == 0) return std::nullopt;
  for (int k = frac_digits; k < kDigits; ++k) frac *= 10;
  int64_t raw = whole * kScale + frac;
  return FromRaw(negative ? -raw : raw);
}

std::string Decimal::ToString() const {
  int64_t mag = raw_ < 0 ? -raw_ : raw_;
  std::string out = raw_ < 0 ? "-" : "";
  out += std::to_string(mag / kScale);
  int64_t frac = mag % kScale;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, kDigits - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

Decimal operator*(Decimal a, Decimal b) {
  __int128 p = static_cast<__int128>(a.raw()) * b.raw();
  __int128 half = Decimal::kScale / 2;
  __int128 q = p >= 0 ? (p + half) / Decimal::kScale
                      : -((-p + half) / Decimal::kScale);
  return Decimal::FromRaw(static_cast<int64_t>(q));
}

}  // namespace logrepair
