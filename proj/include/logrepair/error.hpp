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

#include <stdexcept>
#include <string>

namespace logrepair {

enum class ErrorCode {
  kUnknownTarget,
  kInconsistentComplaints,
  kSchemaMismatch,
  kSyntaxError,
  kUnknownAttribute,
  kNonLinearExpression,
  kDuplicateInsertId,
  kModelMalformed,
  kParamOnLhs,
  kBilinearTerm,
  kUnknownComplaintTarget,
  kDirtyReplayMismatch,
  kUnderdetermined,
  kInvalidArgument,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Every library failure is reported through this type; the code drives the
// CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry a 1-based position.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : Error(ErrorCode::kSyntaxError, "line " + std::to_string(line) +
                                           ", column " +
                                           std::to_string(column) + ": " +
                                           message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace logrepair
