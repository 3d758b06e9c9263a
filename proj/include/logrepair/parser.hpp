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

#include <string>

#include "logrepair/query.hpp"

namespace logrepair {

// Single-table dialect:
//
//   UPDATE T SET a = <expr> [, b = <expr>] [WHERE <pred>];
//   INSERT INTO T [(a, b, ...)] VALUES (<num>, ...);
//   DELETE FROM T [WHERE <pred>];
//
// <expr> is a linear combination such as `income * 0.3`, `a - b + 5`.
// <pred> combines comparisons (<, <=, =, >=, >, BETWEEN x AND y) with AND,
// OR, NOT and parentheses; the right-hand side of a comparison is a number.
// `id` may appear in predicates. Lines starting with `--` are comments.
QueryLog parse_log(const std::string& text, const Schema& schema);

std::string render(const QueryLog& log);
std::string render(const Query& q, const Schema& schema);
std::string render(const Predicate& p, const Schema& schema);

}  // namespace logrepair
