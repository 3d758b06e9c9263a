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

#include "logrepair/relation.hpp"

namespace logrepair {

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& content);

// CSV with header `id,<attr1>,...`. The domain hint is the observed range
// widened by 10%.
Relation ParseCsv(const std::string& text);
std::string RenderCsv(const Relation& r);

// One JSON object per line:
//   {"id": 3, "expected": {"owed": 21500}}     modify (partial rows are
//                                               completed from `dirty`)
//   {"id": 7, "expected": null}                delete
//   {"id": null, "expected": {"id": 9, ...}}   add (id defaults to the next
//                                               free id of `dirty`)
ComplaintSet ParseComplaints(const std::string& text, const Relation& dirty);
std::string RenderComplaints(const ComplaintSet& c, const Schema& schema);

}  // namespace logrepair
