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

#include "logrepair/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "logrepair/error.hpp"

namespace logrepair {
namespace {

using nlohmann::json;

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    size_t b = cell.find_first_not_of(" \t\r");
    size_t e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

Decimal CellValue(const std::string& cell, int line) {
  auto d = Decimal::Parse(cell);
  if (!d) {
    throw Error(ErrorCode::kIo, "line " + std::to_string(line) +
                                    ": not a decimal: '" + cell + "'");
  }
  return *d;
}

Decimal JsonValue(const json& v) {
  if (v.is_number_integer()) return Decimal::FromInt(v.get<int64_t>());
  if (v.is_number()) return Decimal::FromDouble(v.get<double>());
  if (v.is_string()) {
    auto d = Decimal::Parse(v.get<std::string>());
    if (d) return *d;
  }
  throw Error(ErrorCode::kIo, "complaint value is not a number: " + v.dump());
}

nlohmann::ordered_json ToJson(Decimal d) {
  if (d.raw() % Decimal::kScale == 0) return d.raw() / Decimal::kScale;
  return d.ToDouble();
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
}

Relation ParseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  header = SplitLine(line);
  if (header.empty() || header[0] != "id") {
    throw Error(ErrorCode::kIo, "CSV header must start with 'id'");
  }
  Relation r(Schema(std::vector<std::string>(header.begin() + 1,
                                             header.end())));
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = SplitLine(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kIo,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " cells");
    }
    Decimal id = CellValue(cells[0], line_no);
    if (id.raw() % Decimal::kScale != 0) {
      throw Error(ErrorCode::kIo, "line " + std::to_string(line_no) +
                                      ": id must be an integer");
    }
    TupleRow row{id.raw() / Decimal::kScale, {}};
    if (r.Contains(row.id)) {
      throw Error(ErrorCode::kIo, "duplicate id " + std::to_string(row.id));
    }
    for (size_t k = 1; k < cells.size(); ++k) {
      row.values.push_back(CellValue(cells[k], line_no));
    }
    r.Put(std::move(row));
  }
  r.set_domain_hint(Relation::ObservedHint(r));
  return r;
}

std::string RenderCsv(const Relation& r) {
  std::string out = "id";
  for (const auto& n : r.schema().names()) out += "," + n;
  out += "\n";
  for (const auto& [id, row] : r.rows()) {
    out += std::to_string(id);
    for (Decimal v : row.values) out += "," + v.ToString();
    out += "\n";
  }
  return out;
}

ComplaintSet ParseComplaints(const std::string& text, const Relation& dirty) {
  const Schema& schema = dirty.schema();
  ComplaintSet out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int64_t next_new_id = dirty.next_id();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kIo,
                  "complaints line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("expected")) {
      throw Error(ErrorCode::kIo, "complaints line " +
                                      std::to_string(line_no) +
                                      ": needs 'id' and 'expected'");
    }
    const json& id = obj["id"];
    const json& expected = obj["expected"];
    if (id.is_null() && expected.is_null()) {
      throw Error(ErrorCode::kInconsistentComplaints,
                  "complaints line " + std::to_string(line_no) +
                      ": both id and expected are null");
    }
    if (expected.is_null()) {
      out.complaints.push_back(Complaint::Delete(id.get<int64_t>()));
      continue;
    }
    if (!expected.is_object()) {
      throw Error(ErrorCode::kIo, "complaints line " +
                                      std::to_string(line_no) +
                                      ": 'expected' must be an object");
    }
    std::vector<std::optional<Decimal>> values(schema.width());
    for (auto it = expected.begin(); it != expected.end(); ++it) {
      if (it.key() == "id") continue;
      int j = schema.IndexOf(it.key());
      if (j < 0) {
        throw Error(ErrorCode::kUnknownAttribute,
                    "complaints line " + std::to_string(line_no) + ": " +
                        it.key());
      }
      values[j] = JsonValue(it.value());
    }
    if (id.is_null()) {
      TupleRow row;
      row.id = expected.contains("id") ? expected["id"].get<int64_t>()
                                       : next_new_id;
      next_new_id = std::max(next_new_id, row.id + 1);
      for (int j = 0; j < schema.width(); ++j) {
        if (!values[j]) {
          throw Error(ErrorCode::kIo, "complaints line " +
                                          std::to_string(line_no) +
                                          ": addition misses " +
                                          schema.name(j));
        }
        row.values.push_back(*values[j]);
      }
      out.complaints.push_back(Complaint::Add(std::move(row)));
      continue;
    }
    int64_t target = id.get<int64_t>();
    const TupleRow* base = dirty.Find(target);
    std::vector<Decimal> full(schema.width());
    for (int j = 0; j < schema.width(); ++j) {
      if (values[j]) {
        full[j] = *values[j];
      } else if (base) {
        full[j] = base->values[j];
      } else {
        throw Error(ErrorCode::kUnknownTarget,
                    "complaints line " + std::to_string(line_no) +
                        ": tuple " + std::to_string(target) +
                        " is not in the dirty state");
      }
    }
    out.complaints.push_back(Complaint::Modify(target, std::move(full)));
  }
  out.Validate();
  return out;
}

std::string RenderComplaints(const ComplaintSet& c, const Schema& schema) {
  std::string out;
  for (const auto& complaint : c.complaints) {
    nlohmann::ordered_json obj;
    obj["id"] = complaint.target_id ? nlohmann::ordered_json(*complaint.target_id)
                                    : nlohmann::ordered_json();
    if (complaint.expected) {
      nlohmann::ordered_json e = nlohmann::ordered_json::object();
      if (!complaint.target_id) e["id"] = complaint.expected->id;
      for (int j = 0; j < schema.width(); ++j) {
        e[schema.name(j)] = ToJson(complaint.expected->values[j]);
      }
      obj["expected"] = e;
    } else {
      obj["expected"] = nullptr;
    }
    out += obj.dump() + "\n";
  }
  return out;
}

}  // namespace logrepair
