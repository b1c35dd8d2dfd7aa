// Copyright 2026 The foodframe Authors.
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

#include "foodframe/csv.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "foodframe/error.h"

namespace foodframe {

void CsvWriter::WriteRow(const CsvRow& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out_ << f;
      continue;
    }
    out_ << '"';
    for (char c : f) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  out_ << '\n';
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvTable CsvTable::Read(std::istream& in) {
  CsvTable table;
  std::vector<CsvRow> records;
  CsvRow row;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(std::move(field));
        field.clear();
        if (!(row.size() == 1 && row[0].empty())) records.push_back(std::move(row));
        row.clear();
        any = false;
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) throw InputError("CSV: unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  if (records.empty()) throw InputError("CSV: missing header");
  table.header_ = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header_.size()) {
      throw InputError("CSV: row " + std::to_string(i + 1) + " has " +
                       std::to_string(records[i].size()) + " fields, expected " +
                       std::to_string(table.header_.size()));
    }
    table.rows_.push_back(std::move(records[i]));
  }
  return table;
}

CsvTable CsvTable::ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open CSV file: " + path);
  try {
    return Read(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::size_t CsvTable::Column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw InputError("CSV: missing column '" + std::string(name) + "'");
}

bool CsvTable::HasColumn(std::string_view name) const {
  for (const auto& h : header_) {
    if (h == name) return true;
  }
  return false;
}

}  // namespace foodframe
