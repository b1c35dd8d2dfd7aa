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

// Minimal RFC 4180 CSV reading and writing. Fields containing a comma, quote
// or newline are quoted on output.

#ifndef FOODFRAME_CSV_H_
#define FOODFRAME_CSV_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace foodframe {

using CsvRow = std::vector<std::string>;

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void WriteRow(const CsvRow& fields);

 private:
  std::ostream& out_;
};

// Formats a double with 17 significant digits, "inf"/"-inf"/"nan" for
// non-finite values.
std::string FormatDouble(double v);

class CsvTable {
 public:
  static CsvTable Read(std::istream& in);
  static CsvTable ReadFile(const std::string& path);

  const CsvRow& header() const { return header_; }
  const std::vector<CsvRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  // Column index by name; throws InputError if absent.
  std::size_t Column(std::string_view name) const;
  bool HasColumn(std::string_view name) const;

 private:
  CsvRow header_;
  std::vector<CsvRow> rows_;
};

}  // namespace foodframe

#endif  // FOODFRAME_CSV_H_
