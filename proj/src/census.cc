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

#include "foodframe/census.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "foodframe/csv.h"
#include "foodframe/error.h"

namespace foodframe {

double SimpsonDiversity(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) {
    if (!std::isfinite(c) || c < 0) {
      throw ContractViolation("simpson diversity: counts must be finite and nonnegative");
    }
    total += c;
  }
  if (!(total > 0)) throw NumericError("simpson diversity: all counts are zero");
  // sum p_i (1 - p_i) == 1 - sum p_i^2, but stays strictly positive whenever
  // two groups are populated.
  double acc = 0.0;
  for (double c : counts) acc += c * (total - c);
  return std::clamp(acc / (total * total), 0.0, 1.0);
}

double SimpsonDiversity(const std::map<std::string, double>& counts) {
  std::vector<double> values;
  values.reserve(counts.size());
  for (const auto& [group, c] : counts) values.push_back(c);
  return SimpsonDiversity(values);
}

NeighborhoodMeta MakeNeighborhood(std::string zipcode, double median_income,
                                  std::map<std::string, double> race_counts) {
  NeighborhoodMeta m;
  m.zipcode = std::move(zipcode);
  m.median_income = median_income;
  m.diversity = SimpsonDiversity(race_counts);
  double total = 0.0;
  for (const auto& [group, c] : race_counts) total += c;
  const auto share = [&](const char* group) {
    auto it = race_counts.find(group);
    return it == race_counts.end() ? 0.0 : 100.0 * it->second / total;
  };
  m.pct_asian = share("asian");
  m.pct_hispanic = share("hispanic");
  m.race_counts = std::move(race_counts);
  return m;
}

CensusTable::CensusTable(std::vector<NeighborhoodMeta> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!index_.emplace(rows_[i].zipcode, i).second) {
      throw InputError("census: duplicate zipcode " + rows_[i].zipcode);
    }
  }
}

CensusTable CensusTable::Read(std::istream& in) {
  const CsvTable csv = CsvTable::Read(in);
  CsvRow expected = {"zipcode", "median_income"};
  for (auto col : kCensusRaceColumns) expected.emplace_back(col);
  if (csv.header() != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw InputError("census: header must be exactly '" + want + "'");
  }
  std::vector<NeighborhoodMeta> rows;
  rows.reserve(csv.size());
  std::size_t line = 1;
  for (const auto& r : csv.rows()) {
    ++line;
    try {
      std::map<std::string, double> counts;
      for (std::size_t k = 0; k < kCensusRaceColumns.size(); ++k) {
        counts[std::string(kCensusRaceColumns[k])] = std::stod(r[2 + k]);
      }
      rows.push_back(MakeNeighborhood(r[0], std::stod(r[1]), std::move(counts)));
    } catch (const std::exception& e) {
      throw InputError("census: line " + std::to_string(line) + ": " + e.what());
    }
  }
  return CensusTable(std::move(rows));
}

CensusTable CensusTable::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open census file: " + path);
  return Read(in);
}

const NeighborhoodMeta* CensusTable::Find(const std::string& zipcode) const {
  auto it = index_.find(zipcode);
  return it == index_.end() ? nullptr : &rows_[it->second];
}

std::optional<NeighborhoodMeta> LinkNeighborhood(const Business& business,
                                                 const CensusTable& census) {
  const NeighborhoodMeta* m = census.Find(business.zipcode);
  if (m == nullptr) return std::nullopt;
  return *m;
}

std::string_view HiLoName(HiLo v) { return v == HiLo::kHi ? "hi" : "lo"; }

HiLoCoding CodeHiLo(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("hi/lo coding: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  HiLoCoding out;
  out.threshold = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  out.codes.reserve(n);
  for (double v : values) out.codes.push_back(v >= out.threshold ? HiLo::kHi : HiLo::kLo);
  return out;
}

}  // namespace foodframe
