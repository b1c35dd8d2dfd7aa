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

// Neighborhood covariates joined by zipcode: median income, racial diversity
// (Simpson index over race/ethnicity counts) and per-group population shares.
//
// Census CSV header contract (exact, in this order):
//
//   zipcode,median_income,hispanic,white,black,native,asian,pacific_islander,other,multiracial
//
// The eight count columns are the mutually exclusive 2020 census
// race/ethnicity groups (Hispanic of any race, then non-Hispanic single-race
// groups, then two or more races).

#ifndef FOODFRAME_CENSUS_H_
#define FOODFRAME_CENSUS_H_

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "foodframe/corpus.h"

namespace foodframe {

inline constexpr std::array<std::string_view, 8> kCensusRaceColumns = {
    "hispanic", "white", "black", "native", "asian", "pacific_islander", "other", "multiracial"};

// 1 - sum(p_i^2) with p_i = count_i / total. Throws NumericError when no
// count is positive, ContractViolation on a negative or non-finite count.
double SimpsonDiversity(std::span<const double> counts);
double SimpsonDiversity(const std::map<std::string, double>& counts);

struct NeighborhoodMeta {
  std::string zipcode;
  double median_income = 0.0;
  std::map<std::string, double> race_counts;
  double diversity = 0.0;
  double pct_asian = 0.0;
  double pct_hispanic = 0.0;
};

class CensusTable {
 public:
  CensusTable() = default;
  explicit CensusTable(std::vector<NeighborhoodMeta> rows);

  static CensusTable Read(std::istream& in);
  static CensusTable Load(const std::string& path);

  const NeighborhoodMeta* Find(const std::string& zipcode) const;
  std::size_t size() const { return rows_.size(); }
  const std::vector<NeighborhoodMeta>& rows() const { return rows_; }

 private:
  std::vector<NeighborhoodMeta> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Builds a record from raw counts; derived fields computed here.
NeighborhoodMeta MakeNeighborhood(std::string zipcode, double median_income,
                                  std::map<std::string, double> race_counts);

// nullopt when the business zipcode has no census row (flagged missing; such
// businesses are left out of regression samples).
std::optional<NeighborhoodMeta> LinkNeighborhood(const Business& business,
                                                 const CensusTable& census);

enum class HiLo { kLo, kHi };

std::string_view HiLoName(HiLo v);

struct HiLoCoding {
  double threshold = 0.0;  // sample median
  std::vector<HiLo> codes;
};

// Median split over the given sample; HI iff value >= median (ties -> HI).
// Throws ContractViolation on an empty sample.
HiLoCoding CodeHiLo(std::span<const double> values);

}  // namespace foodframe

#endif  // FOODFRAME_CENSUS_H_
