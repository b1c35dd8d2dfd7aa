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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "foodframe/census.h"
#include "foodframe/error.h"

namespace foodframe {
namespace {

// Pairwise form: probability two draws with replacement differ.
double PairwiseOracle(const std::vector<double>& c) {
  long double total = 0;
  for (double v : c) total += v;
  long double s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (i != j) s += (c[i] / total) * (c[j] / total);
    }
  }
  return static_cast<double>(s);
}

TEST(SimpsonTest, WorkedExamples) {
  EXPECT_DOUBLE_EQ(SimpsonDiversity(std::map<std::string, double>{{"A", 100}}), 0.0);
  EXPECT_DOUBLE_EQ(SimpsonDiversity(std::map<std::string, double>{{"A", 50}, {"B", 50}}), 0.5);
  EXPECT_NEAR(SimpsonDiversity(std::map<std::string, double>{{"A", 10}, {"B", 20}, {"C", 70}}),
              0.46, 1e-12);
}

TEST(SimpsonTest, MatchesPairwiseOracleAndInvariances) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> count(0.0, 5000.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> c(size(rng));
    for (auto& v : c) v = std::floor(count(rng));
    c[0] += 1;
    const double d = SimpsonDiversity(c);
    EXPECT_NEAR(d, PairwiseOracle(c), 1e-12);
    EXPECT_GE(d, 0.0);
    EXPECT_LT(d, 1.0);
    auto perm = c;
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_NEAR(SimpsonDiversity(perm), d, 1e-12);
    const double k = scale(rng);
    auto scaled = c;
    for (auto& v : scaled) v *= k;
    EXPECT_NEAR(SimpsonDiversity(scaled), d, 1e-12);
  }
}

TEST(SimpsonTest, Errors) {
  const std::vector<double> zeros = {0, 0};
  EXPECT_THROW(SimpsonDiversity(zeros), NumericError);
  const std::vector<double> negative = {5, -1};
  EXPECT_THROW(SimpsonDiversity(negative), ContractViolation);
  const std::vector<double> nan = {5, std::nan("")};
  EXPECT_THROW(SimpsonDiversity(nan), ContractViolation);
}

constexpr char kHeader[] =
    "zipcode,median_income,hispanic,white,black,native,asian,pacific_islander,other,multiracial\n";

TEST(CensusTableTest, ReadDerivesShares) {
  std::istringstream in(std::string(kHeader) + "15213,50000,10,60,10,0,20,0,0,0\n");
  const auto t = CensusTable::Read(in);
  const auto* row = t.Find("15213");
  ASSERT_NE(row, nullptr);
  EXPECT_DOUBLE_EQ(row->pct_asian, 20.0);
  EXPECT_DOUBLE_EQ(row->pct_hispanic, 10.0);
  EXPECT_NEAR(row->diversity, 1 - (0.01 + 0.36 + 0.01 + 0.04), 1e-12);
  EXPECT_EQ(t.Find("99999"), nullptr);
}

TEST(CensusTableTest, HeaderContractEnforced) {
  std::istringstream wrong("zipcode,income,hispanic\n15213,1,2\n");
  EXPECT_THROW(CensusTable::Read(wrong), InputError);
  std::istringstream dup(std::string(kHeader) + "15213,1,1,1,1,1,1,1,1,1\n15213,1,1,1,1,1,1,1,1,1\n");
  EXPECT_THROW(CensusTable::Read(dup), InputError);
}

TEST(LinkTest, MissingZipIsNullopt) {
  const CensusTable t({MakeNeighborhood("15213", 1.0, {{"white", 1.0}})});
  Business b;
  b.zipcode = "15213";
  ASSERT_TRUE(LinkNeighborhood(b, t).has_value());
  b.zipcode = "99999";
  EXPECT_FALSE(LinkNeighborhood(b, t).has_value());
}

TEST(HiLoTest, MedianSplitTiesHigh) {
  const std::vector<double> v = {1, 2, 3};
  const auto c = CodeHiLo(v);
  EXPECT_DOUBLE_EQ(c.threshold, 2.0);
  EXPECT_EQ(c.codes, (std::vector<HiLo>{HiLo::kLo, HiLo::kHi, HiLo::kHi}));
  const std::vector<double> same = {4, 4, 4, 4};
  for (HiLo h : CodeHiLo(same).codes) EXPECT_EQ(h, HiLo::kHi);
  const std::vector<double> even = {4, 1, 3, 2};
  const auto e = CodeHiLo(even);
  EXPECT_DOUBLE_EQ(e.threshold, 2.5);
  EXPECT_EQ(e.codes, (std::vector<HiLo>{HiLo::kHi, HiLo::kLo, HiLo::kHi, HiLo::kLo}));
  EXPECT_THROW(CodeHiLo(std::span<const double>{}), ContractViolation);
}

}  // namespace
}  // namespace foodframe
