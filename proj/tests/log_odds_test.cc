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

#include <random>
#include <sstream>

#include "foodframe/error.h"
#include "foodframe/log_odds.h"
#include "oracles.h"

namespace foodframe {
namespace {

using oracle::Counts;

CountTable Build(const std::map<std::string, Counts>& groups, const Counts& prior) {
  CountTable t;
  for (const auto& [g, words] : groups) {
    t.AddGroup(g);
    for (const auto& [w, n] : words) t.Add(g, w, n);
  }
  for (const auto& [w, n] : prior) t.AddPrior(w, n);
  return t;
}

const LogOddsEntry* FindWord(const std::vector<LogOddsEntry>& e, const std::string& w) {
  for (const auto& x : e) {
    if (x.word == w) return &x;
  }
  return nullptr;
}

TEST(LogOddsTest, ToyTableMatchesOracle) {
  const Counts c = {{"a", 4}, {"b", 1}};
  const Counts nc = {{"a", 1}, {"b", 4}};
  const Counts p = {{"a", 5}, {"b", 5}, {"c", 2}};
  const auto entries = WeightedLogOdds(Build({{"C", c}, {"D", nc}}, p), "C");
  for (const char* w : {"a", "b", "c"}) {
    const auto want = oracle::NaiveDelta(c, nc, p, w);
    const auto* got = FindWord(entries, w);
    ASSERT_TRUE(want) << w;
    ASSERT_NE(got, nullptr) << w;
    EXPECT_NEAR(got->delta, *want, 1e-12) << w;
  }
  EXPECT_EQ(entries.front().word, "a");
  EXPECT_GT(entries.front().delta, 0.0);
  EXPECT_NEAR(FindWord(entries, "c")->delta, 0.0, 1e-12);
}

TEST(LogOddsTest, RandomTablesMatchOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> vocab(1, 10), count(0, 100), groups(2, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const int nw = vocab(rng), ng = groups(rng);
    std::map<std::string, Counts> g;
    Counts prior;
    for (int k = 0; k < ng; ++k) {
      for (int w = 0; w < nw; ++w) {
        const int n = count(rng);
        if (n > 0) g["g" + std::to_string(k)]["w" + std::to_string(w)] = n;
      }
      g["g" + std::to_string(k)];
    }
    for (int w = 0; w < nw; ++w) prior["w" + std::to_string(w)] = count(rng) + 1;
    const auto table = Build(g, prior);
    Counts nc;
    for (const auto& [name, words] : g) {
      if (name == "g0") continue;
      for (const auto& [w, n] : words) nc[w] += n;
    }
    const auto entries = WeightedLogOdds(table, "g0");
    for (int w = 0; w < nw; ++w) {
      const std::string word = "w" + std::to_string(w);
      const auto want = oracle::NaiveDelta(g["g0"], nc, prior, word);
      const auto* got = FindWord(entries, word);
      ASSERT_EQ(want.has_value(), got != nullptr) << word;
      if (want) EXPECT_NEAR(got->delta, *want, 1e-9) << word;
    }
    for (std::size_t i = 1; i < entries.size(); ++i) EXPECT_GE(entries[i - 1].delta, entries[i].delta);
  }
}

TEST(LogOddsTest, SymmetricTableIsZero) {
  const Counts half = {{"a", 7}, {"b", 3}, {"c", 12}};
  const Counts p = {{"a", 14}, {"b", 6}, {"c", 24}};
  for (const auto& e : WeightedLogOdds(Build({{"C", half}, {"D", half}}, p), "C")) {
    EXPECT_NEAR(e.delta, 0.0, 1e-12) << e.word;
  }
}

TEST(LogOddsTest, AntisymmetryAndScaleSign) {
  const Counts c = {{"a", 9}, {"b", 2}, {"c", 5}};
  const Counts d = {{"a", 2}, {"b", 9}, {"c", 5}};
  const Counts p = {{"a", 11}, {"b", 11}, {"c", 10}};
  const auto t = Build({{"C", c}, {"D", d}}, p);
  const auto fc = WeightedLogOdds(t, "C");
  const auto fd = WeightedLogOdds(t, "D");
  for (const auto& e : fc) EXPECT_NEAR(e.delta, -FindWord(fd, e.word)->delta, 1e-9);
  Counts c100, d100, p100;
  for (auto& [w, n] : c) c100[w] = 100 * n;
  for (auto& [w, n] : d) d100[w] = 100 * n;
  for (auto& [w, n] : p) p100[w] = 100 * n;
  const auto big = WeightedLogOdds(Build({{"C", c100}, {"D", d100}}, p100), "C");
  for (const auto& e : fc) {
    const auto* b = FindWord(big, e.word);
    if (std::abs(e.delta) > 1e-12) {
      EXPECT_EQ(std::signbit(e.delta), std::signbit(b->delta));
      EXPECT_GT(std::abs(b->delta), std::abs(e.delta));
    }
  }
}

TEST(LogOddsTest, Errors) {
  CountTable t;
  t.Add("C", "a", 1);
  EXPECT_EQ(t.UncoveredWords(), std::vector<std::string>{"a"});
  EXPECT_THROW(WeightedLogOdds(t, "C"), ContractViolation);
  t.AddPrior("a", 1);
  EXPECT_THROW(WeightedLogOdds(t, "Z"), ContractViolation);
  t.UseCorpusPrior();
  EXPECT_EQ(t.PriorTotal(), 1);
}

TEST(TopAssociatedTest, Threshold) {
  std::vector<LogOddsEntry> e = {{"x", 3.1}, {"y", 2.5}, {"z", 1.9}};
  EXPECT_EQ(TopAssociated(e, 10, 2.0).size(), 2u);
  EXPECT_EQ(TopAssociated(e, 1, 2.0).front().word, "x");
  EXPECT_TRUE(TopAssociated(e, 10, 5.0).empty());
}

TEST(FrameFilteredTest, InjectedWordTopsGroup) {
  FrameLexicon exo(Frame::kExoticism, Construct::kOthering);
  for (const char* w : {"exotic", "different", "strange"}) exo.Add(w);
  std::vector<FrameMatch> matches;
  std::map<std::string, Region> region;
  int id = 0;
  auto add = [&](Region r, const std::string& word, int n) {
    for (int i = 0; i < n; ++i) {
      const std::string rid = "r" + std::to_string(id++);
      region[rid] = r;
      matches.push_back({rid, Frame::kExoticism, word, std::nullopt});
    }
  };
  for (Region r : {Region::kUS, Region::kEUR, Region::kLAT, Region::kAS}) {
    add(r, "exotic", r == Region::kAS ? 50 : 5);
    add(r, "different", 20);
    add(r, "strange", 10);
  }
  matches.push_back({"r0", Frame::kLuxury, "posh", std::nullopt});
  const auto lookup = [&](const std::string& rid) -> std::optional<Region> {
    auto it = region.find(rid);
    if (it == region.end()) return std::nullopt;
    return it->second;
  };
  const auto as = FrameFilteredLogOdds(matches, exo, Region::kAS, lookup);
  ASSERT_FALSE(as.empty());
  EXPECT_EQ(as.front().word, "exotic");
  EXPECT_GT(as.front().delta, 2.0);
  EXPECT_EQ(FindWord(as, "posh"), nullptr);

  FrameLexicon disjoint(Frame::kLuxury, Construct::kStatusHigh);
  disjoint.Add("regal");
  EXPECT_TRUE(FrameFilteredLogOdds(matches, disjoint, Region::kAS, lookup).empty());
}

}  // namespace
}  // namespace foodframe
